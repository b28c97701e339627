"""Canonical forms, automorphisms, embeddings and small-order censuses.

Canonical labelling refines an ordered vertex partition by out-degree counts
into each cell, then branches by individualising the vertices of the first
non-singleton cell.  Every leaf is a relabelling; the smallest adjacency code
over the leaves is the canonical code.  The leaf set is closed under the
automorphism group, so leaves tying with the minimum give every automorphism.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .tournament import (
    CapabilityError,
    ParameterError,
    Tournament,
    iter_bits,
    members,
    vset,
)
from .transitive import is_transitive, transitive_order

MAX_CANONICAL_ORDER = 20
MAX_CENSUS_ORDER = 8


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Smallest pair-bit code (first pair most significant) of a tournament."""

    n: int
    code: int

    @property
    def bits(self) -> str:
        m = self.n * (self.n - 1) // 2
        return format(self.code, f"0{m}b") if m else ""

    def to_bytes(self) -> bytes:
        m = self.n * (self.n - 1) // 2
        return bytes([self.n]) + self.code.to_bytes((m + 7) // 8, "big")

    def tournament(self) -> Tournament:
        return tournament_from_code(self.n, self.code)


def encode(out: Sequence[int], order: Sequence[int]) -> int:
    """Pair-bit code of the relabelling sending ``order[k]`` to label ``k``."""
    code = 0
    n = len(order)
    for i in range(n):
        row = out[order[i]]
        for j in range(i + 1, n):
            code = code << 1 | (row >> order[j] & 1)
    return code


def tournament_from_code(n: int, code: int) -> Tournament:
    m = n * (n - 1) // 2
    out = [0] * n
    shift = m
    for i in range(n):
        for j in range(i + 1, n):
            shift -= 1
            if code >> shift & 1:
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
    return Tournament(n, tuple(out))


def _refine(out: Sequence[int], cells: list[int]) -> list[int]:
    """Split cells until every vertex of a cell sees each cell equally often."""
    while True:
        new_cells = []
        for cell in cells:
            if cell & (cell - 1) == 0:
                new_cells.append(cell)
                continue
            groups: dict[tuple, int] = {}
            for v in iter_bits(cell):
                row = out[v]
                sig = tuple((row & c).bit_count() for c in cells)
                groups[sig] = groups.get(sig, 0) | 1 << v
            new_cells.extend(groups[sig] for sig in sorted(groups))
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _leaves(out: Sequence[int], cells: list[int]) -> Iterator[list[int]]:
    cells = _refine(out, cells)
    target = next((k for k, c in enumerate(cells) if c & (c - 1)), None)
    if target is None:
        yield [c.bit_length() - 1 for c in cells]
        return
    cell = cells[target]
    for v in iter_bits(cell):
        bit = 1 << v
        yield from _leaves(out, cells[:target] + [bit, cell & ~bit] + cells[target + 1:])


def _search(t: Tournament) -> tuple[int, list[list[int]]]:
    if t.n > MAX_CANONICAL_ORDER:
        raise CapabilityError(f"canonical labelling supports n <= {MAX_CANONICAL_ORDER}, got {t.n}")
    best = None
    winners: list[list[int]] = []
    for order in _leaves(t.out, [t.vertices]):
        code = encode(t.out, order)
        if best is None or code < best:
            best = code
            winners = [order]
        elif code == best:
            winners.append(order)
    return best, winners


def canonical_form(t: Tournament) -> CanonicalForm:
    code, _ = _search(t)
    return CanonicalForm(t.n, code)


def canonical_labeling(t: Tournament) -> list[int]:
    """``order`` with ``order[k]`` the vertex receiving canonical label ``k``."""
    return _search(t)[1][0]


def canonical_tournament(t: Tournament) -> Tournament:
    return canonical_form(t).tournament()


def automorphisms(t: Tournament) -> list[tuple[int, ...]]:
    """Every automorphism as a tuple ``perm`` with ``perm[v]`` the image of ``v``."""
    _, winners = _search(t)
    ref = winners[0]
    found = set()
    for order in winners:
        perm = [0] * t.n
        for a, b in zip(ref, order):
            perm[a] = b
        found.add(tuple(perm))
    return sorted(found)


def is_automorphism(t: Tournament, perm: Sequence[int]) -> bool:
    return t.relabel(perm) == t


def is_isomorphic(a: Tournament, b: Tournament) -> bool:
    return a.n == b.n and canonical_form(a) == canonical_form(b)


def find_isomorphism(a: Tournament, b: Tournament) -> Optional[list[int]]:
    """A map ``f`` with ``a.relabel(f) == b``, or None."""
    if a.n != b.n:
        return None
    ca, wa = _search(a)
    cb, wb = _search(b)
    if ca != cb:
        return None
    f = [0] * a.n
    for x, y in zip(wa[0], wb[0]):
        f[x] = y
    return f


def orbit(perms: Iterable[Sequence[int]], v: int) -> set[int]:
    return {p[v] for p in perms}


# -- embeddings ---------------------------------------------------------------

def contains_subtournament(t: Tournament, pattern: Tournament) -> Optional[int]:
    """Vertex set of ``t`` inducing a copy of ``pattern``, or None."""
    mapping = find_embedding(t, pattern)
    return None if mapping is None else vset(mapping)


def find_embedding(t: Tournament, pattern: Tournament) -> Optional[list[int]]:
    """Injective ``f`` with ``f[i] -> f[j]`` in ``t`` whenever ``i -> j`` in ``pattern``."""
    m = pattern.n
    if m > t.n:
        return None
    pout = pattern.out_degrees()
    pin = pattern.in_degrees()
    hout = t.out_degrees()
    hin = t.in_degrees()
    # place high-constraint pattern vertices first
    order = sorted(range(m), key=lambda i: -max(pout[i], pin[i]))
    allowed = [vset(v for v in range(t.n) if hout[v] >= pout[i] and hin[v] >= pin[i]) for i in range(m)]
    image = [-1] * m

    def place(k: int, used: int) -> bool:
        if k == m:
            return True
        i = order[k]
        cand = allowed[i] & ~used
        for prev in order[:k]:
            w = image[prev]
            cand &= t.out[w] if pattern.out[prev] >> i & 1 else t.inn[w]
            if not cand:
                return False
        for v in iter_bits(cand):
            image[i] = v
            if place(k + 1, used | 1 << v):
                return True
        image[i] = -1
        return False

    return list(image) if place(0, 0) else None


# -- restricted canonical forms ------------------------------------------------

def canonical_form_fixing(t: Tournament, fixed: int, group: Sequence[Sequence[int]]) -> CanonicalForm:
    """Smallest code of ``g(t)`` over the explicit permutation group ``group``.

    Each permutation must fix ``fixed`` pointwise, and ``fixed`` must induce
    a transitive subtournament (for completions: the distinguished TT5).
    """
    if not fixed or not is_transitive(t, fixed):
        raise ParameterError("fixed set must induce a transitive subtournament")
    fixed_list = members(fixed)
    best = None
    for g in group:
        if any(g[v] != v for v in fixed_list):
            raise ParameterError("group element moves a fixed vertex")
        code = encode(t.relabel(g).out, range(t.n))
        if best is None or code < best:
            best = code
    if best is None:
        raise ParameterError("empty symmetry group")
    return CanonicalForm(t.n, best)


def cyclic_group(n: int, cycle: Sequence[int]) -> list[tuple[int, ...]]:
    """Rotations of ``cycle`` (as positions in 0..n-1), identity first."""
    k = len(cycle)
    group = []
    for r in range(k):
        perm = list(range(n))
        for idx, v in enumerate(cycle):
            perm[v] = cycle[(idx + r) % k]
        group.append(tuple(perm))
    return group


def transitive_labels(t: Tournament, subset: int) -> list[int]:
    return transitive_order(t, subset)


# -- census -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _census(n: int) -> tuple[Tournament, ...]:
    if n == 1:
        return (Tournament(1, (0,)),)
    seen: dict[int, Tournament] = {}
    new = n - 1
    for parent in _census(n - 1):
        for mask in range(1 << new):
            out = [row | (0 if mask >> j & 1 else 1 << new) for j, row in enumerate(parent.out)]
            out.append(mask)
            child = Tournament(n, tuple(out))
            code, winners = _search(child)
            if code not in seen:
                seen[code] = tournament_from_code(n, code)
    return tuple(seen[c] for c in sorted(seen))


def enumerate_tournaments(n: int) -> Iterator[Tournament]:
    """One canonical representative per isomorphism class, by increasing code."""
    if not 1 <= n <= MAX_CENSUS_ORDER:
        raise CapabilityError(f"census supports 1 <= n <= {MAX_CENSUS_ORDER}, got {n}")
    yield from _census(n)
