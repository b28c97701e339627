"""Tournaments and partial tournaments stored as out-neighbourhood bitmasks.

Vertex sets are plain ``int`` bitmasks throughout the package: bit ``i`` is
set when vertex ``i`` belongs to the set.  Row ``out[i]`` of a tournament is
the bitmask of vertices ``j`` with an arc ``i -> j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 32


class ParameterError(ValueError):
    """Raised for invalid constructor or operation arguments."""


class UsageError(ValueError):
    """Raised when an operation is applied to a state it does not accept."""


class CapabilityError(ValueError):
    """Raised when an input exceeds what an exhaustive routine supports."""


# -- vertex sets ------------------------------------------------------------

def vset(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def full_mask(n: int) -> int:
    return (1 << n) - 1


def _in_rows(n: int, out: Sequence[int]) -> tuple[int, ...]:
    inn = [0] * n
    for i in range(n):
        for j in iter_bits(out[i]):
            inn[j] |= 1 << i
    return tuple(inn)


def pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


# -- tournaments --------------------------------------------------------------

@dataclass(frozen=True)
class Tournament:
    """A complete orientation of K_n."""

    n: int
    out: tuple[int, ...]

    def __post_init__(self):
        n = self.n
        if not 1 <= n <= MAX_VERTICES:
            raise ParameterError(f"vertex count {n} outside 1..{MAX_VERTICES}")
        if len(self.out) != n:
            raise ParameterError("need one out-row per vertex")
        everything = full_mask(n)
        for i, row in enumerate(self.out):
            if row & ~everything:
                raise ParameterError(f"row {i} names vertices outside 0..{n - 1}")
            if row >> i & 1:
                raise ParameterError(f"loop at vertex {i}")
        inn = self.inn
        for i in range(n):
            if self.out[i] & inn[i]:
                raise ParameterError(f"digon at vertex {i}")
            if self.out[i] | inn[i] | (1 << i) != everything:
                raise ParameterError(f"vertex {i} has an unoriented pair")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        out = [0] * n
        for a, b in arcs:
            out[a] |= 1 << b
        return cls(n, tuple(out))

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> "Tournament":
        n = len(rows)
        return cls(n, tuple(vset(j for j in range(n) if rows[i][j]) for i in range(n)))

    @cached_property
    def inn(self) -> tuple[int, ...]:
        return _in_rows(self.n, self.out)

    @property
    def vertices(self) -> int:
        return full_mask(self.n)

    def has_arc(self, a: int, b: int) -> bool:
        return bool(self.out[a] >> b & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in iter_bits(self.out[i])]

    def out_degrees(self) -> list[int]:
        return [row.bit_count() for row in self.out]

    def in_degrees(self) -> list[int]:
        return [row.bit_count() for row in self.inn]

    def reverse(self) -> "Tournament":
        return Tournament(self.n, self.inn)

    def relabel(self, perm: Sequence[int]) -> "Tournament":
        """Tournament with an arc ``perm[i] -> perm[j]`` for every arc ``i -> j``."""
        out = [0] * self.n
        for i in range(self.n):
            row = 0
            for j in iter_bits(self.out[i]):
                row |= 1 << perm[j]
            out[perm[i]] = row
        return Tournament(self.n, tuple(out))

    def reverse_arc(self, a: int, b: int) -> "Tournament":
        if not self.has_arc(a, b):
            raise UsageError(f"no arc {a}->{b} to reverse")
        out = list(self.out)
        out[a] &= ~(1 << b)
        out[b] |= 1 << a
        return Tournament(self.n, tuple(out))

    def delete(self, v: int) -> "Tournament":
        return induced(self, self.vertices & ~(1 << v))

    def to_partial(self) -> "PartialTournament":
        return PartialTournament(self.n, self.out)

    def __str__(self) -> str:
        return format_tournament(self)


@dataclass(frozen=True)
class PartialTournament:
    """An oriented graph on 0..n-1; pairs without an arc are undecided."""

    n: int
    out: tuple[int, ...]

    def __post_init__(self):
        n = self.n
        if not 1 <= n <= MAX_VERTICES:
            raise ParameterError(f"vertex count {n} outside 1..{MAX_VERTICES}")
        if len(self.out) != n:
            raise ParameterError("need one out-row per vertex")
        everything = full_mask(n)
        inn = self.inn
        for i, row in enumerate(self.out):
            if row & ~everything or row >> i & 1:
                raise ParameterError(f"row {i} is not a valid out-neighbourhood")
            if row & inn[i]:
                raise ParameterError(f"digon at vertex {i}")

    @classmethod
    def empty(cls, n: int) -> "PartialTournament":
        return cls(n, (0,) * n)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "PartialTournament":
        out = [0] * n
        for a, b in arcs:
            out[a] |= 1 << b
        return cls(n, tuple(out))

    @cached_property
    def inn(self) -> tuple[int, ...]:
        return _in_rows(self.n, self.out)

    @property
    def vertices(self) -> int:
        return full_mask(self.n)

    @cached_property
    def undecided(self) -> tuple[tuple[int, int], ...]:
        return tuple(_undecided_pairs(self.n, self.out, self.inn))

    def is_complete(self) -> bool:
        return not self.undecided

    def has_arc(self, a: int, b: int) -> bool:
        return bool(self.out[a] >> b & 1)

    def add_arc(self, a: int, b: int) -> "PartialTournament":
        if a == b or (self.out[a] | self.inn[a]) >> b & 1:
            raise UsageError(f"pair {{{a},{b}}} is already decided")
        out = list(self.out)
        out[a] |= 1 << b
        return PartialTournament(self.n, tuple(out))

    def to_tournament(self) -> Tournament:
        if not self.is_complete():
            raise UsageError(f"{len(self.undecided)} pairs still undecided")
        return Tournament(self.n, self.out)

    def __str__(self) -> str:
        return format_tournament(self)


def _undecided_pairs(n: int, out: Sequence[int], inn: Sequence[int]) -> list[tuple[int, int]]:
    everything = full_mask(n)
    found = []
    for i in range(n):
        free = everything & ~(out[i] | inn[i]) & ~((2 << i) - 1)
        found.extend((i, j) for j in iter_bits(free))
    return found


def induced(t, subset: int):
    """Subtournament on ``subset``, relabelled 0..k-1 in increasing vertex order."""
    if not subset:
        raise ParameterError("induced subgraph of an empty vertex set")
    if subset & ~t.vertices:
        raise ParameterError("vertex set exceeds the tournament")
    verts = members(subset)
    index = {v: k for k, v in enumerate(verts)}
    out = []
    for v in verts:
        row = 0
        for j in iter_bits(t.out[v] & subset):
            row |= 1 << index[j]
        out.append(row)
    return type(t)(len(verts), tuple(out))


def add_arc(p: PartialTournament, a: int, b: int) -> PartialTournament:
    return p.add_arc(a, b)


# -- constructors -------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def quadratic_residues(n: int) -> set[int]:
    return {x * x % n for x in range(1, n)}


def paley(n: int) -> Tournament:
    """Paley tournament: arc ``i -> j`` iff ``j - i`` is a nonzero square mod n."""
    if not _is_prime(n):
        raise ParameterError(f"paley: {n} is not prime")
    if n % 4 != 3:
        raise ParameterError(f"paley: {n} is not congruent to 3 mod 4")
    if n > 31:
        raise ParameterError(f"paley: {n} exceeds 31")
    return circulant(n, quadratic_residues(n))


def circulant(n: int, connection: Iterable[int]) -> Tournament:
    conn = {c % n for c in connection}
    return Tournament(n, tuple(vset((i + c) % n for c in conn) for i in range(n)))


def transitive_tournament(k: int) -> Tournament:
    if not 1 <= k <= MAX_VERTICES:
        raise ParameterError(f"transitive_tournament: {k} outside 1..{MAX_VERTICES}")
    return Tournament(k, tuple(full_mask(k) & ~((2 << i) - 1) for i in range(k)))


def directed_cycle3() -> Tournament:
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


X13_CONNECTION = (1, 2, 3, 5, 6, 9)


def x13() -> Tournament:
    """The TT5-free tournament on 13 vertices: ``i -> j`` iff ``j - i`` in {1,2,3,5,6,9} mod 13."""
    return circulant(13, X13_CONNECTION)


def blowup_index(i: int, copy: int) -> int:
    """Index of copy ``copy`` (1..3) of Paley vertex ``i`` (1..6) in the blow-up."""
    return 3 * i - 3 + copy


def blowup_pal7() -> Tournament:
    """19-vertex blow-up of Pal_7: vertex 0 kept, vertices 1..6 each replaced by a triangle.

    Paley vertex ``i`` becomes indices ``3i-2, 3i-1, 3i`` with the internal
    cycle ``3i-2 -> 3i-1 -> 3i -> 3i-2``.
    """
    pal = paley(7)
    groups = [[0]] + [[3 * i - 2, 3 * i - 1, 3 * i] for i in range(1, 7)]
    arcs = []
    for i in range(7):
        for k in iter_bits(pal.out[i]):
            arcs.extend((u, w) for u in groups[i] for w in groups[k])
    for i in range(1, 7):
        a, b, c = groups[i]
        arcs += [(a, b), (b, c), (c, a)]
    return Tournament.from_arcs(19, arcs)


def disjoint_union(*parts) -> PartialTournament:
    """Oriented graph made of the given pieces with every cross pair undecided."""
    n = sum(p.n for p in parts)
    out = []
    shift = 0
    for p in parts:
        out.extend(row << shift for row in p.out)
        shift += p.n
    return PartialTournament(n, tuple(out))


# -- text format --------------------------------------------------------------

def format_tournament(t) -> str:
    """``n:<bits>`` with one character per pair i<j in lexicographic order."""
    chars = []
    for i, j in pairs(t.n):
        if t.out[i] >> j & 1:
            chars.append("1")
        elif t.out[j] >> i & 1:
            chars.append("0")
        else:
            chars.append("?")
    return f"{t.n}:{''.join(chars)}"


def parse_tournament(line: str):
    """Parse one line of the text format; ``?`` characters give a PartialTournament."""
    text = line.strip()
    head, sep, bits = text.partition(":")
    if not sep or not head.isdigit():
        raise ParameterError(f"malformed tournament line {text!r}")
    n = int(head)
    if not 1 <= n <= MAX_VERTICES:
        raise ParameterError(f"vertex count {n} outside 1..{MAX_VERTICES}")
    plist = pairs(n)
    if len(bits) != len(plist):
        raise ParameterError(f"expected {len(plist)} pair characters for n={n}, got {len(bits)}")
    out = [0] * n
    partial = False
    for (i, j), ch in zip(plist, bits):
        if ch == "1":
            out[i] |= 1 << j
        elif ch == "0":
            out[j] |= 1 << i
        elif ch == "?":
            partial = True
        else:
            raise ParameterError(f"bad pair character {ch!r}")
    cls = PartialTournament if partial else Tournament
    return cls(n, tuple(out))


def read_tournaments(path) -> list:
    with open(path) as fh:
        return [parse_tournament(line) for line in fh if line.strip() and not line.startswith("#")]


def write_tournaments(path, items) -> None:
    with open(path, "w") as fh:
        for t in items:
            fh.write(format_tournament(t) + "\n")
