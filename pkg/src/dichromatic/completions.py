"""Branch-and-prune extension of partial tournaments, and the completion objects.

A search node is an oriented graph.  The node is cut when its vertices split
into ``k`` fully decided transitive sets (then every completion is
k-colourable), or, optionally, when the decided arcs already contain two
disjoint TT5.  Otherwise an undecided pair is oriented both ways.

The maximal transitive sets of a node are inherited from its parent and patched
for the one new arc instead of being recomputed.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .coloring import k_colorable, split_into_transitive, two_colorable_within
from .isomorphism import CanonicalForm, canonical_form_fixing, cyclic_group
from .tournament import (
    ParameterError,
    PartialTournament,
    Tournament,
    format_tournament,
    full_mask,
    iter_bits,
    members,
    parse_tournament,
    transitive_tournament,
    directed_cycle3,
    disjoint_union,
    vset,
)
from .transitive import _update, has_disjoint_tt, is_transitive, maximal_transitive_sets


@dataclass(frozen=True)
class Pruner:
    """Which cuts a completion search may apply.

    ``k`` cuts a node whose vertex set splits into ``k`` transitive sets, so only
    completions of dichromatic number above ``k`` survive.  ``two_tt5`` cuts a
    node whose decided arcs contain two disjoint TT5; this restricts the
    output to completions without such a pair rather than to colourings.
    """

    k: Optional[int] = None
    two_tt5: bool = False

    @classmethod
    def chi(cls, k: int) -> "Pruner":
        return cls(k=k)

    @classmethod
    def parse(cls, text: str) -> "Pruner":
        k = None
        two = False
        for part in text.split("+"):
            part = part.strip()
            if part.startswith("chi") and part[3:].isdigit():
                k = int(part[3:])
            elif part == "tt5x2":
                two = True
            else:
                raise ParameterError(f"unknown pruner {part!r}")
        return cls(k=k, two_tt5=two)

    def __str__(self) -> str:
        parts = []
        if self.k is not None:
            parts.append(f"chi{self.k}")
        if self.two_tt5:
            parts.append("tt5x2")
        return "+".join(parts) or "none"

    def cuts(self, out, inn, vertices: int, sets) -> bool:
        if self.k is not None and split_into_transitive(out, inn, vertices, self.k, sets) is not None:
            return True
        if self.two_tt5 and has_disjoint_tt(out, vertices, 2):
            return True
        return False

    def accepts(self, t: Tournament) -> bool:
        """Exact re-check of a finished tournament, independent of the search state."""
        if self.k is not None and k_colorable(t, self.k) is not None:
            return False
        if self.two_tt5 and has_disjoint_tt(t.out, t.vertices, 2):
            return False
        return True


K_COLORABLE_CUT = Pruner.chi
TWO_DISJOINT_TT5_CUT = Pruner(two_tt5=True)


@dataclass
class SearchStats:
    nodes: int = 0
    cuts: int = 0
    emitted: int = 0
    rejected_final: int = 0
    seconds: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.cuts += other.cuts
        self.emitted += other.emitted
        self.rejected_final += other.rejected_final
        self.seconds += other.seconds

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "cuts": self.cuts,
            "emitted": self.emitted,
            "rejected_final": self.rejected_final,
            "seconds": round(self.seconds, 3),
        }


def _first_free_pair(out, inn, n: int, region: int) -> Optional[tuple[int, int]]:
    for a in iter_bits(region):
        free = region & ~(out[a] | inn[a]) & ~((2 << a) - 1)
        if free:
            return a, (free & -free).bit_length() - 1
    return None


def choose_pair(out, inn, n: int, sets, strategy: str) -> Optional[tuple[int, int]]:
    """Undecided pair to branch on; ``lex`` is the reproducibility baseline."""
    if strategy == "maxset" and sets:
        top = max(s.bit_count() for s in sets)
        best = None
        for s in sets:
            if s.bit_count() == top:
                pair = _first_free_pair(out, inn, n, s)
                if pair is not None and (best is None or pair < best):
                    best = pair
        if best is not None:
            return best
    elif strategy not in ("lex", "maxset"):
        raise ParameterError(f"unknown branching strategy {strategy!r}")
    return _first_free_pair(out, inn, n, full_mask(n))


class CompletionSearch:
    """Depth-first completion search whose open branches can be saved and resumed."""

    def __init__(self, root: PartialTournament, prune: Pruner, strategy: str = "maxset",
                 frontier: Optional[Sequence[PartialTournament]] = None):
        self.n = root.n
        self.prune = prune
        self.strategy = strategy
        self.stats = SearchStats()
        nodes = [root] if frontier is None else list(frontier)
        self._stack = [(p.out, p.inn, maximal_transitive_sets(p)) for p in nodes]

    @property
    def done(self) -> bool:
        return not self._stack

    def frontier(self) -> list[PartialTournament]:
        return [PartialTournament(self.n, out) for out, _, _ in self._stack]

    def run(self, max_nodes: Optional[int] = None) -> Iterator[Tournament]:
        """Yield surviving completions; stop after ``max_nodes`` nodes if given."""
        n = self.n
        everything = full_mask(n)
        stack = self._stack
        prune = self.prune
        stats = self.stats
        start = time.perf_counter()
        budget = max_nodes
        try:
            while stack:
                if budget is not None:
                    if budget <= 0:
                        return
                    budget -= 1
                out, inn, sets = stack.pop()
                stats.nodes += 1
                if prune.cuts(out, inn, everything, sets):
                    stats.cuts += 1
                    continue
                pair = choose_pair(out, inn, n, sets, self.strategy)
                if pair is None:
                    t = Tournament(n, out)
                    if prune.accepts(t):
                        stats.emitted += 1
                        yield t
                    else:
                        stats.rejected_final += 1
                    continue
                a, b = pair
                # push b->a first so that a->b is explored first
                for x, y in ((b, a), (a, b)):
                    o = list(out)
                    i = list(inn)
                    o[x] |= 1 << y
                    i[y] |= 1 << x
                    stack.append((tuple(o), tuple(i), _update(sets, o, i, x, y)))
        finally:
            stats.seconds += time.perf_counter() - start

    def to_state(self) -> dict:
        return {
            "n": self.n,
            "prune": str(self.prune),
            "strategy": self.strategy,
            "frontier": [format_tournament(p) for p in self.frontier()],
            "stats": self.stats.as_dict(),
        }

    @classmethod
    def from_state(cls, state: dict, backend: str = "python") -> "CompletionSearch":
        frontier = [_as_partial(parse_tournament(s)) for s in state["frontier"]]
        dummy = PartialTournament.empty(state["n"])
        search = make_search(dummy, Pruner.parse(state["prune"]), state["strategy"], frontier, backend)
        stats = state.get("stats", {})
        search.stats = SearchStats(
            nodes=stats.get("nodes", 0),
            cuts=stats.get("cuts", 0),
            emitted=stats.get("emitted", 0),
            rejected_final=stats.get("rejected_final", 0),
            seconds=stats.get("seconds", 0.0),
        )
        return search


BACKENDS = ("python", "numba", "auto")


def resolve_backend(backend: str, prune: Pruner) -> str:
    """``auto`` picks the compiled kernel when it is installed and supports ``prune``."""
    if backend not in BACKENDS:
        raise ParameterError(f"unknown backend {backend!r}")
    if backend == "python":
        return backend
    from . import accel

    if accel.kernel_supports(prune):
        return "numba"
    if backend == "numba":
        raise ParameterError(f"compiled kernel unavailable for pruner {prune}")
    return "python"


def make_search(root, prune: Pruner, strategy: str = "maxset", frontier=None,
                backend: str = "python") -> CompletionSearch:
    if resolve_backend(backend, prune) == "numba":
        from .accel import kernel_search_class

        return kernel_search_class()(_as_partial(root), prune, strategy, frontier)
    return CompletionSearch(_as_partial(root), prune, strategy, frontier)


def _as_partial(t) -> PartialTournament:
    return t if isinstance(t, PartialTournament) else t.to_partial()


def completions(p: PartialTournament, prune: Pruner, strategy: str = "maxset",
                stats: Optional[SearchStats] = None, backend: str = "python") -> Iterator[Tournament]:
    """Every completion of ``p`` that survives ``prune``, as a lazy stream."""
    search = make_search(p, prune, strategy, backend=backend)
    try:
        yield from search.run()
    finally:
        if stats is not None:
            stats.merge(search.stats)


# -- completions of a TT5 with a triangle ---------------------------------------

TT5 = vset(range(5))
TRIANGLE = vset((5, 6, 7))
ROTATIONS = cyclic_group(8, (5, 6, 7))


@dataclass(frozen=True)
class Completion:
    """A tournament with distinguished transitive copies and a glue part."""

    t: Tournament
    distinguished: tuple[int, ...]
    glue: int

    def __post_init__(self):
        covered = self.glue
        for d in self.distinguished:
            if d & covered:
                raise ParameterError("distinguished sets and glue overlap")
            if d.bit_count() != 5 or not is_transitive(self.t, d):
                raise ParameterError("distinguished set does not induce TT5")
            covered |= d
        if covered != self.t.vertices:
            raise ParameterError("distinguished sets and glue must cover every vertex")

    @property
    def tt5(self) -> int:
        return self.distinguished[0]


def eight_completion_root() -> PartialTournament:
    return disjoint_union(transitive_tournament(5), directed_cycle3())


def eight_completions(strategy: str = "maxset", stats: Optional[SearchStats] = None,
                      backend: str = "python") -> list[Completion]:
    """3-chromatic gluings of TT5 (0..4) and the triangle 5->6->7->5, one per rotation class."""
    return dedup_eight(completions(eight_completion_root(), Pruner.chi(2), strategy, stats, backend))


def dedup_eight(raw) -> list[Completion]:
    """One representative per triangle-rotation class, sorted by code."""
    best: dict[int, Tournament] = {}
    for t in raw:
        code = canonical_form_fixing(t, TT5, ROTATIONS).code
        best.setdefault(code, t)
    found = []
    for code in sorted(best):
        found.append(Completion(CanonicalForm(8, code).tournament(), (TT5,), TRIANGLE))
    return found


# -- gluing ---------------------------------------------------------------------

def glue_identify(c1, s1: int, c2, s2: int, matching) -> PartialTournament:
    """Identify the marked part ``s2`` of ``c2`` with ``s1`` of ``c1``.

    ``matching`` maps each vertex of ``s1`` to a vertex of ``s2`` (dict or
    sequence indexed by vertex).  Vertices of ``c1`` keep their labels; the
    unmarked vertices of ``c2`` follow in increasing order.  Pairs between
    the two unmarked parts stay undecided.
    """
    m = {v: matching[v] for v in iter_bits(s1)}
    if sorted(m.values()) != members(s2) or len(m) != s2.bit_count():
        raise ParameterError("matching is not a bijection between the marked sets")
    for x in m:
        for y in m:
            if x != y and bool(c1.out[x] >> y & 1) != bool(c2.out[m[x]] >> m[y] & 1):
                raise ParameterError(f"matching does not preserve the pair {x},{y}")
    rest2 = members(c2.vertices & ~s2)
    label = {v: k for v, k in ((m[x], x) for x in m)}
    for k, v in enumerate(rest2):
        label[v] = c1.n + k
    n = c1.n + len(rest2)
    out = list(c1.out) + [0] * len(rest2)
    for u in range(c2.n):
        for w in iter_bits(c2.out[u]):
            out[label[u]] |= 1 << label[w]
    return PartialTournament(n, tuple(out))


def identify_eight(c: Completion, c2: Completion, rotation: int) -> PartialTournament:
    """13-vertex oriented graph: ``c`` on 0..7, the TT5 of ``c2`` on 8..12."""
    if rotation not in (0, 1, 2):
        raise ParameterError("rotation must be 0, 1 or 2")
    matching = {5 + i: 5 + (i + rotation) % 3 for i in range(3)}
    return glue_identify(c.t, TRIANGLE, c2.t, TRIANGLE, matching)


def thirteen_completions(c: Completion, c2: Completion, rotation: int, strategy: str = "maxset",
                         stats: Optional[SearchStats] = None, backend: str = "python") -> list[Tournament]:
    """4-chromatic orientations of the 25 pairs between the two TT5 copies."""
    return list(completions(identify_eight(c, c2, rotation), Pruner.chi(3), strategy, stats, backend))


# -- types ----------------------------------------------------------------------

TYPE_MIN, TYPE_MAX = 3, 5


@dataclass(frozen=True)
class CompletionType:
    """Glue subsets (as local bitmasks over ``glue``) that 2-colour with the TT5."""

    glue: tuple[int, ...]
    members: frozenset

    def __contains__(self, local_mask: int) -> bool:
        return local_mask in self.members

    def vertex_sets(self) -> list[int]:
        return sorted(vset(self.glue[i] for i in iter_bits(m)) for m in self.members)


def completion_type(t: Tournament, tt5: int, glue: int) -> CompletionType:
    """Subsets B' of ``glue`` with 3 <= |B'| <= 5 and tt5 + B' 2-colourable."""
    glue_list = members(glue)
    found = set()
    for size in range(TYPE_MIN, TYPE_MAX + 1):
        for combo in itertools.combinations(range(len(glue_list)), size):
            chosen = vset(glue_list[i] for i in combo)
            if two_colorable_within(t, tt5 | chosen):
                found.add(vset(combo))
    return CompletionType(tuple(glue_list), frozenset(found))


def types_compatible(t1: CompletionType, t2: CompletionType) -> bool:
    """True iff some member of t1 and some member of t2 partition the glue set."""
    if len(t1.glue) != len(t2.glue):
        raise ParameterError("types over different glue sizes")
    full = full_mask(len(t1.glue))
    return any(full ^ m in t2.members for m in t1.members)


def compatible_split(t: Tournament, tt5_a: int, tt5_b: int, glue: int) -> Optional[tuple[int, int]]:
    """Direct search on a glued graph for B1 | B2 = glue with both sides 2-colourable."""
    glue_list = members(glue)
    for bits in range(1 << len(glue_list)):
        b1 = vset(glue_list[i] for i in iter_bits(bits))
        b2 = glue & ~b1
        if two_colorable_within(t, tt5_a | b1) and two_colorable_within(t, tt5_b | b2):
            return b1, b2
    return None
