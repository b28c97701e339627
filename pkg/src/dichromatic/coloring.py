"""Partitions into transitive sets and the dichromatic number.

For tournaments a colour class is acyclic exactly when it is transitive.  On
partial tournaments a class must be fully decided and transitive, so a cover
found there survives in every completion.

If a k-colouring exists, one exists whose class containing the lowest
uncovered vertex is a maximal transitive set of what is left.  The search
therefore only tries, at each level, the maximal sets through that vertex,
obtained by restricting the maximal sets of the whole graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .tournament import ParameterError, Tournament, induced, iter_bits
from .transitive import maximal_transitive_sets, transitive_rows


@dataclass(frozen=True)
class ColorPartition:
    classes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def color_of(self, v: int) -> int:
        for idx, cls in enumerate(self.classes):
            if cls >> v & 1:
                return idx
        raise KeyError(v)


def check_partition(t, classes: Sequence[int]) -> bool:
    """Certificate check: disjoint cover by transitive classes."""
    seen = 0
    for cls in classes:
        if not cls or cls & seen:
            return False
        seen |= cls
        if not transitive_rows(t.out, t.inn, cls):
            return False
    return seen == t.vertices


def split_into_transitive(out, inn, region: int, k: int, sets: Sequence[int],
                          memo: Optional[dict] = None) -> Optional[list[int]]:
    """At most ``k`` transitive classes covering ``region``, or None.

    ``sets`` must contain, for every maximal transitive subset of ``region``,
    a transitive superset (restriction to ``region`` is done here).
    """
    if transitive_rows(out, inn, region):
        return [region]
    if k <= 1:
        return None
    if memo is not None and (region, k) in memo:
        return None
    v = region & -region
    # restrictions of maximal sets; non-maximal ones are harmless duplicates
    through = {s & region for s in sets if s & v}
    if k == 2:
        for s in through:
            if transitive_rows(out, inn, region & ~s):
                return [s, region & ~s]
    else:
        # every class is a restriction of some maximal set
        biggest = max((s & region).bit_count() for s in sets)
        if region.bit_count() <= k * biggest:
            for s in sorted(through, key=lambda s: (-s.bit_count(), s)):
                sub = split_into_transitive(out, inn, region & ~s, k - 1, sets, memo)
                if sub is not None:
                    return [s] + sub
    if memo is not None:
        memo[(region, k)] = True
    return None


def k_colorable(t: Tournament, k: int, sets: Optional[Sequence[int]] = None,
                cache: bool = False) -> Optional[ColorPartition]:
    """A partition into at most ``k`` transitive sets, or None if there is none."""
    if k < 1:
        raise ParameterError("k must be positive")
    if sets is None:
        sets = maximal_transitive_sets(t)
    found = split_into_transitive(t.out, t.inn, t.vertices, k, sets, {} if cache else None)
    if found is None:
        return None
    return ColorPartition(tuple(found))


def k_colorable_partial(p, k: int, sets: Optional[Sequence[int]] = None) -> bool:
    """True iff the vertices split into at most ``k`` fully decided transitive sets.

    A True answer means every completion of ``p`` is k-colourable.
    """
    if k < 1:
        raise ParameterError("k must be positive")
    if sets is None:
        sets = maximal_transitive_sets(p)
    return split_into_transitive(p.out, p.inn, p.vertices, k, sets) is not None


def dichromatic_number(t, cache: bool = False) -> int:
    sets = maximal_transitive_sets(t)
    k = 1
    while split_into_transitive(t.out, t.inn, t.vertices, k, sets, {} if cache else None) is None:
        k += 1
    return k


def optimal_coloring(t) -> ColorPartition:
    sets = maximal_transitive_sets(t)
    k = 1
    while True:
        found = split_into_transitive(t.out, t.inn, t.vertices, k, sets)
        if found is not None:
            return ColorPartition(tuple(found))
        k += 1


def chromatic_of_subset(t, subset: int) -> int:
    """Dichromatic number of the subgraph induced by ``subset``."""
    if not subset:
        raise ParameterError("chromatic_of_subset of an empty set")
    return dichromatic_number(induced(t, subset))


def two_colorable_within(t, subset: int) -> bool:
    """Is ``subset`` coverable by two transitive sets."""
    if transitive_rows(t.out, t.inn, subset):
        return True
    sub = induced(t, subset)
    return split_into_transitive(sub.out, sub.inn, sub.vertices, 2, maximal_transitive_sets(sub)) is not None


def vertex_classes(partition: ColorPartition) -> list[list[int]]:
    return [list(iter_bits(c)) for c in partition.classes]
