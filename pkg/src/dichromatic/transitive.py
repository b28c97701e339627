"""Transitive subtournaments: detection, maximal-set enumeration, packings.

On a :class:`PartialTournament` a vertex set counts as transitive only when
every pair inside it is decided and the arcs form a transitive tournament.
Such a set stays transitive in every completion, which is what makes a cover
by k of them a sound reason to abandon a branch.
"""
from __future__ import annotations

from typing import Iterator, Optional, Sequence

from .tournament import iter_bits


# -- transitivity -------------------------------------------------------------

def is_acyclic(out: Sequence[int], subset: int) -> bool:
    """True iff the arcs of ``out`` restricted to ``subset`` form no directed cycle."""
    remaining = subset
    while remaining:
        sinks = 0
        for v in iter_bits(remaining):
            if not out[v] & remaining:
                sinks |= 1 << v
        if not sinks:
            return False
        remaining &= ~sinks
    return True


def transitive_rows(out: Sequence[int], inn: Sequence[int], subset: int) -> bool:
    """All pairs inside ``subset`` decided and the induced tournament transitive."""
    degrees = 0
    rest = subset
    while rest:
        low = rest & -rest
        rest ^= low
        v = low.bit_length() - 1
        row = out[v] & subset
        if (row | inn[v] & subset | low) != subset:
            return False
        bit = 1 << row.bit_count()
        if degrees & bit:
            return False
        degrees |= bit
    return True


def is_transitive(t, subset: int) -> bool:
    """True iff ``subset`` induces a transitive tournament (every pair decided)."""
    return transitive_rows(t.out, t.inn, subset)


def transitive_order(t, subset: int) -> list[int]:
    """Vertices of a transitive set from source to sink."""
    out = t.out
    return sorted(iter_bits(subset), key=lambda v: -(out[v] & subset).bit_count())


# -- TT_k search --------------------------------------------------------------

def _find_tt(out: Sequence[int], cand: int, k: int) -> Optional[int]:
    if k <= 0:
        return 0
    if cand.bit_count() < k:
        return None
    if k == 1:
        return cand & -cand
    ranked = sorted(((out[v] & cand).bit_count(), v) for v in iter_bits(cand))
    for degree, v in reversed(ranked):
        if degree < k - 1:
            break
        found = _find_tt(out, cand & out[v], k - 1)
        if found is not None:
            return found | 1 << v
    return None


def contains_tt(t, k: int, within: Optional[int] = None) -> Optional[int]:
    """A vertex set inducing TT_k, or None.

    For partial tournaments only fully decided copies count.
    """
    if k < 1:
        raise ValueError("k must be positive")
    cand = t.vertices if within is None else within
    return _find_tt(t.out, cand, k)


def transitive_subsets(out: Sequence[int], cand: int, k: int) -> Iterator[int]:
    """Every k-subset of ``cand`` whose arcs all point forward in some order."""
    if k == 0:
        yield 0
        return
    for v in iter_bits(cand):
        sub = cand & out[v]
        if sub.bit_count() < k - 1:
            continue
        bit = 1 << v
        for rest in transitive_subsets(out, sub, k - 1):
            yield rest | bit


def disjoint_tt5_packing(t, count: int, size: int = 5) -> Optional[list[int]]:
    """``count`` pairwise disjoint vertex sets each inducing TT_size, or None."""
    if count not in (1, 2, 3):
        raise ValueError("count must be 1, 2 or 3")
    return _pack(t.out, t.vertices, count, size, 0)


def _pack(out, cand: int, count: int, size: int, floor: int) -> Optional[list[int]]:
    if count == 1:
        found = _find_tt(out, cand, size)
        return None if found is None else [found]
    for first in transitive_subsets(out, cand, size):
        # unordered packings: insist on increasing masks
        if first < floor:
            continue
        rest = _pack(out, cand & ~first, count - 1, size, first)
        if rest is not None:
            return [first] + rest
    return None


def has_disjoint_tt(out: Sequence[int], cand: int, count: int, size: int = 5) -> bool:
    return _pack(out, cand, count, size, 0) is not None


# -- maximal transitive sets ---------------------------------------------------

def maximal_transitive_sets(t) -> list[int]:
    """All inclusion-maximal transitive vertex sets, sorted by bitmask."""
    return sorted(maximal_sets_in(t.out, t.inn, t.vertices))


def maximal_sets_in(out, inn, region: int, required: int = 0) -> list[int]:
    """Maximal transitive subsets of ``region`` containing ``required``, decided arcs only."""
    # A transitive set is a sequence s1..sm with each element dominating the
    # later ones.  gaps[p] holds the outside vertices that could still be
    # inserted right after position p; the set is maximal iff all gaps are
    # empty once nothing can be appended.
    found = []

    def extend(chosen: int, cand: int, gaps: list[int]) -> None:
        if not cand:
            if not any(gaps):
                found.append(chosen)
            return
        rest = cand
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            nxt = cand & out[v]
            if required & ~(chosen | low | nxt):
                continue
            iv = inn[v]
            new_gaps = [g & iv for g in gaps]
            new_gaps.append(cand & iv)
            # a gap vertex dominating every future candidate stays insertable
            if any(nxt & ~out[u] == 0 for g in new_gaps if g for u in iter_bits(g)):
                continue
            extend(chosen | low, nxt, new_gaps)

    extend(0, region, [])
    return found


def update_transitive_sets(sets: Sequence[int], p, a: int, b: int) -> list[int]:
    """Maximal transitive sets after the arc ``a -> b`` was added to obtain ``p``.

    ``sets`` must be the correct list for ``p`` without that arc.
    """
    if not p.out[a] >> b & 1:
        raise ValueError(f"arc {a}->{b} is not present in the given tournament")
    return _update(sets, p.out, p.inn, a, b)


def _update(sets, out, inn, a: int, b: int) -> list[int]:
    # Old sets stay transitive.  New maximal sets all contain the arc a->b,
    # and only old sets holding exactly one of a, b can become dominated.
    both = 1 << a | 1 << b
    region = both
    for x in iter_bits(~both & (out[a] | inn[a]) & (out[b] | inn[b])):
        # {a, b, x} must not be the cycle a->b->x->a
        if not (out[b] >> x & 1 and out[x] >> a & 1):
            region |= 1 << x
    fresh = maximal_sets_in(out, inn, region, both)
    if not fresh:
        return list(sets)
    kept = []
    for s in sets:
        if s & both and any(s & ~f == 0 for f in fresh):
            continue
        kept.append(s)
    return sorted(kept + fresh)


def restrict_sets(sets: Sequence[int], region: int) -> list[int]:
    """Maximal sets of the subgraph on ``region`` from those of the whole graph."""
    cut = {s & region for s in sets}
    cut.discard(0)
    return sorted(c for c in cut if not any(d != c and c & ~d == 0 for d in cut))
