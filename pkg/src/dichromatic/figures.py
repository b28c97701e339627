"""Hard-coded small tournaments used by the verification scenarios.

The four 3-chromatic tournaments on 7 vertices share the arcs in
``_T7_COMMON`` and differ on the seven arcs listed per name.  Labels are the
ones used in the drawings, so ``FIGURE1["Pal7"]`` is a relabelled copy of
``paley(7)`` rather than ``paley(7)`` itself.
"""
from __future__ import annotations

from .tournament import Tournament, vset

_T7_COMMON = [
    (0, 1), (0, 2), (0, 3), (4, 0), (5, 0), (6, 0),
    (1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4),
    (1, 5), (1, 6),
]

_T7_SPECIFIC = {
    "Pal7": [(4, 1), (2, 5), (2, 4), (6, 2), (3, 4), (3, 6), (5, 3)],
    "W": [(1, 4), (2, 5), (2, 4), (2, 6), (3, 4), (3, 6), (3, 5)],
    "W0": [(4, 1), (2, 6), (2, 4), (5, 2), (3, 4), (3, 5), (6, 3)],
    "W1": [(1, 4), (2, 6), (2, 4), (5, 2), (3, 4), (3, 5), (6, 3)],
}

FIGURE1 = {name: Tournament.from_arcs(7, _T7_COMMON + extra) for name, extra in _T7_SPECIFIC.items()}


def w1() -> Tournament:
    return FIGURE1["W1"]


# Skeleton of a 12-vertex gluing of W1 (vertices 0..6) with a TT5 {a,b,c,d,x}.
# a,b,c,d are 7..10 in transitive order; x (vertex 11) is left free.
A, B, C, D, X = 7, 8, 9, 10, 11
GLUE_W1 = vset(range(7))
TT4_ABCD = vset((A, B, C, D))

_SKELETON_CROSS = [
    (2, A), (B, 2), (C, 2), (2, D),
    (3, A), (B, 3), (3, C), (D, 3),
    (4, A), (4, B), (C, 4), (4, D),
    (5, A), (B, 5), (5, C), (D, 5),
    (0, A), (0, B), (C, 0), (D, 0),
    (A, 1), (1, B), (C, 1), (D, 1),
    (A, 6), (6, B), (6, C), (D, 6),
]

SKELETON_ARCS = (
    _T7_COMMON
    + _T7_SPECIFIC["W1"]
    + [(A, B), (A, C), (A, D), (B, C), (B, D), (C, D)]
    + _SKELETON_CROSS
)


def skeleton11() -> Tournament:
    """W1 together with a, b, c, d; the 11 vertices induce a copy of Pal_11."""
    return Tournament.from_arcs(11, SKELETON_ARCS)


def skeleton_with_x(rank: int, x_out_to_w1: int) -> Tournament:
    """Complete the 12-vertex skeleton by placing x.

    ``rank`` in 0..4 is the position of x in the transitive order of
    {a,b,c,d,x} (0 means x precedes a).  ``x_out_to_w1`` is a 7-bit mask of
    the W1 vertices that x dominates; the rest dominate x.
    """
    if not 0 <= rank <= 4:
        raise ValueError("rank must lie in 0..4")
    arcs = list(SKELETON_ARCS)
    for pos, v in enumerate((A, B, C, D)):
        arcs.append((X, v) if rank <= pos else (v, X))
    for w in range(7):
        arcs.append((X, w) if x_out_to_w1 >> w & 1 else (w, X))
    return Tournament.from_arcs(12, arcs)


# Two-coloured subsets of the claims about the W1 + TT5 gluing, by W1 labels.
CLAIM_SETS = {
    "014": (0, 1, 4),
    "0123": (0, 1, 2, 3),
    "0456": (0, 4, 5, 6),
    "456": (4, 5, 6),
    "2356": (2, 3, 5, 6),
    "024": (0, 2, 4),
    "1356": (1, 3, 5, 6),
    "123": (1, 2, 3),
    "016": (0, 1, 6),
    "2345": (2, 3, 4, 5),
}

# TT4 sets of X13 led by the arc 01 or 02.
X13_TT4_SETS = [(0, 1, 2, 3), (0, 1, 3, 6), (0, 1, 6, 2), (0, 2, 3, 5)]
