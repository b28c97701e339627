import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dichromatic.figures import X13_TT4_SETS
from dichromatic.tournament import (
    PartialTournament,
    Tournament,
    blowup_pal7,
    directed_cycle3,
    disjoint_union,
    paley,
    transitive_tournament,
    vset,
    x13,
)
from dichromatic.transitive import (
    contains_tt,
    disjoint_tt5_packing,
    is_acyclic,
    is_transitive,
    maximal_sets_in,
    maximal_transitive_sets,
    restrict_sets,
    transitive_order,
    transitive_subsets,
    update_transitive_sets,
)

from oracles import brute_has_tt, brute_maximal_sets, matrix, subset_is_transitive
from test_tournament import partials, tournaments


def test_is_transitive_examples():
    t = x13()
    assert is_transitive(t, vset((0, 1, 3, 6)))
    assert not is_transitive(directed_cycle3(), 0b111)
    for a, b in itertools.combinations(range(13), 2):
        assert is_transitive(t, vset((a, b)))
    assert is_transitive(t, 0) and is_transitive(t, 1 << 5)


@given(tournaments(max_n=8), st.integers(0, 255))
@settings(max_examples=150, deadline=None)
def test_transitive_iff_distinct_degrees(t, raw):
    s = raw & t.vertices
    degrees = sorted((t.out[v] & s).bit_count() for v in range(t.n) if s >> v & 1)
    assert is_transitive(t, s) == (degrees == list(range(s.bit_count())))
    assert is_transitive(t, s) == is_acyclic(t.out, s)
    assert is_transitive(t, s) == subset_is_transitive(matrix(t), [v for v in range(t.n) if s >> v & 1])


def test_partial_sets_need_every_pair_decided():
    p = PartialTournament.from_arcs(3, [(0, 1), (1, 2)])
    assert not is_transitive(p, 0b111)
    assert is_acyclic(p.out, 0b111)
    assert is_transitive(p.add_arc(0, 2), 0b111)


def test_transitive_order_is_source_first():
    t = x13()
    assert transitive_order(t, vset((0, 1, 6, 2))) == [0, 1, 6, 2]


def test_maximal_sets_examples():
    assert maximal_transitive_sets(directed_cycle3()) == [0b011, 0b101, 0b110]
    assert maximal_transitive_sets(transitive_tournament(5)) == [0b11111]
    assert {s.bit_count() for s in maximal_transitive_sets(paley(7))} == {3}


@given(tournaments(max_n=7))
@settings(max_examples=120, deadline=None)
def test_maximal_sets_match_brute_force(t):
    found = maximal_transitive_sets(t)
    assert found == brute_maximal_sets(t)
    assert all(not (a != b and a & ~b == 0) for a in found for b in found)


@given(partials(max_n=7))
@settings(max_examples=120, deadline=None)
def test_maximal_sets_on_partials_match_brute_force(p):
    assert maximal_transitive_sets(p) == brute_maximal_sets(p)


@given(tournaments(max_n=7), st.integers(0, 127), st.integers(0, 127))
@settings(max_examples=120, deadline=None)
def test_required_vertices_filter(t, raw_region, raw_req):
    region = raw_region & t.vertices
    required = raw_req & region
    expected = sorted(s for s in brute_maximal_sets_in_region(t, region) if s & required == required)
    assert sorted(maximal_sets_in(t.out, t.inn, region, required)) == expected


def brute_maximal_sets_in_region(t, region):
    m = matrix(t)
    verts = [v for v in range(t.n) if region >> v & 1]
    good = set()
    for r in range(len(verts) + 1):
        for c in itertools.combinations(verts, r):
            if subset_is_transitive(m, c):
                good.add(vset(c))
    return [s for s in good if not any((s | 1 << v) in good for v in verts if not s >> v & 1)]


@given(tournaments(max_n=8), st.integers(1, 255))
@settings(max_examples=100, deadline=None)
def test_restrict_sets_gives_subgraph_sets(t, raw):
    region = raw & t.vertices or 1
    expected = sorted(brute_maximal_sets_in_region(t, region))
    assert restrict_sets(maximal_transitive_sets(t), region) == expected


def test_contains_tt_examples():
    assert contains_tt(x13(), 5) is None
    assert contains_tt(paley(7), 4) is None
    found = contains_tt(paley(7), 3)
    assert found is not None and found.bit_count() == 3 and is_transitive(paley(7), found)
    with pytest.raises(ValueError):
        contains_tt(x13(), 0)


@given(tournaments(min_n=3, max_n=10), st.integers(1, 5))
@settings(max_examples=80, deadline=None)
def test_contains_tt_matches_brute_force(t, k):
    found = contains_tt(t, k)
    if found is None:
        assert not brute_has_tt(t, k)
    else:
        assert found.bit_count() == k and is_transitive(t, found)
        assert contains_tt(t, k - 1) is not None if k > 1 else True


@given(tournaments(min_n=16, max_n=16))
@settings(max_examples=40, deadline=None)
def test_sixteen_vertices_always_contain_tt5(t):
    assert contains_tt(t, 5) is not None


def test_transitive_subsets_lists_each_copy_once():
    t = x13()
    found = list(transitive_subsets(t.out, t.vertices, 4))
    assert len(found) == len(set(found))
    m = matrix(t)
    assert sorted(found) == sorted(vset(c) for c in itertools.combinations(range(13), 4) if subset_is_transitive(m, c))
    assert {tuple(sorted(s)) for s in X13_TT4_SETS} <= {tuple(v for v in range(13) if s >> v & 1) for s in found}


def brute_packing(t, count):
    m = matrix(t)
    copies = [vset(c) for c in itertools.combinations(range(t.n), 5) if subset_is_transitive(m, c)]

    def pick(rest, used, start):
        if rest == 0:
            return True
        return any(not (c & used) and pick(rest - 1, used | c, i + 1) for i, c in enumerate(copies[start:], start))

    return pick(count, 0, 0)


def test_packing_two_blocks():
    blocks = disjoint_union(transitive_tournament(5), transitive_tournament(5))
    t = Tournament(10, tuple(row | (0b1111100000 if v < 5 else 0) for v, row in enumerate(blocks.out)))
    found = disjoint_tt5_packing(t, 2)
    assert found is not None and len(found) == 2 and not found[0] & found[1]
    assert all(is_transitive(t, s) and s.bit_count() == 5 for s in found)


def test_packing_x13_with_dominated_tt5():
    # TT5 on 13..17 with every new vertex dominating the whole X13 part
    base = x13()
    out = [row for row in base.out] + [0] * 5
    for k in range(5):
        out[13 + k] = base.vertices | vset(range(14 + k, 18))
    t = Tournament(18, tuple(out))
    for count in (1, 2, 3):
        found = disjoint_tt5_packing(t, count)
        assert (found is not None) == brute_packing(t, count)
        if found is not None:
            assert len(found) == count
            assert all(is_transitive(t, s) for s in found)
            assert all(not a & b for a, b in itertools.combinations(found, 2))


@pytest.mark.slow
def test_packing_blowup_three_copies():
    t = blowup_pal7()
    found = disjoint_tt5_packing(t, 3)
    assert (found is not None) == brute_packing(t, 3)
    if found is not None:
        assert all(is_transitive(t, s) and s.bit_count() == 5 for s in found)


def test_packing_count_range():
    with pytest.raises(ValueError):
        disjoint_tt5_packing(x13(), 4)


# -- incremental update ---------------------------------------------------------

def test_update_rejects_missing_arc():
    p = PartialTournament.empty(3)
    with pytest.raises(ValueError):
        update_transitive_sets(maximal_transitive_sets(p), p, 0, 1)


def test_update_only_adds_sets_through_the_new_arc():
    # triangle 0->1->2->0 beside an isolated vertex 3
    p = PartialTournament.from_arcs(4, [(0, 1), (1, 2), (2, 0)])
    before = maximal_transitive_sets(p)
    q = p.add_arc(3, 2)
    after = update_transitive_sets(before, q, 3, 2)
    assert after == maximal_transitive_sets(q)
    both = vset((2, 3))
    assert all(s & both == both for s in set(after) - set(before))
    assert [s for s in before if not s & both] == [s for s in after if not s & both]


def _replay(p, order, rnd):
    sets = maximal_transitive_sets(p)
    for a, b in order:
        if rnd.random() < 0.5:
            a, b = b, a
        p = p.add_arc(a, b)
        sets = update_transitive_sets(sets, p, a, b)
        assert sets == maximal_transitive_sets(p)
        assert all(not (x != y and x & ~y == 0) for x in sets for y in sets)
    return p


@given(partials(max_n=7), st.randoms(use_true_random=False))
@settings(max_examples=80, deadline=None)
def test_update_matches_recomputation_random_orders(p, rnd):
    order = list(p.undecided)
    rnd.shuffle(order)
    _replay(p, order, rnd)


def test_update_from_empty_six_vertex_graph():
    rnd = random.Random(3)
    empty = PartialTournament.empty(6)
    for _ in range(30):
        order = list(empty.undecided)
        rnd.shuffle(order)
        _replay(empty, order, rnd)
