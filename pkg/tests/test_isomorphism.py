import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dichromatic.completions import ROTATIONS, TT5, eight_completion_root
from dichromatic.figures import FIGURE1, X13_TT4_SETS
from dichromatic.isomorphism import (
    CanonicalForm,
    automorphisms,
    canonical_form,
    canonical_form_fixing,
    canonical_labeling,
    canonical_tournament,
    contains_subtournament,
    cyclic_group,
    encode,
    enumerate_tournaments,
    find_embedding,
    find_isomorphism,
    is_automorphism,
    is_isomorphic,
    orbit,
)
from dichromatic.tournament import (
    CapabilityError,
    ParameterError,
    Tournament,
    blowup_pal7,
    induced,
    paley,
    transitive_tournament,
    vset,
    x13,
)
from dichromatic.transitive import transitive_order, transitive_subsets

from oracles import brute_census_count, brute_min_code
from test_tournament import tournaments


def shuffled(t, rnd):
    perm = list(range(t.n))
    rnd.shuffle(perm)
    return t.relabel(perm)


@given(tournaments(max_n=10), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_canonical_form_is_relabelling_invariant(t, rnd):
    u = shuffled(t, rnd)
    assert canonical_form(u) == canonical_form(t)
    f = find_isomorphism(t, u)
    assert f is not None and t.relabel(f) == u
    order = canonical_labeling(t)
    assert encode(t.out, order) == canonical_form(t).code


@given(tournaments(max_n=9))
@settings(max_examples=60, deadline=None)
def test_canonical_form_is_idempotent(t):
    c = canonical_tournament(t)
    assert canonical_tournament(c) == c
    assert canonical_form(c) == canonical_form(t)
    form = canonical_form(t)
    assert CanonicalForm(form.n, form.code).tournament() == c
    assert len(form.bits) == t.n * (t.n - 1) // 2
    assert form.to_bytes()[0] == t.n


@given(tournaments(min_n=2, max_n=6), tournaments(min_n=2, max_n=6))
@settings(max_examples=80, deadline=None)
def test_equal_codes_iff_isomorphic_brute_force(a, b):
    if a.n != b.n:
        assert not is_isomorphic(a, b)
        return
    assert (canonical_form(a) == canonical_form(b)) == (brute_min_code(a) == brute_min_code(b))


def test_random_pairs_on_eight_vertices_agree_with_explicit_search():
    rnd = random.Random(11)
    eight = list(enumerate_tournaments(8))
    for _ in range(100):
        a = rnd.choice(eight)
        b = shuffled(rnd.choice([a, rnd.choice(eight)]), rnd)
        f = find_isomorphism(a, b)
        explicit = any(a.relabel(p) == b for p in _candidate_maps(a, b))
        assert (f is not None) == explicit == (canonical_form(a) == canonical_form(b))


def _candidate_maps(a, b):
    # all degree-preserving bijections: an independent isomorphism search
    da, db = a.out_degrees(), b.out_degrees()
    if sorted(da) != sorted(db):
        return
    for perm in itertools.permutations(range(a.n)):
        if all(da[v] == db[perm[v]] for v in range(a.n)):
            yield perm


def test_canonical_form_capability_cap():
    with pytest.raises(CapabilityError):
        canonical_form(transitive_tournament(21))


def test_figure1_tournaments_pairwise_distinct():
    codes = [canonical_form(t) for t in FIGURE1.values()]
    assert len(set(codes)) == 4


def test_w1_is_rigid():
    assert automorphisms(FIGURE1["W1"]) == [tuple(range(7))]


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_transitive_tournaments_are_rigid(n):
    assert automorphisms(transitive_tournament(n)) == [tuple(range(n))]


@pytest.mark.parametrize("t, order", [(x13(), 39), (paley(7), 21), (paley(11), 55), (paley(19), 171), (blowup_pal7(), 2187)])
def test_automorphism_groups(t, order):
    group = automorphisms(t)
    assert len(group) == order
    assert math.factorial(t.n) % len(group) == 0
    assert all(is_automorphism(t, p) for p in group[:50])
    members_ = set(group)
    for p, q in itertools.islice(itertools.product(group, group), 200):
        assert tuple(p[q[v]] for v in range(t.n)) in members_


def test_x13_is_vertex_transitive():
    assert orbit(automorphisms(x13()), 0) == set(range(13))


def test_x13_arc_orbits_reach_01_or_02():
    t = x13()
    group = automorphisms(t)
    for i, j in t.arcs():
        assert any((p[i], p[j]) in ((0, 1), (0, 2)) for p in group)


def test_x13_tt4_sets_led_by_01_or_02():
    t = x13()
    led = []
    for s in transitive_subsets(t.out, t.vertices, 4):
        order = transitive_order(t, s)
        if tuple(order[:2]) in ((0, 1), (0, 2)):
            led.append(tuple(order))
    assert sorted(led) == sorted(tuple(s) for s in X13_TT4_SETS)


def test_x13_residuals_rigid_and_distinct():
    t = x13()
    residuals = [induced(t, t.vertices & ~vset(s)) for s in X13_TT4_SETS]
    assert len({canonical_form(r) for r in residuals}) == 4
    assert all(len(automorphisms(r)) == 1 for r in residuals)


def test_contains_subtournament_examples():
    pal11 = paley(11)
    # exhaustive over the 330 seven-subsets: Pal_11 has no induced Pal_7
    target = canonical_form(paley(7))
    assert not any(canonical_form(induced(pal11, vset(c))) == target for c in itertools.combinations(range(11), 7))
    assert contains_subtournament(pal11, paley(7)) is None
    # removing the TT4 {0,1,4,5} leaves W1
    rest = induced(pal11, pal11.vertices & ~vset((0, 1, 4, 5)))
    assert is_isomorphic(rest, FIGURE1["W1"])
    assert contains_subtournament(pal11, FIGURE1["W1"]) is not None
    assert contains_subtournament(x13(), x13()) == x13().vertices
    assert contains_subtournament(x13(), transitive_tournament(5)) is None


@given(tournaments(min_n=4, max_n=8), st.integers(2, 5))
@settings(max_examples=60, deadline=None)
def test_find_embedding_matches_subset_search(t, m):
    pattern = transitive_tournament(m) if m % 2 else paley(3) if m == 3 else transitive_tournament(m)
    f = find_embedding(t, pattern)
    target = canonical_form(pattern)
    exists = any(canonical_form(induced(t, vset(c))) == target for c in itertools.combinations(range(t.n), pattern.n))
    assert (f is not None) == exists
    if f is not None:
        assert len(set(f)) == pattern.n
        for i, j in pattern.arcs():
            assert t.has_arc(f[i], f[j])


def test_census_counts_small_orders_brute_force():
    for n in range(1, 7):
        assert len(list(enumerate_tournaments(n))) == brute_census_count(n)


def test_census_stream_is_canonical_and_increasing():
    seven = list(enumerate_tournaments(7))
    codes = [canonical_form(t).code for t in seven]
    assert codes == sorted(set(codes))
    assert all(canonical_tournament(t) == t for t in seven)


@pytest.mark.parametrize("n", [0, 9])
def test_census_capability(n):
    with pytest.raises(CapabilityError):
        list(enumerate_tournaments(n))


def test_canonical_form_fixing():
    root = eight_completion_root()
    out = list(root.out)
    rnd = random.Random(5)
    for a in range(5):
        for b in range(5, 8):
            if rnd.random() < 0.5:
                out[a] |= 1 << b
            else:
                out[b] |= 1 << a
    t = Tournament(8, tuple(out))
    identity = [tuple(range(8))]
    assert canonical_form_fixing(t, TT5, identity).code == encode(t.out, range(8))
    codes = {canonical_form_fixing(t.relabel(g), TT5, ROTATIONS) for g in ROTATIONS}
    assert len(codes) == 1
    with pytest.raises(ParameterError):
        canonical_form_fixing(t, vset((5, 6, 7)), identity)
    with pytest.raises(ParameterError):
        canonical_form_fixing(t, TT5, [tuple([1, 0] + list(range(2, 8)))])
    assert cyclic_group(8, (5, 6, 7))[0] == tuple(range(8))
