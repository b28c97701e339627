import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dichromatic import accel
from dichromatic.coloring import two_colorable_within
from dichromatic.completions import (
    ROTATIONS,
    TRIANGLE,
    TT5,
    Completion,
    CompletionSearch,
    Pruner,
    SearchStats,
    completion_type,
    compatible_split,
    completions,
    dedup_eight,
    eight_completion_root,
    eight_completions,
    glue_identify,
    identify_eight,
    make_search,
    resolve_backend,
    types_compatible,
)
from dichromatic.tournament import (
    ParameterError,
    PartialTournament,
    Tournament,
    format_tournament,
    induced,
    transitive_tournament,
    vset,
)

from oracles import all_completions, brute_chi, matrix, subset_is_transitive

needs_numba = pytest.mark.skipif(not accel.available(), reason="numba not installed")


def random_partial(rnd, n, open_pairs):
    pairs = list(itertools.combinations(range(n), 2))
    keep = set(rnd.sample(range(len(pairs)), len(pairs) - open_pairs))
    out = [0] * n
    for k, (a, b) in enumerate(pairs):
        if k in keep:
            if rnd.random() < 0.5:
                a, b = b, a
            out[a] |= 1 << b
    return PartialTournament(n, tuple(out))


def brute_two_disjoint_tt5(out_rows, n):
    t = Tournament(n, out_rows)
    m = matrix(t)
    copies = [vset(c) for c in itertools.combinations(range(n), 5) if subset_is_transitive(m, c)]
    return any(not a & b for a, b in itertools.combinations(copies, 2))


@pytest.mark.parametrize("seed", range(12))
def test_chi_cut_is_sound_and_complete(seed):
    rnd = random.Random(seed)
    n = rnd.choice([6, 7, 8])
    k = rnd.choice([2, 3])
    p = random_partial(rnd, n, rnd.randint(0, 6))
    expected = sorted(out for out in all_completions(p) if brute_chi(Tournament(n, out)) > k)
    for backend in ("python", "numba") if accel.available() else ("python",):
        found = sorted(t.out for t in completions(p, Pruner.chi(k), backend=backend))
        assert found == expected


@pytest.mark.parametrize("seed", range(6))
def test_two_tt5_cut_is_sound_and_complete(seed):
    rnd = random.Random(100 + seed)
    n = 10
    p = random_partial(rnd, n, rnd.randint(2, 6))
    expected = sorted(out for out in all_completions(p) if not brute_two_disjoint_tt5(out, n))
    for backend in ("python", "numba") if accel.available() else ("python",):
        found = sorted(t.out for t in completions(p, Pruner(two_tt5=True), backend=backend))
        assert found == expected


def test_complete_input_yields_itself_or_nothing():
    t = transitive_tournament(4).to_partial()
    assert list(completions(t, Pruner.chi(1))) == []
    assert [s.out for s in completions(t, Pruner())] == [t.out]


def test_pruner_parse_round_trip():
    for text in ("chi2", "chi3+tt5x2", "tt5x2", "none"):
        p = Pruner.parse(text) if text != "none" else Pruner()
        assert str(p) == text
    with pytest.raises(ParameterError):
        Pruner.parse("chi")
    with pytest.raises(ParameterError):
        Pruner.parse("colour3")


def test_backend_resolution():
    assert resolve_backend("python", Pruner.chi(9)) == "python"
    with pytest.raises(ParameterError):
        resolve_backend("gpu", Pruner.chi(2))
    expected = "numba" if accel.available() else "python"
    assert resolve_backend("auto", Pruner.chi(3)) == expected
    assert resolve_backend("auto", Pruner.chi(7)) == "python"


@pytest.mark.parametrize("strategy", ["maxset", "lex"])
def test_eight_completion_counts(strategy):
    stats = SearchStats()
    found = eight_completions(strategy, stats)
    assert len(found) == 256
    assert stats.emitted == 3 * 256 and stats.rejected_final == 0
    assert all(f.t.n == 8 and f.tt5 == TT5 and f.glue == TRIANGLE for f in found)


@needs_numba
def test_backends_walk_the_same_tree_on_eight_vertices():
    stats = {}
    outs = {}
    for backend in ("python", "numba"):
        s = SearchStats()
        outs[backend] = sorted(t.out for t in completions(eight_completion_root(), Pruner.chi(2), stats=s,
                                                          backend=backend))
        stats[backend] = (s.nodes, s.cuts, s.emitted)
    assert outs["python"] == outs["numba"]
    assert stats["python"] == stats["numba"] == (25129, 11797, 768)


@needs_numba
def test_backends_agree_on_bounded_thirteen_search():
    eight = eight_completions(backend="numba")
    root = identify_eight(eight[0], eight[1], 0)
    searches = {b: make_search(root, Pruner.chi(3), backend=b) for b in ("python", "numba")}
    for s in searches.values():
        assert list(s.run(max_nodes=20000)) == []
    py, nb = searches["python"], searches["numba"]
    assert py.stats.nodes == nb.stats.nodes == 20000
    assert py.stats.cuts == nb.stats.cuts
    assert [format_tournament(p) for p in py.frontier()] == [format_tournament(p) for p in nb.frontier()]


def test_checkpoint_round_trip_matches_uninterrupted_run():
    root = eight_completion_root()
    whole = sorted(t.out for t in completions(root, Pruner.chi(2)))
    backends = ["python", "numba"] if accel.available() else ["python"]
    for first, second in itertools.product(backends, repeat=2):
        search = make_search(root, Pruner.chi(2), backend=first)
        found = [t.out for t in search.run(max_nodes=3000)]
        state = json.loads(json.dumps(search.to_state()))
        assert state["stats"]["nodes"] == 3000
        resumed = CompletionSearch.from_state(state, backend=second)
        found += [t.out for t in resumed.run()]
        assert resumed.done
        assert sorted(found) == whole
        assert resumed.stats.nodes == 25129


def test_search_frontier_is_resumable_in_pieces():
    search = CompletionSearch(eight_completion_root(), Pruner.chi(2))
    found = []
    while not search.done:
        found += list(search.run(max_nodes=997))
    assert len(found) == 768 and search.stats.nodes == 25129


def test_dedup_keeps_one_per_rotation_class():
    raw = list(completions(eight_completion_root(), Pruner.chi(2)))
    again = dedup_eight(t.relabel(g) for t in raw for g in ROTATIONS)
    assert [c.t for c in again] == [c.t for c in dedup_eight(raw)]


def test_completion_validation():
    t = transitive_tournament(8)
    Completion(t, (TT5,), TRIANGLE)
    with pytest.raises(ParameterError):
        Completion(t, (TT5,), vset((5, 6)))
    with pytest.raises(ParameterError):
        Completion(t, (vset(range(4)),), vset(range(4, 8)))


def test_identify_eight_shape():
    eight = eight_completions()
    p = identify_eight(eight[3], eight[7], 1)
    assert p.n == 13 and len(p.undecided) == 25
    assert set(p.undecided) == {(a, b) for a in range(5) for b in range(8, 13)}
    assert induced(p.to_tournament() if p.is_complete() else _fill(p), vset(range(8))) == eight[3].t
    with pytest.raises(ParameterError):
        identify_eight(eight[0], eight[1], 3)


def _fill(p):
    for a, b in p.undecided:
        p = p.add_arc(a, b)
    return p.to_tournament()


def test_glue_identify_rejects_bad_matchings():
    eight = eight_completions()
    c = eight[0].t
    with pytest.raises(ParameterError):
        glue_identify(c, TRIANGLE, c, TRIANGLE, {5: 5, 6: 5, 7: 7})
    with pytest.raises(ParameterError):
        # a reflection reverses the triangle
        glue_identify(c, TRIANGLE, c, TRIANGLE, {5: 5, 6: 7, 7: 6})


def test_types_and_compatibility_match_direct_split():
    # TT5 on 0..4, glue on 5..12, TT5 on 13..17, everything else random
    rnd = random.Random(8)
    glue = vset(range(5, 13))
    second = vset(range(13, 18))
    for _ in range(12):
        out = [0] * 18
        for a, b in itertools.combinations(range(18), 2):
            inside = (a < 5 and b < 5) or (a >= 13 and b >= 13)
            if inside or rnd.random() < 0.5:
                out[a] |= 1 << b
            else:
                out[b] |= 1 << a
        t = Tournament(18, tuple(out))
        ta = completion_type(t, TT5, glue)
        tb = completion_type(t, second, glue)
        assert all(3 <= m.bit_count() <= 5 for m in ta.members)
        assert sorted(ta.vertex_sets()) == sorted(
            vset(c) for r in (3, 4, 5) for c in itertools.combinations(range(5, 13), r)
            if two_colorable_within(t, TT5 | vset(c)))
        sized = any(
            two_colorable_within(t, TT5 | vset(c)) and two_colorable_within(t, second | glue & ~vset(c))
            for r in (3, 4, 5) for c in itertools.combinations(range(5, 13), r))
        assert types_compatible(ta, tb) == sized
        if sized:
            assert compatible_split(t, TT5, second, glue) is not None


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
@settings(max_examples=50, deadline=None)
def test_type_compatibility_is_complement_lookup(m1, m2):
    from dichromatic.completions import CompletionType

    glue = tuple(range(8))
    full = 255
    a = frozenset(x for x in range(256) if m1 >> (x % 16) & 1 and 3 <= x.bit_count() <= 5)
    b = frozenset(x for x in range(256) if m2 >> (x % 16) & 1 and 3 <= x.bit_count() <= 5)
    expected = any(full ^ x == y for x in a for y in b)
    assert types_compatible(CompletionType(glue, a), CompletionType(glue, b)) == expected
