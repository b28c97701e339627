"""Named verification scenarios with reports, shards and checkpoints.

Each scenario recomputes its quantities, re-checks every witness with code
independent of the search that produced it, and returns a
:class:`ScenarioReport`.  Long-running scenarios split their outermost loop
into shards (item ``k`` belongs to shard ``k % N``) and persist progress to a
JSON checkpoint so that an interrupted run can resume where it stopped.
"""
from __future__ import annotations

import itertools
import json
import os
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from . import __version__
from .coloring import check_partition, chromatic_of_subset, dichromatic_number, k_colorable, two_colorable_within
from .completions import (
    TT5,
    Completion,
    CompletionSearch,
    Pruner,
    compatible_split,
    completion_type,
    dedup_eight,
    eight_completion_root,
    eight_completions,
    glue_identify,
    identify_eight,
    make_search,
    types_compatible,
)
from .figures import A, CLAIM_SETS, FIGURE1, X, X13_TT4_SETS, skeleton11, skeleton_with_x
from .isomorphism import (
    automorphisms,
    canonical_form,
    enumerate_tournaments,
    find_embedding,
    find_isomorphism,
    is_automorphism,
)
from .tournament import (
    Tournament,
    blowup_pal7,
    disjoint_union,
    format_tournament,
    induced,
    iter_bits,
    members,
    paley,
    parse_tournament,
    transitive_tournament,
    vset,
    write_tournaments,
    x13,
)
from .transitive import contains_tt, transitive_order, transitive_subsets

VERIFIED = "verified"
REFUTED = "refuted"
PARTIAL = "partial"
EXIT_CODES = {VERIFIED: 0, REFUTED: 2, PARTIAL: 3}


@dataclass
class ScenarioReport:
    scenario: str
    status: str = VERIFIED
    counts: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def expect(self, key: str, value, target) -> None:
        """Record a measured quantity; a mismatch refutes the scenario."""
        self.counts[key] = value
        self.expected[key] = target
        if value != target:
            self.failures.append(f"{key}: measured {value!r}, expected {target!r}")
            self.status = REFUTED

    def note(self, key: str, value) -> None:
        self.counts[key] = value

    def require(self, key: str, ok: bool) -> None:
        self.expect(key, bool(ok), True)

    def mark_partial(self) -> None:
        if self.status == VERIFIED:
            self.status = PARTIAL

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def records(self, timing: bool = True) -> list[str]:
        """``key=value`` lines; without timing they are reproducible byte for byte."""
        lines = [f"scenario={self.scenario}", f"status={self.status}", f"version={__version__}"]
        lines += [f"config.{k}={_fmt(v)}" for k, v in sorted(self.config.items())]
        lines += [f"count.{k}={_fmt(v)}" for k, v in sorted(self.counts.items())]
        lines += [f"expected.{k}={_fmt(v)}" for k, v in sorted(self.expected.items())]
        lines += [f"certificate={p}" for p in self.certificates]
        lines += [f"failure={f}" for f in self.failures]
        if timing:
            lines.append(f"seconds={self.seconds:.3f}")
        return lines

    def text(self, timing: bool = True) -> str:
        return "\n".join(self.records(timing)) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def _emit(report: ScenarioReport, out_dir, name: str, items) -> None:
    if out_dir is None:
        return
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    write_tournaments(path, items)
    report.certificates.append(str(path))


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.seconds = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- shards and checkpoints --------------------------------------------------------

@dataclass(frozen=True)
class Shard:
    index: int = 0
    total: int = 1

    @classmethod
    def parse(cls, text: str) -> "Shard":
        i, _, n = text.partition("/")
        shard = cls(int(i), int(n))
        if not 0 <= shard.index < shard.total:
            raise ValueError(f"bad shard {text!r}")
        return shard

    def owns(self, k: int) -> bool:
        return k % self.total == self.index

    def __str__(self) -> str:
        return f"{self.index}/{self.total}"


class ShardRunner:
    """Runs keyed searches for one shard, checkpointing open branches to JSON.

    ``max_nodes`` caps the nodes explored by this process over all searches;
    ``search_nodes`` caps each individual search.  A capped search is parked
    in the checkpoint and continues from its frontier on resume.
    """

    def __init__(self, scenario: str, shard: Shard = Shard(), checkpoint_dir=None, resume: bool = False,
                 every_nodes: int = 10**6, every_seconds: float = 60.0, max_nodes: Optional[int] = None,
                 search_nodes: Optional[int] = None, backend: str = "python"):
        self.scenario = scenario
        self.backend = backend
        self.shard = shard
        self.every_nodes = every_nodes
        self.every_seconds = every_seconds
        self.remaining = max_nodes
        self.search_nodes = search_nodes
        self.path = None
        if checkpoint_dir is not None:
            Path(checkpoint_dir).mkdir(parents=True, exist_ok=True)
            self.path = Path(checkpoint_dir) / f"{scenario}-{shard.index}of{shard.total}.json"
        self.state = {"scenario": scenario, "shard": str(shard), "version": __version__,
                      "progress": 0, "done": {}, "open": {}}
        if resume and self.path is not None and self.path.exists():
            with open(self.path) as fh:
                self.state = json.load(fh)
            if self.state["scenario"] != scenario or self.state["shard"] != str(shard):
                raise ValueError(f"checkpoint {self.path} belongs to another scenario or shard")
        self.interrupted = False
        self._last_save = time.monotonic()

    @property
    def progress(self) -> int:
        return self.state["progress"]

    def save(self) -> None:
        if self.path is None:
            return
        tmp = self.path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(self.state, fh, sort_keys=True)
        os.replace(tmp, self.path)
        self._last_save = time.monotonic()

    def search(self, key: str, root, prune: Pruner, strategy: str = "maxset", keep: bool = True) -> dict:
        """Result ``{"finished", "count", "results", "stats"}`` of the search stored under ``key``.

        An unfinished entry holds what was found before the node cap hit.
        """
        done = self.state["done"]
        if key in done:
            return done[key]
        parked = self.state["open"].get(key)
        if parked is not None:
            search = CompletionSearch.from_state(parked["search"], self.backend)
            results = list(parked["results"])
            count = parked["count"]
        else:
            search = make_search(root, prune, strategy, backend=self.backend)
            results, count = [], 0
        own = self.search_nodes
        since = 0
        while not search.done:
            chunk = self.every_nodes - since
            caps = [c for c in (self.remaining, own) if c is not None]
            if caps:
                if min(caps) <= 0:
                    self.interrupted = True
                    self._park(key, search, results, count)
                    return self._entry(search, results, count, False)
                chunk = min(chunk, *caps)
            before = search.stats.nodes
            for t in search.run(max_nodes=chunk):
                count += 1
                if keep:
                    results.append(format_tournament(t))
            used = search.stats.nodes - before
            self.state["progress"] += used
            since += used
            if self.remaining is not None:
                self.remaining -= used
            if own is not None:
                own -= used
            if since >= self.every_nodes or time.monotonic() - self._last_save >= self.every_seconds:
                self._park(key, search, results, count)
                since = 0
        entry = self._entry(search, results, count, True)
        self.state["open"].pop(key, None)
        done[key] = entry
        self.save()
        return entry

    @staticmethod
    def _entry(search, results, count, finished) -> dict:
        stats = search.stats.as_dict()
        stats.pop("seconds", None)
        return {"finished": finished, "count": count, "results": list(results), "stats": stats}

    def _park(self, key, search, results, count) -> None:
        self.state["open"][key] = {"search": search.to_state(), "results": list(results), "count": count}
        self.save()


# -- desk-scale scenarios -----------------------------------------------------

@_timed
def verify_t7_census(out_dir=None) -> ScenarioReport:
    """Four 3-chromatic tournaments on 7 vertices; every 6-vertex one is 2-colourable."""
    report = ScenarioReport("t7-census")
    six = list(enumerate_tournaments(6))
    two_col = 0
    for t in six:
        witness = k_colorable(t, 2)
        if witness is not None and check_partition(t, witness.classes):
            two_col += 1
    report.expect("n6_total", len(six), 56)
    report.expect("n6_two_colorable", two_col, 56)
    seven = list(enumerate_tournaments(7))
    report.expect("n7_total", len(seven), 456)
    three = []
    for t in seven:
        chi = dichromatic_number(t)
        if chi == 3:
            three.append(t)
    report.expect("n7_three_chromatic", len(three), 4)
    figure_chi = {name: dichromatic_number(t) for name, t in FIGURE1.items()}
    report.require("figure1_all_three_chromatic", all(c == 3 for c in figure_chi.values()))
    figure_codes = {canonical_form(t) for t in FIGURE1.values()}
    report.require("figure1_pairwise_distinct", len(figure_codes) == 4)
    report.require("figure1_matches_census", figure_codes == {canonical_form(t) for t in three})
    for t in three:
        witness = k_colorable(t, 3)
        report.require("witnesses_valid", witness is not None and check_partition(t, witness.classes))
    _emit(report, out_dir, "t7-three-chromatic.txt", three)
    return report


def x13_residuals() -> list[Tournament]:
    t = x13()
    return [induced(t, t.vertices & ~vset(s)) for s in X13_TT4_SETS]


def x13_tt4_sets_led_by(pairs=((0, 1), (0, 2))) -> list[tuple[int, ...]]:
    """TT4 sets of X13 whose two top vertices (in transitive order) are a listed pair."""
    t = x13()
    found = []
    for s in transitive_subsets(t.out, t.vertices, 4):
        order = transitive_order(t, s)
        if tuple(order[:2]) in pairs:
            found.append(tuple(sorted(order)))
    return sorted(found)


@_timed
def verify_x13_structure(samples: int = 10**5, seed: int = 2024) -> ScenarioReport:
    """TT5-freeness and symmetry of X13, its TT4 sets and rigid residuals."""
    report = ScenarioReport("x13-structure", config={"samples": samples, "seed": seed})
    t = x13()
    report.expect("out_degrees", sorted(set(t.out_degrees())), [6])
    report.require("tt5_free", contains_tt(t, 5) is None)
    report.expect(
        "tt5_free_brute_force",
        sum(1 for c in itertools.combinations(range(13), 5) if _is_tt_brute(t, c)),
        0,
    )
    autos = automorphisms(t)
    report.require("automorphisms_valid", all(is_automorphism(t, p) for p in autos))
    report.note("automorphism_group_order", len(autos))
    report.expect("orbit_of_0", len({p[0] for p in autos}), 13)
    arc_ok = all(any((p[i], p[j]) in ((0, 1), (0, 2)) for p in autos) for i, j in t.arcs())
    report.require("arc_orbit_01_or_02", arc_ok)
    sets = x13_tt4_sets_led_by()
    report.expect("tt4_sets", [",".join(map(str, s)) for s in sets],
                  [",".join(map(str, sorted(s))) for s in sorted(tuple(sorted(s)) for s in X13_TT4_SETS)])
    residuals = x13_residuals()
    report.expect("residual_classes", len({canonical_form(r) for r in residuals}), 4)
    report.expect("residual_automorphisms", [len(automorphisms(r)) for r in residuals], [1, 1, 1, 1])
    # in-degree profile of T_1 in the original X13 labels
    keep = members(t.vertices & ~vset(X13_TT4_SETS[0]))
    t1 = residuals[0]
    indeg = {keep[k]: d for k, d in enumerate(t1.in_degrees())}
    report.expect("t1_indegree_3", sorted(v for v, d in indeg.items() if d == 3), [4, 5, 6])
    report.expect("t1_indegree_4", sorted(v for v, d in indeg.items() if d == 4), [7, 8, 9])
    report.expect("t1_indegree_5", sorted(v for v, d in indeg.items() if d == 5), [10, 11, 12])
    # the in-degree-4 cores do not separate the residuals (two of them are
    # isomorphic), so only their vertex sets are gated
    cores, core_sets = [], []
    for s, r in zip(X13_TT4_SETS, residuals):
        rest = members(t.vertices & ~vset(s))
        four = [v for v, d in enumerate(r.in_degrees()) if d == 4]
        core_sets.append("".join(f"{rest[v]}." for v in four).rstrip("."))
        cores.append(canonical_form(induced(r, vset(four))))
    report.expect("indegree4_core_sets", core_sets, ["7.8.9", "4.5.7.8.12", "4.5.8.9.11", "1.4.7.9.11"])
    report.note("indegree4_core_classes", len(set(cores)))
    rng = random.Random(seed)
    misses = sum(1 for _ in range(samples) if contains_tt(random_tournament(14, rng), 5) is None)
    report.expect("random14_without_tt5", misses, 0)
    return report


def _is_tt_brute(t: Tournament, combo) -> bool:
    degrees = sorted(sum(t.has_arc(u, w) for w in combo if w != u) for u in combo)
    return degrees == list(range(len(combo)))


def random_tournament(n: int, rng: random.Random) -> Tournament:
    bits = rng.getrandbits(n * (n - 1) // 2)
    out = [0] * n
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if bits >> k & 1:
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
            k += 1
    return Tournament(n, tuple(out))


@_timed
def verify_19_certificate(out_dir=None) -> ScenarioReport:
    """The Pal_7 blow-up is 5-chromatic and every one-arc or one-vertex change is 4-colourable."""
    report = ScenarioReport("certificate-19")
    t = blowup_pal7()
    report.expect("order", t.n, 19)
    report.expect("arcs", len(t.arcs()), 171)
    report.require("not_4_colorable", k_colorable(t, 4) is None)
    five = k_colorable(t, 5)
    report.require("5_coloring_valid", five is not None and check_partition(t, five.classes))
    bad_reversals = 0
    for a, b in t.arcs():
        r = t.reverse_arc(a, b)
        w = k_colorable(r, 4)
        if w is None or not check_partition(r, w.classes):
            bad_reversals += 1
    report.expect("reversals_not_4_colorable", bad_reversals, 0)
    bad_deletions = 0
    for v in range(t.n):
        d = t.delete(v)
        w = k_colorable(d, 4)
        if w is None or not check_partition(d, w.classes):
            bad_deletions += 1
    report.expect("deletions_not_4_colorable", bad_deletions, 0)
    _emit(report, out_dir, "blowup-pal7.txt", [t])
    return report


# -- the W1 + TT5 gluing -------------------------------------------------------------

def derive_skeleton() -> list[Tournament]:
    """Rebuild the 11-vertex skeleton from Pal_11 for every TT4 whose complement is W1."""
    pal = paley(11)
    w1 = FIGURE1["W1"]
    found = []
    for s in transitive_subsets(pal.out, pal.vertices, 4):
        rest = pal.vertices & ~s
        sub = induced(pal, rest)
        iso = find_isomorphism(sub, w1)
        if iso is None:
            continue
        label = {}
        for k, v in enumerate(members(rest)):
            label[v] = iso[k]
        for k, v in enumerate(transitive_order(pal, s)):
            label[v] = A + k
        perm = [label[v] for v in range(11)]
        found.append(pal.relabel(perm))
    return found


def claim_profile(t: Tournament) -> dict:
    """Dichromatic numbers of A1 + S for each named claim subset S of W1."""
    a1 = vset(range(A, X + 1))
    return {name: chromatic_of_subset(t, a1 | vset(s)) for name, s in CLAIM_SETS.items()}


def claims_hold(chi: dict) -> dict:
    return {
        "claim_014": chi["014"] == 2,
        "claim_0123_or_0456": chi["0123"] == 2 or chi["0456"] == 2,
        "claim_024_1356": not (chi["456"] > 2 and chi["2356"] > 2) or (chi["024"] == 2 and chi["1356"] == 2),
        "claim_016_2345": not (chi["123"] > 2 and chi["2356"] > 2) or (chi["016"] == 2 and chi["2345"] == 2),
    }


def split_family(t: Tournament) -> int:
    """Bit ``m`` set iff A1 + (W1 subset with mask m) is 2-colourable; 128 bits."""
    a1 = vset(range(A, X + 1))
    good = 0
    for m in sorted(range(128), key=lambda m: -m.bit_count()):
        # 2-colourability is inherited by subsets
        if any(good >> (m | 1 << w) & 1 for w in range(7) if not m >> w & 1):
            good |= 1 << m
        elif two_colorable_within(t, a1 | m):
            good |= 1 << m
    return good


def complement_family(family: int) -> int:
    comp = 0
    for m in iter_bits(family):
        comp |= 1 << (127 ^ m)
    return comp


@_timed
def verify_section4_claims() -> ScenarioReport:
    """Claims about W1 + TT5 gluings in all 640 placements of x, and the W1 split for all pairs."""
    report = ScenarioReport("w1-claims")
    sk = skeleton11()
    report.require("skeleton_is_pal11", canonical_form(sk) == canonical_form(paley(11)))
    derived = derive_skeleton()
    report.require("skeleton_rederived", bool(derived) and all(d == sk for d in derived))
    report.note("skeleton_derivations", len(derived))
    totals = {}
    families = []
    for rank in range(5):
        for mask in range(128):
            t = skeleton_with_x(rank, mask)
            held = claims_hold(claim_profile(t))
            for name, ok in held.items():
                totals[name] = totals.get(name, 0) + ok
            families.append(split_family(t))
    for name in sorted(totals):
        report.expect(name, totals[name], 640)
    distinct = sorted(set(families))
    report.note("distinct_split_families", len(distinct))
    comps = {f: complement_family(f) for f in distinct}
    weight = {f: families.count(f) for f in distinct}
    failing = sum(weight[f] * weight[g] for f in distinct for g in distinct if not comps[f] & g)
    report.expect("configurations", len(families), 640)
    report.expect("pairs_checked", len(families) ** 2, 409600)
    report.expect("pairs_without_split", failing, 0)
    return report


# -- the 8-vertex census and 8-completions ----------------------------------------------

@_timed
def census_8(out_dir=None) -> ScenarioReport:
    report = ScenarioReport("census-8")
    eight = list(enumerate_tournaments(8))
    report.expect("total", len(eight), 6880)
    three = [t for t in eight if dichromatic_number(t) == 3]
    free = [t for t in three if contains_tt(t, 5) is None]
    report.expect("three_chromatic", len(three), 258)
    report.expect("three_chromatic_tt5_free", len(free), 94)
    for t in three:
        w = k_colorable(t, 3)
        report.require("witnesses_valid", w is not None and check_partition(t, w.classes) and k_colorable(t, 2) is None)
    _emit(report, out_dir, "census8-three-chromatic.txt", three)
    _emit(report, out_dir, "census8-three-chromatic-tt5-free.txt", free)
    return report




def three_chromatic_tt5_free_8() -> list[Tournament]:
    return [t for t in enumerate_tournaments(8) if contains_tt(t, 5) is None and dichromatic_number(t) == 3]


@dataclass(frozen=True)
class RunOptions:
    """Sharding, checkpointing and slicing knobs shared by the search scenarios.

    ``max_nodes`` bounds one process (the run is resumable); ``search_nodes``,
    ``max_items`` and ``max_checks`` cut the scenario down to a smoke slice.
    """

    shard: Shard = Shard()
    checkpoint_dir: Optional[str] = None
    resume: bool = False
    max_nodes: Optional[int] = None
    search_nodes: Optional[int] = None
    max_items: Optional[int] = None
    max_checks: Optional[int] = None
    strategy: str = "maxset"
    backend: str = "auto"
    every_nodes: int = 10**6
    every_seconds: float = 60.0
    out_dir: Optional[str] = None

    def runner(self, scenario: str) -> ShardRunner:
        return ShardRunner(scenario, self.shard, self.checkpoint_dir, self.resume, self.every_nodes,
                           self.every_seconds, self.max_nodes, self.search_nodes, self.backend)

    def config(self) -> dict:
        cfg = {"shard": str(self.shard), "strategy": self.strategy}
        for key in ("search_nodes", "max_items", "max_checks"):
            value = getattr(self, key)
            if value is not None:
                cfg[key] = value
        return cfg

    @property
    def sliced(self) -> bool:
        return self.search_nodes is not None or self.max_items is not None or self.max_checks is not None


def _finish(report: ScenarioReport, runner: ShardRunner, opts: RunOptions, whole: bool = True) -> None:
    """Mark partial when the run was interrupted, sliced, or covers one shard only."""
    if runner.interrupted or opts.sliced or (whole and opts.shard.total != 1):
        report.mark_partial()
    report.note("open_searches", len(runner.state["open"]))


@_timed
def verify_8_completions(opts: RunOptions = RunOptions()) -> ScenarioReport:
    """The 256 rotation classes of 3-chromatic TT5 + triangle gluings, re-checked one by one."""
    report = ScenarioReport("eight-completions", config={"strategy": opts.strategy})
    runner = opts.runner(report.scenario)
    entry = runner.search("root", eight_completion_root(), Pruner.chi(2), opts.strategy)
    if not entry["finished"]:
        report.mark_partial()
        report.note("progress", runner.progress)
        return report
    raw = [parse_tournament(s) for s in entry["results"]]
    comps = dedup_eight(raw)
    report.expect("count", len(comps), 256)
    report.note("raw_completions", len(raw))
    report.note("nodes", entry["stats"]["nodes"])
    report.note("cuts", entry["stats"]["cuts"])
    report.require("dedup_factor_at_most_3", len(raw) <= 3 * len(comps))
    census = {canonical_form(t) for t in enumerate_tournaments(8) if dichromatic_number(t) == 3}
    ok = True
    for c in comps:
        w = k_colorable(c.t, 3)
        ok &= w is not None and check_partition(c.t, w.classes) and k_colorable(c.t, 2) is None
        ok &= all(c.t.has_arc(i, j) for i in range(5) for j in range(i + 1, 5))
        ok &= c.t.has_arc(5, 6) and c.t.has_arc(6, 7) and c.t.has_arc(7, 5)
    report.require("members_three_chromatic", ok)
    underlying = {canonical_form(c.t) for c in comps}
    report.require("within_258_census", underlying <= census)
    report.note("underlying_classes", len(underlying))
    _emit(report, opts.out_dir, "eight-completions.txt", [c.t for c in comps])
    return report


def _eight(opts: RunOptions) -> list[Completion]:
    return eight_completions(opts.strategy, backend=opts.backend)


# -- long-running scenarios ----------------------------------------------------------------

GLUE_PARTNERS = ("Pal7", "W", "W0", "W1")


@_timed
def verify_12_contains_pal11(opts: RunOptions = RunOptions()) -> ScenarioReport:
    """4-chromatic gluings of TT5 with each 3-chromatic 7-vertex tournament contain Pal_11."""
    report = ScenarioReport("contains-pal11", config=opts.config())
    runner = opts.runner(report.scenario)
    pal11 = paley(11)
    items = [(k, name) for k, name in enumerate(GLUE_PARTNERS) if opts.shard.owns(k)]
    if opts.max_items is not None:
        items = items[:opts.max_items]
    for _, name in items:
        root = disjoint_union(FIGURE1[name], transitive_tournament(5))
        entry = runner.search(name, root, Pruner.chi(3), opts.strategy)
        outputs = [parse_tournament(s) for s in entry["results"]]
        report.note(f"{name}.nodes", entry["stats"]["nodes"])
        report.note(f"{name}.finished", entry["finished"])
        report.require(f"{name}.outputs_four_chromatic", all(k_colorable(t, 3) is None for t in outputs))
        if name == "W1":
            report.note("W1.outputs", len(outputs))
            embeddings = [find_embedding(t, pal11) for t in outputs]
            report.require("W1.outputs_contain_pal11", all(
                f is not None and induced(t, vset(f)).relabel(_inverse_order(f)) == pal11
                for t, f in zip(outputs, embeddings)))
            w1_part = vset(range(7))
            report.require("W1.outputs_are_gluings", all(
                induced(t, w1_part) == FIGURE1["W1"] and induced(t, t.vertices & ~w1_part) == transitive_tournament(5)
                for t in outputs))
            _emit(report, opts.out_dir, "contains-pal11-W1-outputs.txt", outputs)
        else:
            report.expect(f"{name}.outputs", len(outputs), 0)
    _finish(report, runner, opts)
    report.note("progress", runner.progress)
    return report


def _inverse_order(f: Sequence[int]) -> list[int]:
    """Relabelling of induced(t, set(f)) that puts f[i] at label i."""
    ranks = {v: r for r, v in enumerate(sorted(f))}
    inverse = [0] * len(f)
    for i, v in enumerate(f):
        inverse[ranks[v]] = i
    return inverse


def pair_key(i: int, j: int, r: int) -> str:
    return f"{i}-{j}-{r}"


def thirteen_pair_items(n: int = 256) -> list[tuple[int, int, int]]:
    """Pairs i <= j with each rotation; (j, i) with rotation -r is the same problem."""
    return [(i, j, r) for i in range(n) for j in range(i, n) for r in range(3)]


def summarize_counts(counts: Iterable[int]) -> dict:
    counts = list(counts)
    nonempty = [c for c in counts if c]
    ones = sum(1 for c in nonempty if c == 1)
    return {
        "pairs": len(counts),
        "nonempty": len(nonempty),
        "max": max(counts, default=0),
        "mean_nonempty": round(sum(nonempty) / len(nonempty), 4) if nonempty else 0.0,
        "exactly_one_fraction": round(ones / len(nonempty), 4) if nonempty else 0.0,
    }


def accounting_conventions(per_item: dict) -> dict:
    """Statistics of 13-completion counts under several pair-counting conventions.

    ``per_item`` maps (i, j, r) with i <= j to a completion count.
    """
    ordered = dict(per_item)
    for (i, j, r), c in per_item.items():
        ordered[(j, i, (-r) % 3)] = c

    def summed(items):
        acc: dict = {}
        for (i, j, _), c in items.items():
            acc[(i, j)] = acc.get((i, j), 0) + c
        return acc

    def best_rotation(items):
        acc: dict = {}
        for (i, j, r), c in items.items():
            acc[(i, j)] = max(acc.get((i, j), 0), c)
        return acc

    return {
        "unordered_with_rotation": summarize_counts(per_item.values()),
        "ordered_with_rotation": summarize_counts(ordered.values()),
        "unordered_rotations_summed": summarize_counts(summed(per_item).values()),
        "ordered_rotations_summed": summarize_counts(summed(ordered).values()),
        "unordered_best_rotation": summarize_counts(best_rotation(per_item).values()),
    }


def published_match(summary: dict) -> bool:
    return (summary["nonempty"] == 4508 and summary["max"] == 2072
            and abs(summary["mean_nonempty"] - 47.6) <= 0.05
            and abs(summary["exactly_one_fraction"] - 0.25) <= 0.05)


@_timed
def verify_13_completion_stats(opts: RunOptions = RunOptions()) -> ScenarioReport:
    """Per-pair 13-completion counts of the 256 8-completions."""
    report = ScenarioReport("thirteen-stats", config=opts.config())
    runner = opts.runner(report.scenario)
    comps = _eight(opts)
    items = [it for k, it in enumerate(thirteen_pair_items(len(comps))) if opts.shard.owns(k)]
    if opts.max_items is not None:
        items = items[:opts.max_items]
    per_item = {}
    for i, j, r in items:
        entry = runner.search(pair_key(i, j, r), identify_eight(comps[i], comps[j], r), Pruner.chi(3),
                              opts.strategy, keep=False)
        if entry["finished"]:
            per_item[(i, j, r)] = entry["count"]
        if runner.interrupted and opts.search_nodes is None:
            break
    _finish(report, runner, opts)
    report.note("items", len(per_item))
    conventions = accounting_conventions(per_item)
    for name, summary in conventions.items():
        for key, value in summary.items():
            report.note(f"{name}.{key}", value)
    if report.status == VERIFIED:
        hits = [name for name, summary in conventions.items() if published_match(summary)]
        report.require("published_figures_matched", bool(hits))
        report.note("matching_conventions", ",".join(hits) or "none")
    report.note("progress", runner.progress)
    return report


def two_tt5_root(b: Tournament):
    """TT5 on 0..4 beside the 8-vertex tournament ``b`` on 5..12, cross pairs open."""
    return disjoint_union(transitive_tournament(5), b)


GLUE8 = vset(range(5, 13))
SECOND_TT5 = vset(range(13, 18))


def glue_two_thirteens(c1: Tournament, c2: Tournament):
    """18 vertices: A1 on 0..4, shared B on 5..12, A2 on 13..17; 25 open pairs."""
    return glue_identify(c1, GLUE8, c2, GLUE8, {v: v for v in range(5, 13)})


def random_completion(p, rng: random.Random) -> Tournament:
    out = list(p.out)
    for a, b in p.undecided:
        if rng.random() < 0.5:
            out[a] |= 1 << b
        else:
            out[b] |= 1 << a
    return Tournament(p.n, tuple(out))


@_timed
def search_18_two_tt5(opts: RunOptions = RunOptions(), order: str = "types-first",
                      spot_checks: int = 2, seed: int = 7) -> ScenarioReport:
    """18-vertex tournaments with exactly two disjoint TT5 are 4-colourable, one shard of B at a time.

    ``order="types-first"`` filters pairs of 13-completions by their types
    before gluing; ``order="glue-first"`` glues every pair and looks for the
    split on the glued graph.  ``order="both"`` runs both and asserts they
    select the same pairs.
    """
    if order not in ("types-first", "glue-first", "both"):
        raise ValueError(f"unknown order {order!r}")
    report = ScenarioReport("search-18-two", config={**opts.config(), "order": order})
    runner = opts.runner(report.scenario)
    rng = random.Random(seed)
    bases = three_chromatic_tt5_free_8()
    report.expect("bases_total", len(bases), 94)
    owned = [k for k in range(len(bases)) if opts.shard.owns(k)]
    if opts.max_items is not None:
        owned = owned[:opts.max_items]
    survivors = []
    searched = skipped = disagreements = 0
    checks = 0
    for k in owned:
        entry = runner.search(f"B{k}", two_tt5_root(bases[k]), Pruner(k=3, two_tt5=True), opts.strategy)
        thirteens = [parse_tournament(s) for s in entry["results"]]
        report.note(f"B{k}.thirteen_completions", len(thirteens))
        report.note(f"B{k}.finished", entry["finished"])
        types = [completion_type(t, TT5, GLUE8) for t in thirteens]
        for x in range(len(thirteens)):
            for y in range(x, len(thirteens)):
                if opts.max_checks is not None and checks >= opts.max_checks:
                    break
                checks += 1
                glued = glue_two_thirteens(thirteens[x], thirteens[y])
                by_type = by_glue = None
                if order in ("types-first", "both"):
                    by_type = types_compatible(types[x], types[y])
                if order in ("glue-first", "both"):
                    by_glue = compatible_split(glued, TT5, SECOND_TT5, GLUE8) is not None
                if by_type is not None and by_glue is not None and by_type != by_glue:
                    disagreements += 1
                compatible = by_type if by_type is not None else by_glue
                if compatible:
                    skipped += 1
                    for _ in range(spot_checks):
                        t = random_completion(glued, rng)
                        report.require("compatible_spot_checks_4_colorable", k_colorable(t, 4) is not None)
                    continue
                searched += 1
                found = runner.search(f"B{k}:{x}-{y}", glued, Pruner.chi(4), opts.strategy)
                survivors += [parse_tournament(s) for s in found["results"]]
    report.note("checks", checks)
    report.note("incompatible_pairs_searched", searched)
    report.note("compatible_pairs_skipped", skipped)
    if order == "both":
        report.expect("order_disagreements", disagreements, 0)
    report.expect("five_chromatic_found", len(survivors), 0)
    if survivors:
        _emit(report, opts.out_dir, "search-18-two-counterexamples.txt", survivors)
    _finish(report, runner, opts)
    report.note("progress", runner.progress)
    return report


def triple_items(n: int = 256) -> Iterable[tuple[int, int, int, int, int]]:
    """(i, j, l, r2, r3) with i <= j <= l: C_j and C_l attached to C_i with rotations r2, r3."""
    for i in range(n):
        for j in range(i, n):
            for l in range(j, n):
                for r2 in range(3):
                    for r3 in range(3):
                        yield i, j, l, r2, r3


def rotate_triangle(t: Tournament, r: int) -> Tournament:
    """Move triangle vertex 5+m to 5+(m+r) mod 3, everything else fixed."""
    perm = list(range(t.n))
    for m in range(3):
        perm[5 + m] = 5 + (m + r) % 3
    return t.relabel(perm)


def assemble_triple(c12: Tournament, c13: Tournament, c23: Tournament, r2: int) -> Tournament:
    """18 vertices: A1 on 0..4, the triangle on 5..7, A2 on 8..12, A3 on 13..17.

    ``c12`` and ``c13`` are 13-completions over the triangle labels of C_1;
    ``c23`` has C_2 on 0..7 in its own labels and A3 on 8..12.
    """
    arcs = set(c12.arcs())
    arcs |= {(_a3(u), _a3(w)) for u, w in c13.arcs()}
    back = rotate_triangle(c23, (-r2) % 3)
    shift = {**{v: 8 + v for v in range(5)}, **{v: v for v in range(5, 8)}, **{8 + v: 13 + v for v in range(5)}}
    arcs |= {(shift[u], shift[w]) for u, w in back.arcs()}
    return Tournament.from_arcs(18, sorted(arcs))


def _a3(v: int) -> int:
    return v + 5 if v >= 8 else v


@_timed
def search_18_three_tt5(opts: RunOptions = RunOptions()) -> ScenarioReport:
    """18-vertex tournaments with three disjoint TT5 are 4-colourable, one shard of triples at a time."""
    report = ScenarioReport("search-18-three", config=opts.config())
    runner = opts.runner(report.scenario)
    comps = _eight(opts)

    def table(i, j, r) -> Optional[list[Tournament]]:
        entry = runner.search(f"pair:{pair_key(i, j, r)}", identify_eight(comps[i], comps[j], r),
                              Pruner.chi(3), opts.strategy)
        if not entry["finished"]:
            return None
        return [parse_tournament(s) for s in entry["results"]]

    survivors = []
    assembled = skipped = items = unfinished = 0
    for k, (i, j, l, r2, r3) in enumerate(triple_items(len(comps))):
        if not opts.shard.owns(k):
            continue
        if opts.max_items is not None and items >= opts.max_items:
            break
        items += 1
        parts = []
        for a, b, r in ((i, j, r2), (i, l, r3), (j, l, (r3 - r2) % 3)):
            found = table(a, b, r)
            parts.append(found)
            if not found:
                break
        if any(p is None for p in parts):
            unfinished += 1
            continue
        if len(parts) < 3 or not all(parts):
            skipped += 1
            continue
        t12, t13, t23 = parts
        for c12, c13, c23 in itertools.product(t12, t13, t23):
            if opts.max_checks is not None and assembled >= opts.max_checks:
                break
            t = assemble_triple(c12, c13, c23, r2)
            assembled += 1
            if k_colorable(t, 4) is None:
                survivors.append(t)
    report.note("triples_visited", items)
    report.note("triples_skipped", skipped)
    report.note("triples_unfinished", unfinished)
    report.note("tournaments_checked", assembled)
    report.expect("five_chromatic_found", len(survivors), 0)
    if survivors:
        _emit(report, opts.out_dir, "search-18-three-counterexamples.txt", survivors)
    _finish(report, runner, opts)
    report.note("progress", runner.progress)
    return report


SCENARIOS: dict[str, Callable[..., ScenarioReport]] = {
    "t7-census": verify_t7_census,
    "x13-structure": verify_x13_structure,
    "certificate-19": verify_19_certificate,
    "w1-claims": verify_section4_claims,
    "census-8": census_8,
    "eight-completions": verify_8_completions,
    "contains-pal11": verify_12_contains_pal11,
    "thirteen-stats": verify_13_completion_stats,
    "search-18-two": search_18_two_tt5,
    "search-18-three": search_18_three_tt5,
}

SEARCH_SCENARIOS = ("eight-completions", "contains-pal11", "thirteen-stats", "search-18-two", "search-18-three")
LONG_RUNNING = ("contains-pal11", "thirteen-stats", "search-18-two", "search-18-three")
