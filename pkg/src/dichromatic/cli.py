"""Command line: census generation, dichromatic numbers, completions and scenarios.

Exit codes: 0 ok or verified, 2 refuted, 3 partial, 64 bad usage or input.
"""
from __future__ import annotations

import argparse
import sys
import time

from .coloring import dichromatic_number, optimal_coloring
from .completions import BACKENDS, Pruner, SearchStats, completions
from .isomorphism import MAX_CENSUS_ORDER, enumerate_tournaments
from .pipeline import SCENARIOS, SEARCH_SCENARIOS, RunOptions, Shard
from .tournament import ParameterError, PartialTournament, format_tournament, iter_bits, read_tournaments
from .transitive import contains_tt

EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which the verify command reserves for "refuted"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _gen(args) -> int:
    for t in enumerate_tournaments(args.n):
        if args.tt5_free and contains_tt(t, 5) is not None:
            continue
        if args.chi is not None and dichromatic_number(t) != args.chi:
            continue
        print(format_tournament(t))
    return 0


def _census(args) -> int:
    for n in range(1, args.max + 1):
        print(f"n={n} count={sum(1 for _ in enumerate_tournaments(n))}")
    return 0


def _chi(args) -> int:
    for t in read_tournaments(args.file):
        if isinstance(t, PartialTournament):
            raise ParameterError("chi needs complete tournaments; the input has undecided pairs")
        part = optimal_coloring(t)
        classes = "|".join(",".join(str(v) for v in iter_bits(c)) for c in part.classes)
        print(f"{len(part)} {classes}")
    return 0


def _complete(args) -> int:
    prune = Pruner.parse(args.prune)
    total = SearchStats()
    start = time.perf_counter()
    emitted = 0
    for p in read_tournaments(args.file):
        stats = SearchStats()
        for t in completions(p, prune, args.strategy, stats, args.backend):
            print(format_tournament(t), flush=True)
            emitted += 1
            if args.limit is not None and emitted >= args.limit:
                break
        total.merge(stats)
        if args.limit is not None and emitted >= args.limit:
            break
    if args.stats:
        wall = time.perf_counter() - start
        print(f"nodes={total.nodes} cuts={total.cuts} emitted={total.emitted} "
              f"rejected_final={total.rejected_final} seconds={wall:.3f}", file=sys.stderr)
    return 0


def _verify(args) -> int:
    fn = SCENARIOS[args.scenario]
    if args.scenario in SEARCH_SCENARIOS:
        opts = RunOptions(
            shard=Shard.parse(args.shard),
            checkpoint_dir=args.checkpoint,
            resume=args.resume,
            max_nodes=args.max_nodes,
            search_nodes=args.search_nodes,
            max_items=args.max_items,
            max_checks=args.max_checks,
            strategy=args.strategy,
            backend=args.backend,
            out_dir=args.out,
        )
        kwargs = {"opts": opts}
        if args.scenario == "search-18-two":
            kwargs["order"] = args.order
    else:
        if args.shard != "0/1" or args.resume or args.checkpoint:
            raise ParameterError(f"scenario {args.scenario} runs in one piece and keeps no checkpoint")
        kwargs = {}
        if args.scenario == "x13-structure":
            kwargs["samples"] = args.samples
        elif args.scenario in ("t7-census", "certificate-19", "census-8"):
            kwargs["out_dir"] = args.out
    report = fn(**kwargs)
    sys.stdout.write(report.text(timing=not args.no_timing))
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dichromatic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="isomorphism classes on n vertices, in text format")
    p.add_argument("n", type=int)
    p.add_argument("--chi", type=int, help="keep only this dichromatic number")
    p.add_argument("--tt5-free", action="store_true", help="keep only tournaments without TT5")
    p.set_defaults(run=_gen)

    p = sub.add_parser("census", help="number of isomorphism classes for n = 1..max")
    p.add_argument("--max", type=int, default=MAX_CENSUS_ORDER)
    p.set_defaults(run=_census)

    p = sub.add_parser("chi", help="dichromatic number and a witness partition per input line")
    p.add_argument("file")
    p.set_defaults(run=_chi)

    p = sub.add_parser("complete", help="stream completions of partial tournaments")
    p.add_argument("file")
    p.add_argument("--prune", required=True, help="chi2..chiK, tt5x2, or a combination like chi3+tt5x2")
    p.add_argument("--limit", type=int)
    p.add_argument("--stats", action="store_true", help="print search counters to stderr")
    p.add_argument("--strategy", choices=("maxset", "lex"), default="maxset")
    p.add_argument("--backend", choices=BACKENDS, default="auto")
    p.set_defaults(run=_complete)

    p = sub.add_parser("verify", help="run a named scenario and print its report")
    p.add_argument("scenario", choices=sorted(SCENARIOS))
    p.add_argument("--shard", default="0/1", help="i/N: run items with index = i mod N")
    p.add_argument("--checkpoint", help="directory for the shard's checkpoint file")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", help="directory for certificate files")
    p.add_argument("--max-nodes", type=int, help="stop (resumably) after this many search nodes")
    p.add_argument("--search-nodes", type=int, help="cap every single search (smoke slices)")
    p.add_argument("--max-items", type=int, help="only the first items of the shard")
    p.add_argument("--max-checks", type=int, help="cap glued pairs or assembled tournaments")
    p.add_argument("--strategy", choices=("maxset", "lex"), default="maxset")
    p.add_argument("--backend", choices=BACKENDS, default="auto")
    p.add_argument("--order", choices=("types-first", "glue-first", "both"), default="types-first")
    p.add_argument("--samples", type=int, default=10**5, help="random 14-vertex samples (x13-structure)")
    p.add_argument("--no-timing", action="store_true", help="omit wall time so reports compare byte for byte")
    p.set_defaults(run=_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError) as exc:
        print(f"dichromatic: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
