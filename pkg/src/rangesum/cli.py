"""Command-line entry point: ``rangesum <subcommand> --prime P ...``.

Exit codes: 0 when every check passes (findings allowed), 1 when a check
of a claimed identity or bound fails, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import directions, suites
from .fpcore import FieldError, make_field
from .poly import parse_poly
from .report import Report
from .search import InfeasiblePrime, SearchInterrupted

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rangesum", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--prime", type=int, required=True)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", type=Path)
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--seed", type=int, default=0)
        return sp

    cmd("tables", "intersection-table suite")
    cmd("pair-identity", "pair-product identity over all pairs")
    b = cmd("bounds", "Cauchy-Schwarz bound and both propositions")
    mode = b.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--trials", type=int, default=10_000)
    v = cmd("verify", "decompose one polynomial and check its structure")
    v.add_argument("--poly", required=True, help="coefficients, constant term first, e.g. 1,0,0,1")
    cmd("families", "check the two known families")
    c = cmd("classify", "exhaustive classification up to affine equivalence")
    c.add_argument("--checkpoint", type=Path)
    c.add_argument("--resume", action="store_true")
    c.add_argument("--allow-above-cap", action="store_true", help="permit p up to 31")
    c.add_argument("--stop-after-units", type=int, help=argparse.SUPPRESS)
    cmd("min-degree", "degree census over all range-sum-p functions")
    d = cmd("directions", "directions determined by a point set")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", dest="set_file", type=Path)
    src.add_argument("--poly")
    d.add_argument("--trials", type=int, default=0, help="random size-p sets to test as well")
    return parser


def _config(args) -> dict:
    skip = {"output", "verbose", "stop_after_units", "threads"}
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k not in skip}
    return {k: cfg[k] for k in sorted(cfg)}


def execute(args) -> Report:
    ctx = make_field(args.prime)
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    report = Report(_config(args), runtime={"threads": args.threads})
    t = args.threads
    if args.command == "tables":
        suites.table1(ctx, report)
    elif args.command == "pair-identity":
        suites.pair_identity(ctx, report)
    elif args.command == "bounds":
        suites.theorem31(ctx, report, exhaustive=args.exhaustive, trials=args.trials, seed=args.seed, threads=t)
        suites.prop_subset(ctx, report, trials=args.trials, seed=args.seed, threads=t)
        suites.prop_multiset_families(ctx, report)
    elif args.command == "verify":
        suites.verify_poly(ctx, parse_poly(ctx, args.poly), report)
    elif args.command == "families":
        suites.families(ctx, report)
        suites.residual_families(ctx, report)
    elif args.command == "classify":
        if args.resume and args.checkpoint is None:
            raise UsageError("--resume needs --checkpoint")
        suites.classify(ctx, report, threads=t, checkpoint=args.checkpoint, resume=args.resume,
                        allow_above_cap=args.allow_above_cap, stop_after_units=args.stop_after_units)
    elif args.command == "min-degree":
        suites.min_degree(ctx, report, threads=t)
    elif args.command == "directions":
        if args.set_file is not None:
            S = directions.read_points(ctx, args.set_file)
        else:
            S = directions.graph(ctx, parse_poly(ctx, args.poly))
        suites.directions_for(ctx, S, report)
        if args.trials:
            suites.redei_random(ctx, report, trials=args.trials, seed=args.seed, threads=t)
    return report


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        report = execute(args)
    except (UsageError, FieldError, InfeasiblePrime, ValueError, OSError) as exc:
        print(f"rangesum: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchInterrupted as exc:
        print(f"rangesum: {exc}; resume with --resume", file=sys.stderr)
        return EXIT_FAIL
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
