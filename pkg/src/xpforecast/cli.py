"""Command line entry point: ``xpforecast simulate|curve|validate``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import kernels
from .bn import NetworkError
from .config import ConfigError, FIXTURES, load_config, load_fixture
from .project import InvalidPlan, simulate_project
from .report import (comparison, curve_csv, format_comparison, format_report, report_dict,
                     write_curve, write_run)

log = logging.getLogger("xpforecast")

DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 42


class UnknownCase(ValueError):
    pass


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo draws")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--deterministic", action="store_true",
                   help="evaluate once with every distribution at its mean")
    p.add_argument("--workers", type=int, default=1, help="threads used for sampling")
    p.add_argument("--out", type=Path, default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xpforecast",
                                     description="Monte Carlo forecasts for XP release plans")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a project and write a report")
    p.add_argument("config", type=Path)
    _run_flags(p)

    p = sub.add_parser("curve", help="emit the project status curve as CSV")
    p.add_argument("config", type=Path)
    _run_flags(p)

    p = sub.add_parser("validate", help="compare a built-in case study with published values")
    p.add_argument("--case", required=True)
    _run_flags(p)
    return parser


def _simulate(plan, args):
    if args.samples < 1:
        raise ValueError("--samples must be >= 1")
    return simulate_project(plan, args.samples, args.seed, deterministic=args.deterministic,
                            workers=args.workers)


def cmd_simulate(args) -> int:
    plan = load_config(args.config)
    result = _simulate(plan, args)
    backend = kernels.backend_name(kernels.get_backend())
    sys.stdout.write(format_report(report_dict(plan, result, backend)))
    if args.out is not None:
        for path in write_run(plan, result, args.out, backend):
            log.info("wrote %s", path)
    return 0


def cmd_curve(args) -> int:
    plan = load_config(args.config)
    result = _simulate(plan, args)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        write_curve(result, args.out / "curve.csv")
    else:
        sys.stdout.write(curve_csv(result))
    return 0


def cmd_validate(args) -> int:
    if args.case not in FIXTURES:
        raise UnknownCase(f"unknown case {args.case!r} (choose from {', '.join(FIXTURES)})")
    plan = load_fixture(args.case)
    result = _simulate(plan, args)
    table = comparison(args.case, result)
    sys.stdout.write(format_comparison(args.case, table))
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "comparison.json").write_text(json.dumps(table, indent=2) + "\n",
                                                  encoding="utf-8")
    return 0


COMMANDS = {"simulate": cmd_simulate, "curve": cmd_curve, "validate": cmd_validate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidPlan, NetworkError, UnknownCase, ValueError, OSError) as exc:
        print(f"xpforecast: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
