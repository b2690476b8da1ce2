"""Command-line verification front end.

    tubeschwarz SUBCOMMAND [options]

Subcommands: symmetric, bounds, fourier, pairing, vrpath, appendix,
verify-all.  Each runs the corresponding sweep and writes a JSON or CSV
report; identical (options, seed) produce byte-identical reports.

Exit codes: 0 all checks pass, 1 at least one bound violated, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .report import emit_report
from .suites import (
    DEFAULT_GRID_N,
    DEFAULT_GRID_RANGE,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EQ_TOL,
    SuiteConfig,
    run_subcommand,
)
from .tube import EPS0

SUBCOMMANDS = ("symmetric", "bounds", "fourier", "pairing", "vrpath", "appendix", "verify-all")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubeschwarz",
        description="Desk-scale verification sweeps for Schwarzian estimates on long tubes.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} suite")
        p.add_argument("--ell", type=float, default=None,
                       help="single core length (overrides the grid options)")
        p.add_argument("--grid-from", type=float, default=DEFAULT_GRID_RANGE[0])
        p.add_argument("--grid-to", type=float, default=DEFAULT_GRID_RANGE[1])
        p.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N,
                       help="number of log-spaced grid points")
        p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--modes", type=int, default=None,
                       help="override the Fourier mode cutoff")
        p.add_argument("--tol", type=float, default=EQ_TOL,
                       help="tolerance for equality-type checks")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=str, default=None,
                       help="output path (default: stdout)")
        p.add_argument("--threads", type=int, default=0,
                       help="grid fan-out width (default: TUBESCHWARZ_THREADS or 1)")
    return parser


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    if args.ell is not None:
        grid = [args.ell]
    else:
        if args.grid_n < 1 or args.grid_from <= 0 or args.grid_to < args.grid_from:
            raise ValueError("invalid grid range")
        if args.grid_n == 1:
            grid = [args.grid_from]
        else:
            grid = [float(x) for x in np.geomspace(args.grid_from, args.grid_to, args.grid_n)]
    return SuiteConfig(
        ell_grid=grid,
        trials=args.trials,
        seed=args.seed,
        modes=args.modes,
        tol=args.tol,
        fmt=args.format,
        out=args.out,
        threads=args.threads,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        doc = run_subcommand(args.subcommand, config)
    except ValueError as exc:
        print(f"tubeschwarz: configuration error: {exc}", file=sys.stderr)
        return 2
    payload = emit_report(doc, config.fmt)
    if config.out:
        with open(config.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    n_bad = sum(1 for r in doc.rows if not r.satisfied)
    if n_bad:
        print(f"tubeschwarz: {n_bad} of {len(doc.rows)} checks violated", file=sys.stderr)
        return 1
    print(f"tubeschwarz: all {len(doc.rows)} checks satisfied", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
