"""Command-line front end.

Subcommands:
    test           run the symmetry test on a CSV of observations
    zeta-gaussian  closed-form/Haar-MC value of the measure for N(0, Sigma)
    simulate       run a configured power/level study
    pitman         local-alternative efficiency study
    subsample      subsampling protocol on a local CSV dataset

Exit codes: 0 success, 1 runtime/IO failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .calibrate import DEFAULT_ALPHA, DEFAULT_B, run_test
from .core import Sample
from .experiments import (
    load_csv_matrix,
    parse_config,
    run_pitman_study,
    run_power_study,
    run_subsample_study,
    write_records,
)
from .oracle import CovSpec, HaarConfig, gaussian_zeta
from .rng import RngStream


def _add_common_test_flags(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--B", type=int, default=DEFAULT_B)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spheresym", description=__doc__)
    parser.add_argument("--threads", type=int, default=None,
                        help="cap BLAS threads (results never depend on this)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test a CSV of observations for spherical symmetry")
    p.add_argument("--input", required=True, help="CSV file, rows = observations")
    p.add_argument("--header", action="store_true", help="skip a header row")
    _add_common_test_flags(p)
    p.add_argument("--center", choices=["none", "spatial-median"], default="none")
    p.add_argument("--exact", action="store_true", help="enumerate all 2^n swaps (n <= 20)")
    p.add_argument("--output", help="write the outcome as JSON to this path")

    p = sub.add_parser("zeta-gaussian", help="measure value for a centered Gaussian")
    p.add_argument("--sigma", required=True, help="CSV covariance matrix or 'identity'")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--haar-m", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("simulate", help="run a configured power/level study")
    p.add_argument("--config", required=True)

    p = sub.add_parser("pitman", help="local-alternative efficiency study")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n-grid", type=int, nargs="+", default=[50, 100, 250, 500])
    p.add_argument("--R", type=int, default=200)
    _add_common_test_flags(p)
    p.add_argument("--output", default="results/pitman")

    p = sub.add_parser("subsample", help="subsampling study on a local CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--header", action="store_true")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--R", type=int, default=200)
    _add_common_test_flags(p)
    p.add_argument("--center", choices=["none", "spatial-median"], default="spatial-median")
    p.add_argument("--output", default="results/subsample")

    return parser


def _limit_threads(threads):
    if threads is None:
        return
    if threads < 1:
        raise SystemExit(2)
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(limits=threads)
    except ImportError:
        pass


def _print_records(records):
    header = f"{'spec':<50} {'n':>5} {'d':>5} {'power':>7} {'se':>7}"
    print(header)
    print("-" * len(header))
    for rec in records:
        print(f"{rec.spec:<50} {rec.n:>5} {rec.d:>5} {rec.power:>7.3f} {rec.std_error:>7.3f}")


def cmd_test(args) -> int:
    data = load_csv_matrix(args.input, has_header=args.header)
    if not (0 < args.alpha < 1):
        print(f"error: alpha must be in (0, 1), got {args.alpha}", file=sys.stderr)
        return 2
    if args.B < 1:
        print(f"error: B must be >= 1, got {args.B}", file=sys.stderr)
        return 2
    outcome = run_test(
        Sample(data),
        RngStream(args.seed),
        alpha=args.alpha,
        B=args.B,
        center_mode=args.center,
        exact=args.exact,
    )
    print(f"statistic {outcome.statistic:.10g}")
    print(f"p_value {outcome.p_value:.10g}")
    print(f"reject {str(outcome.reject).lower()}")
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(outcome.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_zeta_gaussian(args) -> int:
    if args.haar_m < 1:
        print(f"error: --haar-m must be >= 1, got {args.haar_m}", file=sys.stderr)
        return 2
    if args.sigma == "identity":
        sigma = CovSpec(np.eye(args.d))
    else:
        matrix = load_csv_matrix(args.sigma)
        try:
            sigma = CovSpec(matrix)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if sigma.d != args.d:
            print(f"error: matrix is {sigma.d}x{sigma.d}, expected d={args.d}", file=sys.stderr)
            return 2
    estimate, std_error = gaussian_zeta(sigma, args.d, HaarConfig(m=args.haar_m, seed=args.seed))
    print(f"{estimate:.10g} {std_error:.10g}")
    return 0


def cmd_simulate(args) -> int:
    try:
        config = parse_config(args.config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records = run_power_study(config)
    _print_records(records)
    out = config.output or f"results/{config.name}"
    echo = {
        "name": config.name,
        "R": config.R,
        "B": config.B,
        "alpha": config.alpha,
        "seed": config.seed,
        "center": config.center_mode,
        "cells": [rec.spec + f" n={rec.n}" for rec in records],
    }
    csv_path, json_path = write_records(records, out, echo)
    print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_pitman(args) -> int:
    try:
        records = run_pitman_study(
            args.gamma, tuple(args.n_grid), R=args.R, B=args.B, alpha=args.alpha, seed=args.seed
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_records(records)
    echo = {"gamma": args.gamma, "n_grid": args.n_grid, "R": args.R, "B": args.B,
            "alpha": args.alpha, "seed": args.seed}
    csv_path, json_path = write_records(records, args.output, echo)
    print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_subsample(args) -> int:
    try:
        records = run_subsample_study(
            args.input,
            tuple(args.sizes),
            R=args.R,
            B=args.B,
            alpha=args.alpha,
            seed=args.seed,
            center_mode=args.center,
            has_header=args.header,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_records(records)
    echo = {"input": args.input, "sizes": args.sizes, "R": args.R, "B": args.B,
            "alpha": args.alpha, "seed": args.seed, "center": args.center}
    csv_path, json_path = write_records(records, args.output, echo)
    print(f"wrote {csv_path} and {json_path}")
    return 0


_COMMANDS = {
    "test": cmd_test,
    "zeta-gaussian": cmd_zeta_gaussian,
    "simulate": cmd_simulate,
    "pitman": cmd_pitman,
    "subsample": cmd_subsample,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _limit_threads(args.threads)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
