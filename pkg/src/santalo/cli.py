"""Command-line entry point: run a named experiment and emit its report.

Usage:
    santalo <experiment> [--samples N] [--seed S] [--which john|lowner]
            [--arc-n N] [--tol X] [--fit-tol X] [--out report.json]
            [--csv trace.csv] [--body polygon.txt] [--workers N]

Exit code 0 iff the experiment passed.
"""
from __future__ import annotations

import argparse
import sys

from . import experiments as X
from .polygons import load_polygon

EXPERIMENTS = (
    "main-theorem",
    "corollary",
    "stability",
    "sqrt-eps-optimality",
    "counterexamples",
    "cone",
    "sector-profile",
    "extremal-search",
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="santalo",
        description="Verify volume-sum bounds for origin-symmetric planar convex bodies.",
    )
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--samples", type=int, default=None, help="sample/seed count override")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--which", choices=("john", "lowner"), default="john")
    p.add_argument("--arc-n", type=int, default=None, help="arc/ellipse vertex count")
    p.add_argument("--tol", type=float, default=None, help="claim tolerance override")
    p.add_argument("--fit-tol", type=float, default=None, help="ellipse solver tolerance")
    p.add_argument("--fit-iters", type=int, default=None, help="ellipse solver iteration cap")
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.add_argument("--csv", default=None, help="write a search trace CSV here")
    p.add_argument("--body", default=None, help="evaluate this polygon file instead of sampling")
    p.add_argument("--workers", type=int, default=1, help="worker processes for sampling")
    return p


def run(args: argparse.Namespace) -> X.ExperimentReport:
    body = load_polygon(args.body) if args.body else None
    kw = {}
    if args.tol is not None:
        kw["tol"] = args.tol
    name = args.experiment
    if name == "main-theorem":
        if args.samples is not None:
            kw["n_samples"] = args.samples
        if args.fit_tol is not None:
            kw["fit_tol"] = args.fit_tol
        if args.arc_n is not None:
            kw["disk_n"] = args.arc_n
        return X.exp_main_theorem(
            seed=args.seed, which=args.which, body=body, workers=args.workers, **kw
        )
    if name == "corollary":
        if args.samples is not None:
            kw["n_samples"] = args.samples
        if args.fit_tol is not None:
            kw["fit_tol"] = args.fit_tol
        if args.arc_n is not None:
            kw["witness_n"] = args.arc_n
        return X.exp_corollary(
            seed=args.seed, which=args.which, body=body, workers=args.workers, **kw
        )
    if name == "stability":
        if args.samples is not None:
            kw["n_samples"] = args.samples
        if args.fit_tol is not None:
            kw["fit_tol"] = args.fit_tol
        if args.arc_n is not None:
            kw["ellipse_n"] = args.arc_n
        return X.exp_stability(seed=args.seed, body=body, workers=args.workers, **kw)
    if name == "sqrt-eps-optimality":
        if args.arc_n is not None:
            kw["n_vertices"] = args.arc_n
        return X.exp_sqrt_eps_optimality(**kw)
    if name == "counterexamples":
        if args.samples is not None:
            kw["n_samples"] = args.samples
        if args.arc_n is not None:
            kw["disk_n"] = args.arc_n
        return X.exp_counterexamples(seed=args.seed, workers=args.workers, **kw)
    if name == "cone":
        if args.samples is not None:
            kw["n_samples"] = args.samples
        if args.arc_n is not None:
            kw["arc_n"] = args.arc_n
        return X.exp_cone(seed=args.seed, workers=args.workers, **kw)
    if name == "sector-profile":
        if args.arc_n is not None:
            kw["arc_n"] = args.arc_n
        return X.exp_sector_profile(**kw)
    if name == "extremal-search":
        if args.samples is not None:
            kw["n_seeds"] = args.samples
        return X.exp_extremal_search(
            seed=args.seed, csv_path=args.csv, workers=args.workers, **kw
        )
    raise ValueError(f"unknown experiment {name!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = run(args)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    print(
        f"claim={report.claim_id} passed={report.passed} "
        f"worst={report.worst_value:.12g} bound={report.bound:.12g} "
        f"tol={report.tolerance:g} samples={report.n_samples} "
        f"runtime_ms={report.runtime_ms}"
    )
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
