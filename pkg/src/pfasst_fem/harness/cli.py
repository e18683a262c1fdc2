#!/usr/bin/env python3
"""
Command-line interface for single runs and convergence studies.

Usage:
    python -m src.pfasst_fem.harness.cli run --method sdc --order 3 --elements 128 --dt 0.5 --iters 3
    python -m src.pfasst_fem.harness.cli study --config configs/sdc_p3.cfg --out sdc_p3.csv

Exit codes: 0 success, 1 numerical failure (including failed study rows),
2 configuration error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from ..errors import ConfigurationError, NumericalError
from .config import StudyConfig, load_config
from .study import fit_slopes, run_study, write_csv

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2

logger = logging.getLogger("pfasst_fem.cli")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfasst-fem",
        description="SDC and two-level PFASST for FEM reaction-diffusion: single runs and convergence studies",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument("--no-progress", action="store_true", help="Disable progress bars")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run a single (dt, k) point and print its CSV row (no header)")
    run.add_argument("--method", required=True, help="sdc, sdc-naive, pfasst or pfasst-naive")
    run.add_argument("--order", type=int, required=True, help="Fine polynomial order (1-3)")
    run.add_argument("--elements", type=int, required=True, help="Fine number of elements")
    run.add_argument("--dt", type=float, required=True, help="Step size")
    run.add_argument("--iters", type=int, required=True, help="SDC sweeps or PFASST iterations")
    run.add_argument("--nodes", type=int, default=4, help="Radau nodes per step (default: 4)")
    run.add_argument("--block", type=int, default=4, help="PFASST block size (default: 4)")
    run.add_argument("--bc", default="natural", help="natural or dirichlet (default: natural)")
    run.add_argument("--coarsen", default=None, help="p or h (default: p for order >= 2, else h)")
    run.add_argument("--threads", type=int, default=1, help="Threads for the parallel fine sweep")
    run.add_argument("--cache-dir", type=Path, default=None, help="Reference-solution cache directory")

    study = subparsers.add_parser("study", help="Run a convergence study from a config file")
    study.add_argument("--config", type=Path, required=True, help="Study config file (key = value lines)")
    study.add_argument("--out", type=Path, default=None, help="CSV output file (default: stdout)")
    study.add_argument("--workers", type=int, default=None, help="Processes for study points")
    study.add_argument("--threads", type=int, default=None, help="Threads for the parallel fine sweep")
    study.add_argument("--cache-dir", type=Path, default=None, help="Reference-solution cache directory")
    return parser


def _config_from_args(args: argparse.Namespace) -> StudyConfig:
    if args.command == "study":
        return load_config(args.config, workers=args.workers, threads=args.threads, cache_dir=args.cache_dir)
    return StudyConfig(
        method=args.method,
        order=args.order,
        elements=args.elements,
        dt_list=[args.dt],
        k_list=[args.iters],
        nodes=args.nodes,
        block=args.block,
        bc_mode=args.bc,
        coarsening=args.coarsen,
        threads=args.threads,
        cache_dir=args.cache_dir,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )

    try:
        cfg = _config_from_args(args)
    except (ConfigurationError, ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    try:
        rows = run_study(cfg, progress=not args.no_progress)
    except ConfigurationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL

    out_path = getattr(args, "out", None)
    if args.command == "run":
        print(rows[0].csv_line())
    elif out_path is not None:
        with open(out_path, "w", encoding="utf-8") as f:
            write_csv(rows, f)
        logger.info(f"Wrote {len(rows)} rows to {out_path}")
    else:
        write_csv(rows, sys.stdout)

    slopes = fit_slopes(rows) if args.command == "study" else {}
    for k, slope in slopes.items():
        logger.info(f"k={k}: fitted log2 slope {slope:.2f}")

    failed = [row for row in rows if row.failed]
    if failed:
        logger.error(f"{len(failed)} of {len(rows)} study points failed")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
