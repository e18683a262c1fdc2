#!/usr/bin/env python3
"""
Study Batch Runner

Runs every study config in configs/ and writes one CSV per study.
Pipeline: Load configs → Shared reference cache → Studies → CSV + slopes

Usage:
    python scripts/run_all_studies.py
    python scripts/run_all_studies.py --only sdc_p3 pfasst_p3 --workers 4
"""

import argparse
import logging
import sys
import time
from pathlib import Path

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.pfasst_fem.errors import NumericalError
from src.pfasst_fem.harness import fit_slopes, load_config, run_study, write_csv

ROOT = Path(__file__).parent.parent
CONFIG_DIR = ROOT / "configs"


def parse_args():
    parser = argparse.ArgumentParser(description="Run all convergence studies")
    parser.add_argument("--config-dir", type=Path, default=CONFIG_DIR, help="Directory with *.cfg study files")
    parser.add_argument("--out-dir", type=Path, default=ROOT / "results", help="Directory for CSV files")
    parser.add_argument("--cache-dir", type=Path, default=ROOT / "results" / "cache", help="Reference cache")
    parser.add_argument("--workers", type=int, default=1, help="Processes per study")
    parser.add_argument("--only", nargs="*", default=None, help="Config names to run (without .cfg)")
    return parser.parse_args()


def main():
    args = parse_args()
    logging.basicConfig(
        level=logging.INFO,
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )
    configs = sorted(args.config_dir.glob("*.cfg"))
    if args.only:
        configs = [path for path in configs if path.stem in set(args.only)]
    if not configs:
        print(f"❌ ERROR: No study configs found in {args.config_dir}")
        return 2
    args.out_dir.mkdir(parents=True, exist_ok=True)

    print("=" * 80)
    print("CONVERGENCE STUDIES")
    print("=" * 80)
    print(f"\n{len(configs)} studies: {', '.join(path.stem for path in configs)}\n")

    pipeline_start = time.time()
    failures = 0
    for path in configs:
        cfg = load_config(path, workers=args.workers, cache_dir=args.cache_dir)
        print("\n" + "=" * 80)
        print(f"{path.stem}: {cfg.describe()}")
        print("=" * 80)

        step_start = time.time()
        try:
            rows = run_study(cfg)
        except NumericalError as e:
            print(f"❌ ERROR: {path.stem} failed: {e}")
            failures += 1
            continue

        out_path = args.out_dir / f"{path.stem}.csv"
        with open(out_path, "w", encoding="utf-8") as f:
            write_csv(rows, f)
        failed = sum(row.failed for row in rows)
        if failed:
            failures += 1

        print(f"✓ Wrote {len(rows)} rows to {out_path}" + (f" ({failed} failed)" if failed else ""))
        for k, slope in fit_slopes(rows).items():
            print(f"  k={k}: slope {slope:.2f}")
        print(f"⏱️  Completed in {time.time() - step_start:.2f}s")

    print(f"\n✓ All studies finished in {time.time() - pipeline_start:.2f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
