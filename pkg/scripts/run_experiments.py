#!/usr/bin/env python3
"""Run the shipped experiment configs through the CLI.

Usage: python3 scripts/run_experiments.py [--out results] [--only sweep_bobs ...] [--threads N]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from mixedpls.cli import main as cli_main

ROOT = Path(__file__).resolve().parents[1]
COMMANDS = {
    "region_map": "region",
    "rate_vs_angle": "rate-angle",
    "power_vs_angle": "power-angle",
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=ROOT / "results")
    ap.add_argument("--configs", type=Path, default=ROOT / "configs")
    ap.add_argument("--only", nargs="*", default=None, help="config stems to run")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    paths = sorted(args.configs.glob("*.json"))
    if args.only:
        paths = [p for p in paths if p.stem in args.only]
    status = 0
    for path in paths:
        cmd = COMMANDS.get(path.stem, "sweep")
        t0 = time.time()
        rc = cli_main([cmd, "--config", str(path), "--out", str(args.out / f"{path.stem}.csv"),
                       "--threads", str(args.threads)])
        print(f"{path.stem}: exit {rc} in {time.time() - t0:.1f} s")
        status = status or rc
    return status


if __name__ == "__main__":
    sys.exit(main())
