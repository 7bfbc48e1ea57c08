#!/usr/bin/env python3
"""Regenerate every bundled dataset into an output directory.

Usage: python scripts/reproduce_figures.py [--out DIR] [--seed N] [--grid NxN]

Equivalent to running `ucvqkd reproduce <fig>` for each figure id. Region
grids default to 200x200; pass a smaller --grid for a quick look.
"""

import argparse
import sys
import time
from pathlib import Path

from ucvqkd.cli import run
from ucvqkd.presets import FIGURE_IDS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures", type=Path)
    ap.add_argument("--seed", default=0, type=int)
    ap.add_argument("--grid", default=None, help="region grid, e.g. 100x100")
    args = ap.parse_args()

    for fig in FIGURE_IDS:
        argv = ["reproduce", fig, "--seed", str(args.seed), "--out", str(args.out)]
        if args.grid and fig in ("fig2", "fig6", "fig7"):
            argv += ["--grid", args.grid]
        t0 = time.time()
        code = run(argv)
        if code != 0:
            print(f"{fig}: failed with exit code {code}", file=sys.stderr)
            return code
        print(f"{fig}: wrote {args.out}/{fig}.csv in {time.time() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
