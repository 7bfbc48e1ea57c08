#!/usr/bin/env python3
"""Print a quick feasibility table: reachable distance vs block size.

For each exchanged-pulse count the script reports the largest distance with
a positive finite-size rate (modulation variance optimized per point) and
the rate at a few reference distances.

Usage: python scripts/distance_budget.py [--two-n 1e10 1e12 1e14] [--eps-x 0.01]
"""

import argparse

from ucvqkd.composable import EpsilonBudget
from ucvqkd.optimize import max_distance, rate_vs_block_size


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--two-n", nargs="+", type=float, default=[1e10, 1e12, 1e14])
    ap.add_argument("--eps-x", type=float, default=0.01)
    ap.add_argument("--beta", type=float, default=0.95)
    args = ap.parse_args()

    budget = EpsilonBudget.default()
    print(f"{'2n':>10}  {'max km':>7}  {'K@5km':>10}  {'K@10km':>10}  {'K@15km':>10}")
    for two_n in args.two_n:
        km, found = max_distance(
            two_n, budget, beta=args.beta, eps_x=args.eps_x, tolerance_km=0.2
        )
        rates = [
            rate_vs_block_size(d, [two_n], budget,
                               beta=args.beta, eps_x=args.eps_x).rates[0]
            for d in (5.0, 10.0, 15.0)
        ]
        reach = f"{km:7.1f}" if found else "      -"
        cells = "  ".join(f"{r:10.4f}" if r > 0 else f"{'-':>10}" for r in rates)
        print(f"{two_n:10.1e}  {reach}  {cells}")


if __name__ == "__main__":
    main()
