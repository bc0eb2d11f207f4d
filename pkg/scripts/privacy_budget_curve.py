"""Spread, subsidy and fee floor against the randomized-response budget, as plot-ready CSV.

    python scripts/privacy_budget_curve.py --mu 0.5 --eps-max 6 > curve.csv
"""

import argparse
import sys

import numpy as np

from gmprivacy.sweep import SWEEP_COLUMNS, SweepSpec, sweep_rows
from gmprivacy.cli import render_rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mu", default="0.25,0.5,1", help="comma-separated informed fractions")
    parser.add_argument("--eps-max", type=float, default=6.0)
    parser.add_argument("--points", type=int, default=61)
    args = parser.parse_args()

    spec = SweepSpec(
        mu_values=[float(m) for m in args.mu.split(",")],
        epsilon_values=[float(e) for e in np.linspace(0.0, args.eps_max, args.points)],
        normalize_by_delta=True,
    )
    sys.stdout.write(render_rows(SWEEP_COLUMNS, sweep_rows(spec), "csv"))


if __name__ == "__main__":
    main()
