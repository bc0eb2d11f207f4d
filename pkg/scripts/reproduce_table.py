"""Print the spread/subsidy table and check every cell against the enumeration oracle.

    python scripts/reproduce_table.py [--mu 1]
"""

import argparse

from gmprivacy.cli import TABLE_ETAS, render_rows, table_rows
from gmprivacy.model import ModelParams
from gmprivacy.oracle import enumerate_outcomes, exact_welfare


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mu", type=float, default=1.0)
    args = parser.parse_args()

    rows = table_rows(args.mu)
    for eta, row in zip(TABLE_ETAS, rows):
        tree = enumerate_outcomes(ModelParams(args.mu, eta))
        row["oracle_spread"] = tree.spread
        row["oracle_subsidy"] = -exact_welfare(tree).pi_maker
    cols = ("eta", "spread_over_delta", "oracle_spread", "subsidy_over_delta", "oracle_subsidy")
    print(render_rows(cols, rows, "text"), end="")


if __name__ == "__main__":
    main()
