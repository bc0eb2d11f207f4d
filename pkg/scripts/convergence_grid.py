"""Monte Carlo z-scores over a (mu, eta) grid and several seeds, as CSV.

    python scripts/convergence_grid.py --rounds 1000000 --out convergence.csv
"""

import argparse
import sys

from gmprivacy.cli import render_rows
from gmprivacy.model import ModelParams, break_even_fee
from gmprivacy.montecarlo import SimConfig, convergence_report


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rounds", type=int, default=10**6)
    parser.add_argument("--seeds", default="42,7,1")
    parser.add_argument("--mu", default="0.2,0.5,0.8")
    parser.add_argument("--eta", default="0,0.25,0.4")
    parser.add_argument("--with-fee", action="store_true", help="charge the break-even fee")
    parser.add_argument("--out")
    args = parser.parse_args()

    rows = []
    for seed in (int(s) for s in args.seeds.split(",")):
        for mu in (float(x) for x in args.mu.split(",")):
            for eta in (float(x) for x in args.eta.split(",")):
                p = ModelParams(mu, eta)
                fee = break_even_fee(p) if args.with_fee else 0.0
                rep = convergence_report(SimConfig(p, rounds=args.rounds, seed=seed, fee=fee))
                for r in rep.rows:
                    rows.append({"seed": seed, "mu": mu, "eta": eta, "fee": fee, "quantity": r.name,
                                 "realized": r.realized, "target": r.target, "stderr": r.stderr, "z": r.z})
    text = render_rows(("seed", "mu", "eta", "fee", "quantity", "realized", "target", "stderr", "z"), rows, "csv")
    if args.out:
        with open(args.out, "w", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    worst = max(abs(r["z"]) for r in rows if r["z"] == r["z"])
    print(f"max |z| = {worst:.3f} over {len(rows)} comparisons", file=sys.stderr)


if __name__ == "__main__":
    main()
