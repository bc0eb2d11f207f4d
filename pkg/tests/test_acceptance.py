"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import io
import json
import math
import subprocess
import sys
import time
from decimal import Decimal

import numpy as np
import pytest

from gmprivacy import model
from gmprivacy.cli import main
from gmprivacy.model import ModelParams
from gmprivacy.montecarlo import Comparison, SimConfig, convergence_report, simulate
from gmprivacy.oracle import enumerate_outcomes, exact_posterior, exact_welfare

TOL = 1e-12
GRID_MU = np.linspace(0.0, 1.0, 20)
GRID_ETA = np.linspace(0.0, 0.5, 20)


def value_pairs():
    rng = np.random.default_rng(20260101)
    pairs = [(0.0, 1.0)]
    for _ in range(3):
        lo = float(rng.uniform(-5, 5))
        pairs.append((lo, lo + float(rng.uniform(0.5, 10))))
    return pairs


def grid():
    for v_low, v_high in value_pairs():
        for mu in GRID_MU:
            for eta in GRID_ETA:
                yield ModelParams(float(mu), float(eta), v_low, v_high)


def cli(*argv):
    return subprocess.run([sys.executable, "-m", "gmprivacy", *argv], capture_output=True, check=True)


def test_01_table_reproduction(criterion):
    t0 = time.perf_counter()
    out = cli("table", "--mu", "1").stdout.decode()
    elapsed = time.perf_counter() - t0
    lines = out.splitlines()
    rows = [tuple(Decimal(x) for x in line.split(",")) for line in lines[1:]]
    expected = [tuple(Decimal(x) for x in r) for r in
                [("0", "1", "0"), ("0.1", "0.8", "0.1"), ("0.25", "0.5", "0.25"),
                 ("0.4", "0.2", "0.4"), ("0.5", "0", "0.5")]]
    ok = lines[0] == "eta,spread_over_delta,subsidy_over_delta" and rows == expected and elapsed < 1.0
    criterion(1, "Table 1 reproduction", ok, f"{len(rows)} rows exact, {elapsed:.2f}s")


def test_02_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    n = 0
    for p in grid():
        tree = enumerate_outcomes(p)
        ew, w = exact_welfare(tree), model.welfare(p)
        gaps = [ew.pi_informed - w.pi_informed, ew.pi_noise - w.pi_noise, ew.pi_maker - w.pi_maker,
                tree.spread - model.quotes(p).spread,
                exact_posterior(tree, "buy") - model.posterior_high(p, "buy"),
                exact_posterior(tree, "sell") - model.posterior_high(p, "sell")]
        worst = max(worst, max(abs(g) for g in gaps) / p.delta)
        n += 1
    elapsed = time.perf_counter() - t0
    criterion(2, "oracle equivalence", worst <= TOL and elapsed < 5.0,
              f"{n} points, max gap {worst:.2e}*delta, {elapsed:.2f}s")


def test_03_zero_sum(criterion):
    worst = 0.0
    for p in grid():
        core = model.welfare(p).zero_sum_residual(p.mu)
        orc = exact_welfare(enumerate_outcomes(p)).zero_sum_residual(p.mu)
        worst = max(worst, abs(core) / p.delta, abs(orc) / p.delta)
    criterion(3, "zero-sum identity", worst <= TOL, f"max residual {worst:.2e}*delta")


def test_04_limits(criterion):
    bad = []
    for p in grid():
        lo, hi = p.with_eta(0.0), p.with_eta(0.5)
        if model.quotes(lo).spread != p.mu * p.delta or model.welfare(lo).pi_maker != 0:
            bad.append(("eta=0", p))
        if model.quotes(hi).spread != 0 or model.welfare(hi).subsidy != p.mu * p.delta / 2:
            bad.append(("eta=1/2", p))
    criterion(4, "limit checks", not bad, f"{len(bad)} exact mismatches")


def test_05_true_direction_branch(criterion):
    worst_true = worst_committed = 0.0
    for p in grid():
        m_true = exact_welfare(enumerate_outcomes(p, "true_direction")).pi_maker
        m_comm = exact_welfare(enumerate_outcomes(p, "committed_bayesian")).pi_maker
        worst_true = max(worst_true, abs(m_true) / p.delta)
        worst_committed = max(worst_committed, abs(m_comm + p.mu * p.eta * p.delta) / p.delta)
    criterion(5, "true-direction maker breaks even", worst_true <= TOL and worst_committed <= TOL,
              f"true-direction {worst_true:.2e}*delta, committed vs -mu*eta*delta {worst_committed:.2e}*delta")


def test_06_monte_carlo_convergence(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    runs = 0
    for seed in (42, 7, 1):
        for mu in (0.2, 0.5, 0.8):
            for eta in (0.0, 0.25, 0.4):
                rep = convergence_report(SimConfig(ModelParams(mu, eta), rounds=10**6, seed=seed))
                worst = max(worst, rep.max_abs_z())
                runs += 1
    elapsed = time.perf_counter() - t0
    criterion(6, "Monte Carlo convergence", worst <= 4 and elapsed < 30,
              f"{runs} runs, max |z| {worst:.2f}, {elapsed:.1f}s")


def test_07_fee_neutrality(criterion):
    worst = 0.0
    for mu in (0.2, 0.5, 0.8):
        for eta in (0.1, 0.25, 0.4):
            p = ModelParams(mu, eta)
            fee = p.mu * p.eta * p.delta
            res = simulate(SimConfig(p, rounds=10**6, seed=42, fee=fee))
            tol = TOL * p.delta
            checks = [
                Comparison("informed", res.net_informed, (1 - mu) * p.delta / 2, res.stderr_informed, tol),
                Comparison("noise", res.net_noise, -mu * p.delta / 2, res.stderr_noise, tol),
                Comparison("maker", res.maker_plus_fees, 0.0, res.stderr_maker, tol),
            ]
            worst = max(worst, max(abs(c.z) for c in checks))
    criterion(7, "fee neutrality", worst <= 4, f"max |z| {worst:.2f}")


def test_08_comparative_statics(criterion):
    rng = np.random.default_rng(8)
    h = 1e-6
    worst = 0.0
    for _ in range(50):
        p = ModelParams(float(rng.uniform(0.05, 1)), float(rng.uniform(h, 0.5 - h)),
                        0.0, float(rng.uniform(0.1, 10)))
        fd_spread = (model.quotes(p.with_eta(p.eta + h)).spread
                     - model.quotes(p.with_eta(p.eta - h)).spread) / (2 * h)
        fd_noise = (model.welfare(p.with_eta(p.eta + h)).pi_noise
                    - model.welfare(p.with_eta(p.eta - h)).pi_noise) / (2 * h)
        worst = max(worst,
                    abs(fd_spread - model.spread_slope_eta(p)) / abs(model.spread_slope_eta(p)),
                    abs(fd_noise - model.noise_pnl_slope_eta(p)) / abs(model.noise_pnl_slope_eta(p)))
    criterion(8, "comparative statics", worst <= 1e-6, f"max relative error {worst:.2e}")


def test_09_dp_mapping(criterion, capsys):
    eps = np.linspace(0, 10, 10_001)
    etas = [model.dp_flip_probability(float(e)) for e in eps]
    monotone = all(a > b for a, b in zip(etas, etas[1:]))
    anchors = (abs(model.dp_flip_probability(0) - 0.5) <= TOL
               and abs(model.dp_flip_probability(math.log(3)) - 0.25) <= TOL)

    # dp at the budget matching each table row must reproduce that row
    main(["table", "--mu", "1"])
    table = {float(r.split(",")[0]): r.split(",") for r in capsys.readouterr().out.splitlines()[1:]}
    consistent = True
    for eta in (0.1, 0.25, 0.4, 0.5):
        e = math.log((1 - eta) / eta)
        main(["dp", "--epsilon", repr(e), "--mu", "1", "--format", "json"])
        d = json.loads(capsys.readouterr().out)
        row = table[eta]
        consistent &= abs(d["eta"] - eta) <= TOL
        consistent &= abs(d["spread"] - float(row[1])) <= TOL
        consistent &= abs(d["fee_floor"] - float(row[2])) <= TOL
    criterion(9, "DP mapping", monotone and anchors and consistent,
              f"monotone={monotone} anchors={anchors} dp/table consistent={consistent}")


def test_10_determinism(criterion, tmp_path):
    same = True
    for label, argv in [
        ("simulate", ["simulate", "--mu", "0.3", "--eta", "0.2", "--rounds", "200000", "--seed", "99",
                      "--fee", "0.01", "--format", "csv"]),
        ("sweep", ["sweep", "--mu-list", "0,0.3,0.7,1", "--epsilon-list", "0,0.5,1,2,5", "--v-low", "1",
                   "--v-high", "3.5"]),
    ]:
        outs = []
        for i in range(2):
            path = tmp_path / f"{label}{i}.out"
            cli(*argv, "--out", str(path))
            outs.append(path.read_bytes())
        same &= outs[0] == outs[1] and len(outs[0]) > 0
    criterion(10, "determinism", same, "simulate and sweep outputs byte-identical across runs")
