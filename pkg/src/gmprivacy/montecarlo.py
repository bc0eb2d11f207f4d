"""Seeded Monte Carlo of the one-shot trading game, repeated over many rounds.

Each round consumes exactly four uniforms from a single PCG64 stream, in
this order:

    1. value      high if u < 1/2 (ignored under the fixed_* value modes)
    2. type       informed if u < mu
    3. direction  noise trader buys if u < 1/2 (drawn for informed too)
    4. flip       observed direction flipped if u < eta

Rounds are drawn in chunks; because the stream is consumed row by row, the
chunk size has no effect on the result. Quotes are the committed Bayesian
quotes, fixed for the whole run. A buy fills at the ask, a sell at the bid,
on the trader's true direction.

Per-round P&L takes one of eight values (value x class x direction), so the
run is summarized by category counts. Means and standard errors are
computed from those counts, which keeps the bookkeeping exact and the
output bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .model import IDENTITY_TOL, ModelParams, ParamError, likelihood_buy, quotes, welfare

ValueMode = Literal["per_round", "fixed_high", "fixed_low"]
VALUE_MODES = ("per_round", "fixed_high", "fixed_low")

CHUNK = 1 << 18
# category code = 4*is_low + 2*is_noise + is_sell
N_CATEGORIES = 8


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    rounds: int
    seed: int = 0
    fee: float = 0.0
    value_redraw: ValueMode = "per_round"

    def __post_init__(self):
        if isinstance(self.rounds, bool) or not isinstance(self.rounds, (int, np.integer)) or self.rounds < 1:
            raise ParamError("rounds", "be a positive integer", self.rounds)
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ParamError("seed", "be an unsigned 64-bit integer", self.seed)
        if not isinstance(self.fee, (int, float)) or not math.isfinite(self.fee) or self.fee < 0:
            raise ParamError("fee", "be >= 0", self.fee)
        if self.value_redraw not in VALUE_MODES:
            raise ParamError("value_redraw", f"be one of {', '.join(VALUE_MODES)}", self.value_redraw)


@dataclass(frozen=True)
class SimResult:
    """Aggregates of one run.

    ``mean_pnl_*`` are trading P&L before fees: trader fills against the
    maker. The fee (if any) is paid by every trader and credited to the
    maker; see the ``net_*`` and ``maker_plus_fees`` properties. Means and
    standard errors of an empty class are NaN.
    """

    rounds: int
    seed: int
    fee: float
    mean_pnl_informed: float
    mean_pnl_noise: float
    mean_pnl_maker: float
    stderr_informed: float
    stderr_noise: float
    stderr_maker: float
    informed_count: int
    noise_count: int
    observed_buy_frequency: float
    fee_revenue_per_trade: float
    total_pnl_informed: float
    total_pnl_noise: float
    total_pnl_maker: float
    fee_revenue: float
    ask: float
    bid: float
    category_counts: tuple[int, ...] = field(repr=False)

    @property
    def net_informed(self) -> float:
        return self.mean_pnl_informed - self.fee

    @property
    def net_noise(self) -> float:
        return self.mean_pnl_noise - self.fee

    @property
    def maker_plus_fees(self) -> float:
        return self.mean_pnl_maker + self.fee_revenue_per_trade

    def conservation_residual(self) -> float:
        """Trader P&L + maker P&L + fees collected - fees paid, summed over the run."""
        trades = self.total_pnl_informed + self.total_pnl_noise + self.total_pnl_maker
        return trades + (self.fee_revenue - self.fee * self.rounds)


def _draw_counts(config: SimConfig) -> tuple[np.ndarray, int]:
    p = config.params
    rng = np.random.Generator(np.random.PCG64(config.seed))
    counts = np.zeros(N_CATEGORIES, dtype=np.int64)
    obs_buys = 0
    done = 0
    while done < config.rounds:
        n = min(CHUNK, config.rounds - done)
        u = rng.random((n, 4))
        if config.value_redraw == "per_round":
            low = u[:, 0] >= 0.5
        else:
            low = np.full(n, config.value_redraw == "fixed_low")
        noise = u[:, 1] >= p.mu
        # informed sells iff value is low; noise trader sells on a coin flip
        sell = np.where(noise, u[:, 2] >= 0.5, low)
        flip = u[:, 3] < p.eta
        obs_buys += int(np.count_nonzero(sell == flip))
        code = 4 * low.astype(np.int64) + 2 * noise.astype(np.int64) + sell.astype(np.int64)
        counts += np.bincount(code, minlength=N_CATEGORIES)
        done += n
    return counts, obs_buys


def _category_pnl(params: ModelParams, ask: float, bid: float) -> list[float]:
    out = []
    for code in range(N_CATEGORIES):
        v = params.v_low if code & 4 else params.v_high
        out.append(bid - v if code & 1 else v - ask)
    return out


def _mean_stderr(counts: list[int], values: list[float]) -> tuple[float, float, float]:
    """(total, mean, stderr of the mean) of a sample given by value counts."""
    n = sum(counts)
    total = math.fsum(c * x for c, x in zip(counts, values))
    if n == 0:
        return 0.0, math.nan, math.nan
    mean = total / n
    if n == 1:
        return total, mean, math.nan
    ss = math.fsum(c * (x - mean) ** 2 for c, x in zip(counts, values))
    return total, mean, math.sqrt(ss / (n - 1)) / math.sqrt(n)


def simulate(config: SimConfig) -> SimResult:
    p = config.params
    q = quotes(p)
    counts, obs_buys = _draw_counts(config)
    counts = [int(c) for c in counts]
    pnl = _category_pnl(p, q.ask, q.bid)

    inf_codes = [c for c in range(N_CATEGORIES) if not c & 2]
    noise_codes = [c for c in range(N_CATEGORIES) if c & 2]
    tot_i, mean_i, se_i = _mean_stderr([counts[c] for c in inf_codes], [pnl[c] for c in inf_codes])
    tot_n, mean_n, se_n = _mean_stderr([counts[c] for c in noise_codes], [pnl[c] for c in noise_codes])
    _, _, se_m = _mean_stderr(counts, [-x for x in pnl])
    # the maker is the counterparty to every fill
    tot_m = -(tot_i + tot_n)

    n = config.rounds
    return SimResult(
        rounds=n,
        seed=config.seed,
        fee=config.fee,
        mean_pnl_informed=mean_i,
        mean_pnl_noise=mean_n,
        mean_pnl_maker=tot_m / n,
        stderr_informed=se_i,
        stderr_noise=se_n,
        stderr_maker=se_m,
        informed_count=sum(counts[c] for c in inf_codes),
        noise_count=sum(counts[c] for c in noise_codes),
        observed_buy_frequency=obs_buys / n,
        fee_revenue_per_trade=config.fee,
        total_pnl_informed=tot_i,
        total_pnl_noise=tot_n,
        total_pnl_maker=tot_m,
        fee_revenue=config.fee * n,
        ask=q.ask,
        bid=q.bid,
        category_counts=tuple(counts),
    )


@dataclass(frozen=True)
class Comparison:
    name: str
    realized: float
    target: float
    stderr: float
    # gaps below float resolution are not evidence of anything
    atol: float = 0.0

    @property
    def gap(self) -> float:
        return self.realized - self.target

    @property
    def z(self) -> float:
        """gap / stderr, or 0 when the gap is within ``atol``."""
        if math.isnan(self.realized) or math.isnan(self.stderr):
            return math.nan
        if abs(self.gap) <= self.atol:
            return 0.0
        if self.stderr == 0:
            return math.copysign(math.inf, self.gap)
        return self.gap / self.stderr


@dataclass(frozen=True)
class ConvergenceReport:
    config: SimConfig
    result: SimResult
    rows: tuple[Comparison, ...]

    def max_abs_z(self) -> float:
        zs = [abs(r.z) for r in self.rows if not math.isnan(r.z)]
        return max(zs, default=0.0)

    def passed(self, z_max: float = 4.0) -> bool:
        return self.max_abs_z() <= z_max


def convergence_report(config: SimConfig) -> ConvergenceReport:
    """Simulate and set each realized mean against its closed form.

    Trader rows are net of the fee and the maker row includes fee revenue,
    so with ``fee = break_even_fee`` the targets are the eta = 0 values.
    """
    res = simulate(config)
    p = config.params
    w = welfare(p)
    if config.value_redraw == "per_round":
        freq_target = 0.5
    else:
        freq_target = likelihood_buy(p, "high" if config.value_redraw == "fixed_high" else "low")
    freq_se = math.sqrt(freq_target * (1 - freq_target) / res.rounds)
    tol = IDENTITY_TOL * p.delta
    rows = (
        Comparison("informed", res.net_informed, w.pi_informed - config.fee, res.stderr_informed, tol),
        Comparison("noise", res.net_noise, w.pi_noise - config.fee, res.stderr_noise, tol),
        Comparison("maker", res.maker_plus_fees, w.pi_maker + config.fee, res.stderr_maker, tol),
        Comparison("observed_buy_frequency", res.observed_buy_frequency, freq_target, freq_se, IDENTITY_TOL),
    )
    return ConvergenceReport(config=config, result=res, rows=rows)
