"""Closed forms for Glosten-Milgrom pricing under a binary flip channel.

The market maker sees the trade direction through a binary symmetric
channel with flip probability ``eta`` and commits to Bayesian quotes
computed from the noisy direction. The prior on the high value is fixed
at 1/2; there is deliberately no way to pass a different prior.

All money-valued results are in absolute price units. Dividing by
``delta`` is left to callers (the CLI does it for table output).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

Value = Literal["high", "low"]
Direction = Literal["buy", "sell"]
Agent = Literal["informed", "noise"]

# Relative tolerance (times delta) for algebraic identities.
IDENTITY_TOL = 1e-12


class ParamError(ValueError):
    """A model parameter is outside its admissible range.

    ``field`` names the offending parameter and ``bound`` the violated
    constraint, so callers can report them per flag or per sweep row.
    """

    def __init__(self, field: str, bound: str, value: object = None):
        self.field = field
        self.bound = bound
        self.value = value
        super().__init__(f"{field} must {bound}" + ("" if value is None else f" (got {value!r})"))


def _check_finite(field: str, x: float) -> None:
    if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x):
        raise ParamError(field, "be a finite number", x)


@dataclass(frozen=True)
class ModelParams:
    """Informed fraction, flip probability and the two value levels."""

    mu: float
    eta: float
    v_low: float = 0.0
    v_high: float = 1.0

    def __post_init__(self):
        for name in ("mu", "eta", "v_low", "v_high"):
            _check_finite(name, getattr(self, name))
        if not 0.0 <= self.mu <= 1.0:
            raise ParamError("mu", "lie in [0, 1]", self.mu)
        if not 0.0 <= self.eta <= 0.5:
            raise ParamError("eta", "lie in [0, 0.5]", self.eta)
        if not self.v_high > self.v_low:
            raise ParamError("v_high", "exceed v_low", self.v_high)

    @property
    def delta(self) -> float:
        return self.v_high - self.v_low

    @property
    def mid(self) -> float:
        return (self.v_high + self.v_low) / 2

    def with_eta(self, eta: float) -> ModelParams:
        return replace(self, eta=eta)


@dataclass(frozen=True)
class QuoteSet:
    ask: float
    bid: float
    mid: float
    spread: float


@dataclass(frozen=True)
class WelfareBreakdown:
    """Expected per-trade P&L of each agent class.

    ``pi_informed`` and ``pi_noise`` are conditional on the arriving
    trader's class, so they are reported even when that class has zero
    weight (``mu`` of 0 or 1). ``pi_maker`` is unconditional.
    """

    pi_informed: float
    pi_noise: float
    pi_maker: float
    subsidy: float
    break_even_fee: float

    def zero_sum_residual(self, mu: float) -> float:
        return mu * self.pi_informed + (1 - mu) * self.pi_noise + self.pi_maker


@dataclass(frozen=True)
class KyleParams:
    """Standard deviations for the Gaussian Kyle comparison value."""

    sigma_v: float
    sigma_u: float
    sigma_eps: float

    def __post_init__(self):
        for name in ("sigma_v", "sigma_u", "sigma_eps"):
            x = getattr(self, name)
            _check_finite(name, x)
            if x < 0:
                raise ParamError(name, "be >= 0", x)


def signal_strength(params: ModelParams) -> float:
    """Informativeness ``mu * (1 - 2*eta)`` of the observed direction."""
    return params.mu * (1 - 2 * params.eta)


def likelihood_buy(params: ModelParams, value: Value) -> float:
    """P(observed buy | value)."""
    s = signal_strength(params)
    if value == "high":
        return (1 + s) / 2
    if value == "low":
        return (1 - s) / 2
    raise ValueError(f"value must be 'high' or 'low', got {value!r}")


def posterior_high(params: ModelParams, observed: Direction) -> float:
    """P(value = high | observed direction) under the 1/2 prior."""
    s = signal_strength(params)
    if observed == "buy":
        return (1 + s) / 2
    if observed == "sell":
        return (1 - s) / 2
    raise ValueError(f"observed must be 'buy' or 'sell', got {observed!r}")


def quotes(params: ModelParams) -> QuoteSet:
    half = signal_strength(params) * params.delta / 2
    mid = params.mid
    return QuoteSet(ask=mid + half, bid=mid - half, mid=mid, spread=2 * half)


def competitive_ask(params: ModelParams) -> float:
    """Ask of a maker who could see the unflipped direction; ignores eta."""
    return params.mid + params.mu * params.delta / 2


def welfare(params: ModelParams) -> WelfareBreakdown:
    s = signal_strength(params)
    d = params.delta
    subsidy = params.mu * params.eta * d
    return WelfareBreakdown(
        pi_informed=(1 - s) * d / 2,
        pi_noise=-s * d / 2,
        pi_maker=-subsidy,
        subsidy=subsidy,
        break_even_fee=subsidy,
    )


def break_even_fee(params: ModelParams) -> float:
    """Smallest flat per-trade fee that returns the maker to zero expected profit."""
    return params.mu * params.eta * params.delta


def net_of_fees(params: ModelParams) -> tuple[float, float]:
    """(informed, noise) expected P&L after paying the break-even fee.

    Both equal the eta = 0 gross values, whatever ``eta`` is. Trader
    arrivals are held at their no-fee rates.
    """
    d = params.delta
    return (1 - params.mu) * d / 2, -params.mu * d / 2


def gross_privacy_gain(params: ModelParams, agent: Agent) -> float:
    """Gain of one trader class over the eta = 0 benchmark, before fees."""
    now, base = welfare(params), welfare(params.with_eta(0.0))
    if agent == "informed":
        return now.pi_informed - base.pi_informed
    if agent == "noise":
        return now.pi_noise - base.pi_noise
    raise ValueError(f"agent must be 'informed' or 'noise', got {agent!r}")


def spread_slope_eta(params: ModelParams) -> float:
    """d(spread)/d(eta)."""
    return -2 * params.mu * params.delta


def noise_pnl_slope_eta(params: ModelParams) -> float:
    """d(pi_noise)/d(eta); positive whenever mu > 0."""
    return params.mu * params.delta


def informed_pnl_slope_eta(params: ModelParams) -> float:
    return params.mu * params.delta


def dp_flip_probability(epsilon: float) -> float:
    """Flip probability of binary randomized response at privacy budget ``epsilon``."""
    _check_finite("epsilon", epsilon)
    if epsilon < 0:
        raise ParamError("epsilon", "be >= 0", epsilon)
    # 1/(1+e^eps) written to stay finite for large eps
    return math.exp(-epsilon) / (1 + math.exp(-epsilon))


def kyle_subsidy(params: KyleParams) -> float:
    """Maker loss per period in the Gaussian Kyle market with noisy order-flow observation."""
    denom_sq = params.sigma_u**2 + params.sigma_eps**2
    if denom_sq == 0:
        raise ParamError("sigma_u", "be > 0 when sigma_eps is 0", params.sigma_u)
    return params.sigma_v * params.sigma_eps**2 / (2 * math.sqrt(denom_sq))
