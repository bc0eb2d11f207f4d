"""Brute-force enumeration of the single-round outcome tree.

Every quantity here is obtained by weighted summation over the 16 leaves
(value x trader x true direction x observed direction). Nothing from
:mod:`gmprivacy.model` is used apart from ``ModelParams`` validation, so the
results can stand as an independent check on the closed forms.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from typing import Literal

from .model import Direction, ModelParams, WelfareBreakdown

QuoteRule = Literal["committed_bayesian", "true_direction"]

VALUES = ("high", "low")
TRADERS = ("informed", "noise")
DIRECTIONS = ("buy", "sell")

ATOM_COLUMNS = ("value", "trader", "true_dir", "obs_dir", "probability", "trader_pnl", "maker_pnl")


@dataclass(frozen=True)
class OutcomeAtom:
    value: str
    trader: str
    true_direction: str
    observed_direction: str
    probability: float
    trader_pnl: float
    maker_pnl: float
    # P(value, true_direction, observed_direction | trader); lets class-conditional
    # expectations be taken even when the class itself has zero weight.
    class_probability: float


@dataclass(frozen=True)
class OutcomeTree:
    atoms: tuple[OutcomeAtom, ...]
    params: ModelParams
    quote_rule: QuoteRule
    ask: float
    bid: float

    @property
    def spread(self) -> float:
        return self.ask - self.bid

    def total_probability(self) -> float:
        return sum(a.probability for a in self.atoms)

    def marginal(self, observed: Direction) -> float:
        return sum(a.probability for a in self.atoms if a.observed_direction == observed)

    def positive_atoms(self) -> list[OutcomeAtom]:
        return [a for a in self.atoms if a.probability > 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ATOM_COLUMNS)
        for a in self.atoms:
            # + 0.0 turns -0.0 into 0.0
            w.writerow([a.value, a.trader, a.true_direction, a.observed_direction,
                        repr(a.probability + 0.0), repr(a.trader_pnl + 0.0), repr(a.maker_pnl + 0.0)])
        return buf.getvalue()


def _branch_weights(params: ModelParams):
    """Yield (value, trader, d, obs, p_trader, p_within_class) in fixed order."""
    for value, trader, d, obs in itertools.product(VALUES, TRADERS, DIRECTIONS, DIRECTIONS):
        p_value = 0.5
        p_trader = params.mu if trader == "informed" else 1 - params.mu
        if trader == "informed":
            best = "buy" if value == "high" else "sell"
            p_dir = 1.0 if d == best else 0.0
        else:
            p_dir = 0.5
        p_obs = 1 - params.eta if obs == d else params.eta
        yield value, trader, d, obs, p_trader, p_value * p_dir * p_obs


def _conditional_mean_value(weights, price, key) -> float:
    """E[v | key(branch)] by summing over branches."""
    num = den = 0.0
    for value, trader, d, obs, p_trader, p_cls in weights:
        if not key(d, obs):
            continue
        p = p_trader * p_cls
        num += p * price[value]
        den += p
    if den == 0:
        raise ZeroDivisionError("conditioning event has zero probability")
    return num / den


def enumerate_outcomes(params: ModelParams, quote_rule: QuoteRule = "committed_bayesian") -> OutcomeTree:
    """Build the full 16-leaf tree, keeping zero-probability leaves.

    Quotes come from the tree itself: ``committed_bayesian`` prices on
    E[v | observed direction]; ``true_direction`` prices on E[v | true
    direction]. Either way the trader fills on its true direction.
    """
    weights = list(_branch_weights(params))
    price = {"high": params.v_high, "low": params.v_low}
    if quote_rule == "committed_bayesian":
        ask = _conditional_mean_value(weights, price, lambda d, obs: obs == "buy")
        bid = _conditional_mean_value(weights, price, lambda d, obs: obs == "sell")
    elif quote_rule == "true_direction":
        ask = _conditional_mean_value(weights, price, lambda d, obs: d == "buy")
        bid = _conditional_mean_value(weights, price, lambda d, obs: d == "sell")
    else:
        raise ValueError(f"unknown quote rule {quote_rule!r}")

    atoms = []
    for value, trader, d, obs, p_trader, p_cls in weights:
        v = price[value]
        pnl = v - ask if d == "buy" else bid - v
        atoms.append(OutcomeAtom(
            value=value, trader=trader, true_direction=d, observed_direction=obs,
            probability=p_trader * p_cls, trader_pnl=pnl, maker_pnl=-pnl,
            class_probability=p_cls,
        ))
    return OutcomeTree(atoms=tuple(atoms), params=params, quote_rule=quote_rule, ask=ask, bid=bid)


def _class_mean(tree: OutcomeTree, trader: str) -> float:
    num = den = 0.0
    for a in tree.atoms:
        if a.trader == trader:
            num += a.class_probability * a.trader_pnl
            den += a.class_probability
    return num / den


def exact_welfare(tree: OutcomeTree) -> WelfareBreakdown:
    pi_m = sum(a.probability * a.maker_pnl for a in tree.atoms)
    return WelfareBreakdown(
        pi_informed=_class_mean(tree, "informed"),
        pi_noise=_class_mean(tree, "noise"),
        pi_maker=pi_m,
        subsidy=-pi_m,
        break_even_fee=-pi_m,
    )


def exact_posterior(tree: OutcomeTree, observed: Direction) -> float:
    """P(value = high | observed direction) by Bayes over the leaves."""
    marginal = tree.marginal(observed)
    if marginal <= 0:
        raise ZeroDivisionError(f"P(observed = {observed}) is zero")
    joint = sum(a.probability for a in tree.atoms
                if a.observed_direction == observed and a.value == "high")
    return joint / marginal


def coarse_signal_loss_check(params: ModelParams) -> float:
    """Enumerated maker P&L plus mu*eta*delta; zero when the subsidy is exactly mu*eta*delta."""
    tree = enumerate_outcomes(params, "committed_bayesian")
    return exact_welfare(tree).pi_maker + params.mu * params.eta * (params.v_high - params.v_low)
