"""Glosten-Milgrom spreads and the privacy subsidy under a binary flip channel."""

from .model import (
    KyleParams,
    ModelParams,
    ParamError,
    QuoteSet,
    WelfareBreakdown,
    break_even_fee,
    competitive_ask,
    dp_flip_probability,
    gross_privacy_gain,
    informed_pnl_slope_eta,
    kyle_subsidy,
    likelihood_buy,
    net_of_fees,
    noise_pnl_slope_eta,
    posterior_high,
    quotes,
    signal_strength,
    spread_slope_eta,
    welfare,
)
from .montecarlo import SimConfig, SimResult, convergence_report, simulate
from .oracle import (
    OutcomeAtom,
    OutcomeTree,
    enumerate_outcomes,
    exact_posterior,
    exact_welfare,
    coarse_signal_loss_check,
)

__version__ = "0.1.0"
