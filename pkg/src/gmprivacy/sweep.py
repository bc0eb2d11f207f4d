"""Parameter grids over (mu, eta) or (mu, epsilon)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .model import ModelParams, ParamError, dp_flip_probability, quotes, welfare

SWEEP_COLUMNS = ("mu", "eta", "epsilon", "spread", "subsidy", "fee_floor",
                 "pi_informed", "pi_noise", "pi_maker")
_MONEY = ("spread", "subsidy", "fee_floor", "pi_informed", "pi_noise", "pi_maker")


class GridError(ValueError):
    def __init__(self, message: str, field: str = "grid"):
        self.field = field
        super().__init__(message)


@dataclass(frozen=True)
class SweepSpec:
    mu_values: Sequence[float]
    eta_values: Sequence[float] = ()
    epsilon_values: Optional[Sequence[float]] = None
    v_low: float = 0.0
    v_high: float = 1.0
    normalize_by_delta: bool = False

    def __post_init__(self):
        if self.epsilon_values is not None and len(self.eta_values):
            raise GridError("eta and epsilon grids are mutually exclusive", "epsilon_values")
        channel = self.eta_values if self.epsilon_values is None else self.epsilon_values
        if not len(self.mu_values) or not len(channel):
            raise GridError("empty grid")


def sweep_rows(spec: SweepSpec) -> list[dict]:
    """One row per grid point, mu outer and eta (or epsilon) inner.

    Rows driven by epsilon carry it in the ``epsilon`` column; otherwise
    that column is None. Parameter errors are re-raised with the row index.
    """
    by_eps = spec.epsilon_values is not None
    channel = list(spec.epsilon_values) if by_eps else list(spec.eta_values)
    rows = []
    for mu in spec.mu_values:
        for c in channel:
            idx = len(rows)
            try:
                eta = dp_flip_probability(c) if by_eps else c
                p = ModelParams(mu=mu, eta=eta, v_low=spec.v_low, v_high=spec.v_high)
            except ParamError as e:
                raise ParamError(e.field, f"{e.bound} (sweep row {idx})", e.value) from None
            q, w = quotes(p), welfare(p)
            row = {
                "mu": mu, "eta": eta, "epsilon": c if by_eps else None,
                "spread": q.spread, "subsidy": w.subsidy, "fee_floor": w.break_even_fee,
                "pi_informed": w.pi_informed, "pi_noise": w.pi_noise, "pi_maker": w.pi_maker,
            }
            if spec.normalize_by_delta:
                for k in _MONEY:
                    row[k] = row[k] / p.delta
            rows.append(row)
    return rows
