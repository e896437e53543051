"""Daily credit budget: seasonal stochastic draw, spend cap, rollover."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import BudgetParams

__all__ = ["BudgetLedger", "seasonal_factor", "draw_daily_budget", "cap_credit", "charge"]

# floor on the reference demand in the pre-cap ratio, kWh
_REF_DEMAND_EPS = 1e-6


@dataclass
class BudgetLedger:
    """One day's budget accounting; replaced wholesale at each day boundary."""

    today_budget: float
    remaining: float
    unspent_carry: float
    day_of_year: int


def seasonal_factor(day_of_year: int, params: BudgetParams) -> float:
    """Cosine-squared seasonal shape: winter/summer peaks, spring/fall troughs.

    The half-year period of cos^2 puts peaks near both solstices; with the
    default base 0.6 and amplitude 0.8 the year-round mean is 1.0.
    """
    c = math.cos(2.0 * math.pi * day_of_year / 365.25)
    return params.seasonal_base + params.seasonal_amp * c * c


def draw_daily_budget(day_of_year: int, unspent_prev: float, rng: np.random.Generator, params: BudgetParams) -> float:
    """Draw the day's budget and add the rollover from yesterday's leftovers.

    Exactly one normal draw per call. A negative seasonal draw clamps to zero
    before the carry is added, so the carry is never eaten by bad luck.
    """
    if unspent_prev < 0:
        raise ValueError(f"unspent_prev must be >= 0, got {unspent_prev!r}")
    draw = params.mu + params.sigma * rng.standard_normal()
    return max(0.0, seasonal_factor(day_of_year, params) * draw) + params.rollover * unspent_prev


def cap_credit(credit: float, remaining: float, reference_demand: float) -> float:
    """Pre-cap the offered credit so a payout at the reference demand fits.

    The reference is the previous step's aggregate demand, so this is a
    first-line guard; the exact rescale at payout time closes the gap when
    demand surges within the hour.
    """
    if credit < 0 or remaining < 0 or reference_demand < 0:
        raise ValueError("cap_credit arguments must be >= 0")
    return min(credit, remaining / max(_REF_DEMAND_EPS, reference_demand))


def charge(ledger: BudgetLedger, payout: float) -> None:
    """Deduct a payout. Callers must have rescaled so payout <= remaining."""
    if payout < 0:
        raise ValueError(f"payout must be >= 0, got {payout!r}")
    if payout > ledger.remaining:
        raise ValueError(
            f"payout {payout!r} exceeds remaining budget {ledger.remaining!r}; rescale the credit first"
        )
    ledger.remaining -= payout
