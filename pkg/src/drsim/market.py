"""Hourly wholesale price process.

Price = TOU tier + heteroscedastic AR(1) residual + additive spike component,
less an elasticity discount from recent aggregate reductions, clamped to the
floor/cap band. Spikes follow a two-state Markov regime whose entry rate rises
during peak hours and temperature extremes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import PriceParams

__all__ = [
    "MarketState",
    "tou_base",
    "spike_entry_probability",
    "advance_market",
    "update_reduction_ewma",
    "price_forecast",
]

# temperature band whose exceedance boosts storm entry, degrees C
EXTREME_HI = 35.0
EXTREME_LO = 0.0

FORECAST_HORIZON = 4


@dataclass
class MarketState:
    xi: float = 0.0              # AR(1) residual, $/kWh
    storm: bool = False
    spike: float = 0.0           # additive spike component, 0 outside storms
    reduction_ewma: float = 0.0  # recent aggregate reductions, kWh
    last_price: float = 0.0


def tou_base(hour: int, params: PriceParams) -> float:
    """Tier constant for the hour: peak, off-peak, or shoulder."""
    if not 0 <= hour <= 23:
        raise ValueError(f"hour must be in [0, 23], got {hour!r}")
    if hour in params.peak_hours:
        return params.tou_peak
    if hour in params.offpeak_hours:
        return params.tou_offpeak
    return params.tou_shoulder


def spike_entry_probability(hour: int, temp_c: float, params: PriceParams) -> float:
    """Per-hour storm entry probability: base rate, peak doubling, thermal boost."""
    mult = 2.0 if hour in params.peak_hours else 1.0
    boost = 1.0 + params.temp_spike_boost if (temp_c > EXTREME_HI or temp_c < EXTREME_LO) else 1.0
    return min(1.0, params.spike_entry_base * mult * boost)


def advance_market(
    state: MarketState, hour: int, temp_c: float, params: PriceParams, rng: np.random.Generator
) -> float:
    """Advance one hour in place and return the clamped price.

    Draw order is fixed for determinism: AR(1) innovation, regime uniform,
    then the spike magnitude only on storm entry. The magnitude holds for the
    whole storm; redrawing it hourly would erase the hour-to-hour persistence
    that makes storms storms.
    """
    sigma = params.sigma_eps * params.het_multipliers[hour]
    state.xi = params.rho * state.xi + sigma * rng.standard_normal()
    u = rng.random()
    if state.storm:
        if u < params.spike_exit_prob:
            state.storm = False
            state.spike = 0.0
    else:
        if u < spike_entry_probability(hour, temp_c, params):
            state.storm = True
            state.spike = float(
                math.exp(params.spike_lognormal_mu + params.spike_lognormal_sigma * rng.standard_normal())
            )
    raw = tou_base(hour, params) + state.xi + state.spike
    raw -= params.elasticity_lambda * state.reduction_ewma  # EWMA from before this step's update
    price = min(params.price_cap, max(params.price_floor, raw))
    state.last_price = price
    return price


def update_reduction_ewma(ewma: float, reduction_total_kwh: float, alpha: float) -> float:
    """Exponentially weighted memory of aggregate reductions."""
    if ewma < 0 or reduction_total_kwh < 0:
        raise ValueError("reduction EWMA inputs must be >= 0")
    return alpha * ewma + (1.0 - alpha) * reduction_total_kwh


def price_forecast(state: MarketState, hour: int, params: PriceParams) -> np.ndarray:
    """Four-hour-ahead point forecast: TOU plus the decayed AR(1) residual.

    Spikes and the elasticity discount are unforecastable by construction and
    excluded.
    """
    out = np.empty(FORECAST_HORIZON)
    for k in range(1, FORECAST_HORIZON + 1):
        v = tou_base((hour + k) % 24, params) + (params.rho ** k) * state.xi
        out[k - 1] = min(params.price_cap, max(params.price_floor, v))
    return out
