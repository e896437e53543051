"""Grid stress indicators: demand and price sigmoids plus a thermal ramp."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .config import StressParams

__all__ = ["StressReadout", "stress_indicators", "sigmoid"]


def sigmoid(x: float) -> float:
    """Standard logistic, numerically stable for large |x|."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@dataclass(frozen=True)
class StressReadout:
    demand_stress: float
    price_stress: float
    thermal_stress: float
    overall: float


def stress_indicators(demand_kwh: float, price: float, temp_c: float, params: StressParams) -> StressReadout:
    """Normalize grid conditions into three indicators and their weighted sum.

    Demand and price indicators are logistic in the distance from their
    thresholds. The thermal indicator ramps linearly past the hot and cold
    limits; it is deliberately unclamped, so extreme temperatures can push it
    (and the overall value) above 1.
    """
    d = sigmoid(params.demand_slope * (demand_kwh - params.demand_threshold))
    p = sigmoid(params.price_slope * (price - params.price_threshold))
    t = max(0.0, (temp_c - params.thermal_hi) / params.thermal_ramp) + max(
        0.0, (params.thermal_lo - temp_c) / params.thermal_ramp
    )
    overall = params.w_demand * d + params.w_price * p + params.w_thermal * t
    return StressReadout(d, p, t, overall)
