"""Baseline demand and outdoor temperature.

Two sources: replay of pre-computed hourly profiles from CSV, or a synthetic
generator with morning/evening occupancy bumps and temperature-coupled HVAC
terms. Both are wrapped by the same persistence-feedback arithmetic.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "DemandDataError",
    "BuildingProfile",
    "WeatherSeries",
    "load_profiles_csv",
    "replicate_profiles",
    "replay_demand",
    "synthetic_base_shape",
    "synthetic_demand",
    "synthetic_temperature",
    "hvac_ramp",
    "TemperatureProcess",
    "update_feedback_multiplier",
    "effective_demand",
]

TEMP_MIN = -40.0
TEMP_MAX = 55.0

# synthetic profile shape: base floor plus morning and evening occupancy bumps
_SHAPE_FLOOR = 0.4
_MORNING = (0.8, 7.5, 1.5)   # height, center hour, width
_EVENING = (1.0, 19.0, 2.0)
# HVAC kicks in above 22 C (cooling) and below 10 C (heating), 10 C full ramp
_HVAC_COOL_START = 22.0
_HVAC_HEAT_START = 10.0
_HVAC_RAMP = 10.0

_hours = np.arange(24, dtype=float)
_BASE_SHAPE = (
    _SHAPE_FLOOR
    + _MORNING[0] * np.exp(-((_hours - _MORNING[1]) ** 2) / (2.0 * _MORNING[2] ** 2))
    + _EVENING[0] * np.exp(-((_hours - _EVENING[1]) ** 2) / (2.0 * _EVENING[2] ** 2))
)


class DemandDataError(ValueError):
    """A demand or weather CSV violates the documented schema."""


@dataclass(frozen=True)
class BuildingProfile:
    """Baseline-demand handle for one building.

    Replay profiles carry a series and a reuse jitter; synthetic profiles
    carry an occupancy scale and an HVAC coefficient.
    """

    building_id: object
    series: np.ndarray | None = None
    jitter: float = 1.0
    scale: float = 1.0
    hvac: float = 0.0


@dataclass(frozen=True)
class WeatherSeries:
    outdoor_temp: np.ndarray


def _read_rows(path, required: tuple[str, ...], label: str):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        for col in required:
            if col not in cols:
                raise DemandDataError(f"{label} CSV missing column '{col}'")
        rows = list(reader)
    if not rows:
        raise DemandDataError(f"{label} CSV has no data rows")
    return rows


def _check_contiguous(timesteps: list[int], label: str) -> None:
    if sorted(timesteps) != list(range(len(timesteps))):
        raise DemandDataError(f"{label}: timesteps must be 0-based and contiguous")


def load_profiles_csv(profile_path, weather_path) -> tuple[list[BuildingProfile], WeatherSeries]:
    """Load per-building hourly loads and the outdoor temperature series.

    One profile per distinct building id, in file order. Loads must be
    non-negative and each building's timesteps 0-based and contiguous;
    temperatures must stay within the physical band.
    """
    rows = _read_rows(profile_path, ("building_id", "timestep", "non_shiftable_load_kwh"), "profile")
    per_building: dict[str, list[tuple[int, float]]] = {}
    order: list[str] = []
    for i, row in enumerate(rows, start=2):
        bid = row["building_id"]
        try:
            ts = int(row["timestep"])
            load = float(row["non_shiftable_load_kwh"])
        except (TypeError, ValueError):
            raise DemandDataError(f"profile CSV row {i}: malformed values {row!r}") from None
        if not math.isfinite(load) or load < 0:
            raise DemandDataError(f"profile CSV row {i}: negative or non-finite load {load!r} for building {bid!r}")
        if bid not in per_building:
            per_building[bid] = []
            order.append(bid)
        per_building[bid].append((ts, load))

    profiles = []
    for bid in order:
        pairs = per_building[bid]
        _check_contiguous([t for t, _ in pairs], f"profile CSV building {bid!r}")
        series = np.empty(len(pairs))
        for ts, load in pairs:
            series[ts] = load
        series.setflags(write=False)
        profiles.append(BuildingProfile(building_id=bid, series=series))

    wrows = _read_rows(weather_path, ("timestep", "outdoor_temp_c"), "weather")
    temps_by_ts = []
    for i, row in enumerate(wrows, start=2):
        try:
            ts = int(row["timestep"])
            temp = float(row["outdoor_temp_c"])
        except (TypeError, ValueError):
            raise DemandDataError(f"weather CSV row {i}: malformed values {row!r}") from None
        if not math.isfinite(temp) or not TEMP_MIN <= temp <= TEMP_MAX:
            raise DemandDataError(f"weather CSV row {i}: temperature {temp!r} outside [{TEMP_MIN}, {TEMP_MAX}]")
        temps_by_ts.append((ts, temp))
    _check_contiguous([t for t, _ in temps_by_ts], "weather CSV")
    temps = np.empty(len(temps_by_ts))
    for ts, temp in temps_by_ts:
        temps[ts] = temp
    temps.setflags(write=False)
    return profiles, WeatherSeries(outdoor_temp=temps)


def replicate_profiles(
    profiles: list[BuildingProfile], n_buildings: int, rng: np.random.Generator
) -> list[BuildingProfile]:
    """Assign source profiles to ``n_buildings`` slots, cycling with jitter.

    The first ``len(profiles)`` slots replay their source exactly (jitter 1);
    reused slots get an independent scale jitter in [0.9, 1.1], one uniform
    draw per reused slot in slot order.
    """
    n_src = len(profiles)
    out = []
    for i in range(n_buildings):
        src = profiles[i % n_src]
        jitter = 1.0 if i < n_src else float(rng.uniform(0.9, 1.1))
        out.append(replace(src, jitter=jitter))
    return out


def replay_demand(profile: BuildingProfile, step: int) -> float:
    """Baseline load at ``step``, wrapping past the end of the series."""
    return float(profile.series[step % profile.series.size]) * profile.jitter


def synthetic_base_shape(hour: int) -> float:
    """Unit-scale occupancy shape for the hour (bimodal, floor 0.4)."""
    return float(_BASE_SHAPE[hour])


def hvac_ramp(temp_c: float) -> float:
    """Linear HVAC demand ramp outside the comfort band."""
    return max(0.0, (temp_c - _HVAC_COOL_START) / _HVAC_RAMP) + max(
        0.0, (_HVAC_HEAT_START - temp_c) / _HVAC_RAMP
    )


def synthetic_demand(scales, hvacs, hour: int, temp_c: float, log_noise) -> np.ndarray:
    """Per-building synthetic baseline loads for one hour.

    ``log_noise`` is the Gaussian exponent of the multiplicative lognormal
    noise (pass 0 to disable).
    """
    base = np.asarray(scales, dtype=float) * _BASE_SHAPE[hour]
    d = base + np.asarray(hvacs, dtype=float) * hvac_ramp(temp_c)
    return d * np.exp(log_noise)


def synthetic_temperature(day_of_year: int, hour: int, noise: float = 0.0) -> float:
    """Seasonal + diurnal temperature curve, clipped to the physical band."""
    t = (
        15.0
        + 12.0 * math.cos(2.0 * math.pi * (day_of_year - 200) / 365.0)
        + 5.0 * math.cos(2.0 * math.pi * (hour - 15) / 24.0)
        + noise
    )
    return min(TEMP_MAX, max(TEMP_MIN, t))


class TemperatureProcess:
    """Outdoor temperature per step index, shared by the env and the harness.

    Synthetic mode draws one noise normal per :meth:`at` call from the given
    generator; replay mode reads the weather series (no draws). :meth:`burn`
    is the noise-free variant used for pre-episode market burn-in, so burn-in
    never consumes weather-stream draws.
    """

    def __init__(
        self,
        day_of_year: int,
        weather: WeatherSeries | None,
        noise_sigma: float,
        rng: np.random.Generator,
    ):
        self._doy0 = day_of_year
        self._weather = weather
        self._sigma = noise_sigma
        self._rng = rng

    def day_of_year(self, step: int) -> int:
        return (self._doy0 + step // 24) % 365

    def burn(self, hour: int) -> float:
        if self._weather is not None:
            temps = self._weather.outdoor_temp
            return float(temps[hour % temps.size])
        return synthetic_temperature(self._doy0, hour)

    def at(self, step: int) -> float:
        if self._weather is not None:
            temps = self._weather.outdoor_temp
            return float(temps[step % temps.size])
        noise = self._sigma * self._rng.standard_normal()
        return synthetic_temperature(self.day_of_year(step), step % 24, noise)


def update_feedback_multiplier(m, delta, gamma: float):
    """One persistence-feedback update: m' = m * gamma + (1 - delta)(1 - gamma).

    Holding delta fixed, iteration converges to 1 - delta; with no reductions
    the multiplier relaxes back toward 1.
    """
    m_arr = np.asarray(m, dtype=float)
    d_arr = np.asarray(delta, dtype=float)
    if np.any(m_arr <= 0) or np.any(m_arr > 1):
        raise ValueError("multiplier must be in (0, 1]")
    if np.any(d_arr < 0) or np.any(d_arr > 1):
        raise ValueError("delta must be in [0, 1]")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma!r}")
    out = m_arr * gamma + (1.0 - d_arr) * (1.0 - gamma)
    return float(out) if out.ndim == 0 else out


def effective_demand(d_base, m, reduction_kwh):
    """Post-event demand: persistence-scaled baseline minus the reduction, floored at 0."""
    out = np.maximum(0.0, np.asarray(d_base, dtype=float) * m - reduction_kwh)
    return float(out) if out.ndim == 0 else out
