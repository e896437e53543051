"""Simulator configuration: dataclasses, validation, TOML I/O, presets, RNG streams.

Every knob of the simulator lives in a frozen :class:`SimConfig`. Instances are
validated on construction, serialize to TOML and back without loss, and derive
all random number generators through named Philox sub-streams so that runs are
reproducible and structurally independent subsystems never share randomness.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Mapping

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

__all__ = [
    "ConfigError",
    "ArchetypeParams",
    "PriceParams",
    "CustomerParams",
    "StressParams",
    "BudgetParams",
    "RewardParams",
    "DemandParams",
    "SimConfig",
    "Streams",
    "rng_streams",
    "spawn_generator",
    "load_config",
    "loads_config",
    "dumps_config",
    "preset",
    "PRESET_NAMES",
    "SEED_ENV_VAR",
]

SEED_ENV_VAR = "DRSIM_SEED"

PEAK_HOURS = frozenset(range(16, 22))
OFFPEAK_HOURS = frozenset({22, 23, 0, 1, 2, 3, 4, 5})
_HET_HIGH_HOURS = frozenset({7, 8, 9, 18, 19, 20})


class ConfigError(ValueError):
    """A configuration value or file violates the documented schema."""


def _default_het_multipliers() -> tuple[float, ...]:
    out = []
    for h in range(24):
        if h in _HET_HIGH_HOURS:
            out.append(1.8)
        elif h in OFFPEAK_HOURS:
            out.append(1.0)
        else:
            out.append(1.4)
    return tuple(out)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


@dataclass(frozen=True)
class ArchetypeParams:
    """One customer archetype: population share and response parameters."""

    name: str
    proportion: float
    base_accept: float
    reduction_mean: float
    sensitivity_kappa: float

    def __post_init__(self) -> None:
        _require(0 < self.proportion <= 1, f"archetype '{self.name}': proportion must be in (0, 1], got {self.proportion!r}")
        _require(0 < self.base_accept < 1, f"archetype '{self.name}': base_accept must be in (0, 1), got {self.base_accept!r}")
        _require(0 < self.reduction_mean < 1, f"archetype '{self.name}': reduction_mean must be in (0, 1), got {self.reduction_mean!r}")
        _require(self.sensitivity_kappa >= 0, f"archetype '{self.name}': sensitivity_kappa must be >= 0, got {self.sensitivity_kappa!r}")


def _default_archetypes() -> tuple[ArchetypeParams, ...]:
    return (
        ArchetypeParams("price_sensitive", 0.30, 0.80, 0.20, 3.0),
        ArchetypeParams("eco_conscious", 0.20, 0.85, 0.18, 1.5),
        ArchetypeParams("neutral", 0.35, 0.65, 0.12, 2.0),
        ArchetypeParams("reluctant", 0.15, 0.40, 0.08, 1.0),
    )


@dataclass(frozen=True)
class PriceParams:
    """Wholesale price process: TOU tiers, AR(1) residual, spike regime, elasticity."""

    tou_offpeak: float = 0.07
    tou_shoulder: float = 0.12
    tou_peak: float = 0.18
    peak_hours: frozenset = PEAK_HOURS
    offpeak_hours: frozenset = OFFPEAK_HOURS
    rho: float = 0.9
    sigma_eps: float = 0.02
    het_multipliers: tuple = field(default_factory=_default_het_multipliers)
    spike_entry_base: float = 0.005
    spike_exit_prob: float = 0.15
    temp_spike_boost: float = 0.03
    spike_lognormal_mu: float = 0.4
    spike_lognormal_sigma: float = 0.8
    price_cap: float = 9.50
    price_floor: float = 0.02
    elasticity_lambda: float = 0.0
    ewma_alpha: float = 0.8

    def __post_init__(self) -> None:
        _require(0 < self.rho < 1, f"price.rho must be in (0, 1), got {self.rho!r}")
        _require(self.sigma_eps > 0, f"price.sigma_eps must be > 0, got {self.sigma_eps!r}")
        _require(0 < self.spike_exit_prob <= 1, f"price.spike_exit_prob must be in (0, 1], got {self.spike_exit_prob!r}")
        _require(0 <= self.spike_entry_base <= 1, f"price.spike_entry_base must be in [0, 1], got {self.spike_entry_base!r}")
        _require(self.price_floor < self.price_cap, f"price.price_floor must be below price_cap, got {self.price_floor!r} >= {self.price_cap!r}")
        _require(len(self.het_multipliers) == 24, f"price.het_multipliers must have 24 entries, got {len(self.het_multipliers)}")
        _require(all(m >= 1 for m in self.het_multipliers), "price.het_multipliers entries must all be >= 1")
        _require(all(0 <= h <= 23 for h in self.peak_hours), "price.peak_hours entries must be hours in [0, 23]")
        _require(all(0 <= h <= 23 for h in self.offpeak_hours), "price.offpeak_hours entries must be hours in [0, 23]")
        _require(not (self.peak_hours & self.offpeak_hours), "price.peak_hours and price.offpeak_hours must be disjoint")
        _require(0 <= self.ewma_alpha <= 1, f"price.ewma_alpha must be in [0, 1], got {self.ewma_alpha!r}")
        _require(self.elasticity_lambda >= 0, f"price.elasticity_lambda must be >= 0, got {self.elasticity_lambda!r}")
        for name in ("tou_offpeak", "tou_shoulder", "tou_peak"):
            _require(getattr(self, name) > 0, f"price.{name} must be > 0")


@dataclass(frozen=True)
class CustomerParams:
    """Acceptance, reduction sampling, and fatigue dynamics for the population."""

    archetypes: tuple = field(default_factory=_default_archetypes)
    credit_midpoint: float = 0.05
    fatigue_decay: float = 0.1
    fatigue_recovery: float = 0.05
    fatigue_floor: float = 0.3
    reduction_std_ratio: float = 0.25
    reduction_cap: float = 0.5
    sensitivity_scale: float = 1.0
    literal_logistic: bool = False

    def __post_init__(self) -> None:
        _require(len(self.archetypes) == 4, f"customer.archetypes must have exactly 4 entries, got {len(self.archetypes)}")
        total = sum(a.proportion for a in self.archetypes)
        _require(abs(total - 1.0) <= 1e-9, f"customer archetype proportions sum to {total!r}, expected 1.0")
        _require(0 < self.fatigue_floor < 1, f"customer.fatigue_floor must be in (0, 1), got {self.fatigue_floor!r}")
        _require(0 < self.reduction_cap <= 1, f"customer.reduction_cap must be in (0, 1], got {self.reduction_cap!r}")
        _require(self.fatigue_decay >= 0, f"customer.fatigue_decay must be >= 0, got {self.fatigue_decay!r}")
        _require(self.fatigue_recovery >= 0, f"customer.fatigue_recovery must be >= 0, got {self.fatigue_recovery!r}")
        _require(self.reduction_std_ratio >= 0, f"customer.reduction_std_ratio must be >= 0, got {self.reduction_std_ratio!r}")
        _require(self.sensitivity_scale > 0, f"customer.sensitivity_scale must be > 0, got {self.sensitivity_scale!r}")
        _require(self.credit_midpoint >= 0, f"customer.credit_midpoint must be >= 0, got {self.credit_midpoint!r}")


@dataclass(frozen=True)
class StressParams:
    """Grid stress indicator thresholds, slopes, and mixing weights."""

    demand_threshold: float = 100.0
    demand_slope: float = 1.0
    price_threshold: float = 0.25
    price_slope: float = 20.0
    thermal_hi: float = 35.0
    thermal_lo: float = 0.0
    thermal_ramp: float = 10.0
    w_demand: float = 0.3
    w_price: float = 0.5
    w_thermal: float = 0.2

    def __post_init__(self) -> None:
        _require(self.thermal_ramp > 0, f"stress.thermal_ramp must be > 0, got {self.thermal_ramp!r}")
        _require(self.thermal_lo < self.thermal_hi, f"stress.thermal_lo must be below thermal_hi, got {self.thermal_lo!r} >= {self.thermal_hi!r}")
        for name in ("w_demand", "w_price", "w_thermal"):
            _require(getattr(self, name) >= 0, f"stress.{name} must be >= 0")
        _require(self.demand_slope > 0, f"stress.demand_slope must be > 0, got {self.demand_slope!r}")
        _require(self.price_slope > 0, f"stress.price_slope must be > 0, got {self.price_slope!r}")


@dataclass(frozen=True)
class BudgetParams:
    """Daily credit budget: stochastic draw, seasonal shape, rollover."""

    mu: float = 100.0
    sigma: float = 20.0
    rollover: float = 0.95
    seasonal_base: float = 0.6
    seasonal_amp: float = 0.8

    def __post_init__(self) -> None:
        _require(self.mu >= 0, f"budget.mu must be >= 0, got {self.mu!r}")
        _require(self.sigma >= 0, f"budget.sigma must be >= 0, got {self.sigma!r}")
        _require(0 <= self.rollover <= 1, f"budget.rollover must be in [0, 1], got {self.rollover!r}")
        _require(self.seasonal_base >= 0, f"budget.seasonal_base must be >= 0, got {self.seasonal_base!r}")
        _require(self.seasonal_amp >= 0, f"budget.seasonal_amp must be >= 0, got {self.seasonal_amp!r}")


@dataclass(frozen=True)
class RewardParams:
    """Reward weights, global scale, and the plug-in risk measure."""

    w_revenue: float = 0.3
    w_cost: float = 0.5
    w_stress: float = 0.2
    w_risk: float = 0.3
    scale: float = 0.01
    risk: str = "cvar:0.95"

    def __post_init__(self) -> None:
        for name in ("w_revenue", "w_cost", "w_stress", "w_risk"):
            _require(getattr(self, name) >= 0, f"reward.{name} must be >= 0")
        _require(self.scale > 0, f"reward.scale must be > 0, got {self.scale!r}")
        # delayed import: risk is a leaf module and must not import config
        from . import risk as _risk

        try:
            _risk.parse_measure(self.risk)
        except ValueError as exc:
            raise ConfigError(f"reward.risk: {exc}") from None


@dataclass(frozen=True)
class DemandParams:
    """Baseline demand source: CSV replay or the synthetic generator."""

    source: str = "synthetic"
    profile_path: str | None = None
    weather_path: str | None = None
    hvac_coeff: float = 4.0
    load_noise_sigma: float = 0.15
    scale_min: float = 0.7
    scale_max: float = 1.3
    temp_noise_sigma: float = 1.0

    def __post_init__(self) -> None:
        _require(self.source in ("synthetic", "csv_replay"), f"demand.source must be 'synthetic' or 'csv_replay', got {self.source!r}")
        if self.source == "csv_replay":
            _require(bool(self.profile_path), "demand.profile_path is required when demand.source = 'csv_replay'")
            _require(bool(self.weather_path), "demand.weather_path is required when demand.source = 'csv_replay'")
        _require(self.hvac_coeff >= 0, f"demand.hvac_coeff must be >= 0, got {self.hvac_coeff!r}")
        _require(self.load_noise_sigma >= 0, f"demand.load_noise_sigma must be >= 0, got {self.load_noise_sigma!r}")
        _require(0 < self.scale_min <= self.scale_max, f"demand.scale_min/scale_max must satisfy 0 < min <= max, got {self.scale_min!r}, {self.scale_max!r}")
        _require(self.temp_noise_sigma >= 0, f"demand.temp_noise_sigma must be >= 0, got {self.temp_noise_sigma!r}")


@dataclass(frozen=True)
class SimConfig:
    """Complete, validated parameterization of one simulator instance."""

    n_buildings: int = 50
    episode_days: int = 1
    steps_per_day: int = 24
    retail_rate: float = 0.15
    credit_max: float = 0.10
    feedback_gamma: float = 0.9
    seed: int = 100
    day_of_year: int | None = None
    demand: DemandParams = field(default_factory=DemandParams)
    price: PriceParams = field(default_factory=PriceParams)
    customer: CustomerParams = field(default_factory=CustomerParams)
    stress: StressParams = field(default_factory=StressParams)
    budget: BudgetParams = field(default_factory=BudgetParams)
    reward: RewardParams = field(default_factory=RewardParams)

    def __post_init__(self) -> None:
        _require(self.n_buildings >= 1, f"n_buildings must be >= 1, got {self.n_buildings!r}")
        _require(self.episode_days >= 1, f"episode_days must be >= 1, got {self.episode_days!r}")
        _require(self.steps_per_day == 24, f"steps_per_day is fixed at 24, got {self.steps_per_day!r}")
        _require(self.retail_rate > 0, f"retail_rate must be > 0, got {self.retail_rate!r}")
        _require(self.credit_max > 0, f"credit_max must be > 0, got {self.credit_max!r}")
        _require(0 <= self.feedback_gamma <= 1, f"feedback_gamma must be in [0, 1], got {self.feedback_gamma!r}")
        if self.day_of_year is not None:
            _require(0 <= self.day_of_year <= 364, f"day_of_year must be in [0, 364], got {self.day_of_year!r}")

    @property
    def episode_steps(self) -> int:
        return self.episode_days * self.steps_per_day


# ---------------------------------------------------------------------------
# RNG streams
# ---------------------------------------------------------------------------

def spawn_generator(seed: int, *spawn_key: int) -> np.random.Generator:
    """Philox generator on the named sub-stream of ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(ss))


_gen = spawn_generator


@dataclass(frozen=True)
class Streams:
    """Named RNG streams derived from one master seed.

    The four top-level streams (market, customer, budget, demand) never share
    state; the flat children are the ones the simulator actually draws from.
    Keeping acceptance uniforms, reduction normals, weather noise, and
    per-building load noise on separate children means changing the building
    count or the credit policy cannot shift the market or weather trajectory.
    """

    market: np.random.Generator
    customer: np.random.Generator
    budget: np.random.Generator
    demand: np.random.Generator
    accept: np.random.Generator      # customer child: one uniform per offer
    reduce: np.random.Generator      # customer child: one normal per acceptance
    archetype: np.random.Generator   # customer child: population assignment
    calendar: np.random.Generator    # demand child: episode day-of-year
    weather: np.random.Generator     # demand child: temperature noise
    loads: np.random.Generator       # demand child: scales, jitter, load noise
    policy: np.random.Generator      # reserved for stochastic policies


def rng_streams(seed: int) -> Streams:
    """Derive all named generators from ``seed`` via Philox spawn keys."""
    return Streams(
        market=_gen(seed, 0),
        customer=_gen(seed, 1),
        budget=_gen(seed, 2),
        demand=_gen(seed, 3),
        accept=_gen(seed, 1, 0),
        reduce=_gen(seed, 1, 1),
        archetype=_gen(seed, 1, 2),
        calendar=_gen(seed, 3, 0),
        weather=_gen(seed, 3, 1),
        loads=_gen(seed, 3, 2),
        policy=_gen(seed, 4),
    )


# ---------------------------------------------------------------------------
# TOML loading
# ---------------------------------------------------------------------------

_SECTION_TYPES = {
    "demand": DemandParams,
    "price": PriceParams,
    "customer": CustomerParams,
    "stress": StressParams,
    "budget": BudgetParams,
    "reward": RewardParams,
}

_TOP_FIELDS = (
    "n_buildings",
    "episode_days",
    "steps_per_day",
    "retail_rate",
    "credit_max",
    "feedback_gamma",
    "seed",
    "day_of_year",
)


def _coerce(name: str, default: Any, value: Any) -> Any:
    """Coerce a TOML value to the field's runtime type, or fail loudly."""
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{name} must be a boolean, got {value!r}")
        return value
    if isinstance(default, frozenset):
        if not isinstance(value, list):
            raise ConfigError(f"{name} must be an array, got {value!r}")
        return frozenset(int(v) for v in value)
    if isinstance(default, tuple):
        if not isinstance(value, list):
            raise ConfigError(f"{name} must be an array, got {value!r}")
        return tuple(float(v) for v in value)
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        return float(value)
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return int(value)
    if isinstance(default, str) or default is None:
        if not isinstance(value, str):
            raise ConfigError(f"{name} must be a string, got {value!r}")
        return value
    raise ConfigError(f"{name}: unsupported value {value!r}")


def _build_section(section: str, cls: type, data: Mapping[str, Any]) -> Any:
    defaults = cls()
    kwargs: dict[str, Any] = {}
    valid = {f.name for f in fields(cls)}
    for key, value in data.items():
        if key not in valid:
            raise ConfigError(f"unknown config key '{section}.{key}'")
        if key == "archetypes":
            kwargs[key] = _build_archetypes(value)
            continue
        kwargs[key] = _coerce(f"{section}.{key}", getattr(defaults, key), value)
    return replace(defaults, **kwargs)


def _build_archetypes(value: Any) -> tuple[ArchetypeParams, ...]:
    if not isinstance(value, list):
        raise ConfigError("customer.archetypes must be an array of tables")
    out = []
    valid = {f.name for f in fields(ArchetypeParams)}
    for i, row in enumerate(value):
        if not isinstance(row, dict):
            raise ConfigError(f"customer.archetypes[{i}] must be a table")
        unknown = set(row) - valid
        if unknown:
            raise ConfigError(f"unknown config key 'customer.archetypes[{i}].{sorted(unknown)[0]}'")
        missing = valid - set(row)
        if missing:
            raise ConfigError(f"customer.archetypes[{i}] missing key '{sorted(missing)[0]}'")
        out.append(
            ArchetypeParams(
                name=str(row["name"]),
                proportion=float(row["proportion"]),
                base_accept=float(row["base_accept"]),
                reduction_mean=float(row["reduction_mean"]),
                sensitivity_kappa=float(row["sensitivity_kappa"]),
            )
        )
    return tuple(out)


def _from_mapping(data: Mapping[str, Any]) -> SimConfig:
    top_kwargs: dict[str, Any] = {}
    ref = SimConfig()
    for key, value in data.items():
        if key in _SECTION_TYPES:
            if not isinstance(value, dict):
                raise ConfigError(f"section [{key}] must be a table")
            top_kwargs[key] = _build_section(key, _SECTION_TYPES[key], value)
        elif key in _TOP_FIELDS:
            # day_of_year defaults to None (drawn per episode) but loads as int
            default = 0 if key == "day_of_year" else getattr(ref, key)
            top_kwargs[key] = _coerce(key, default, value)
        else:
            raise ConfigError(f"unknown config key '{key}'")
    return SimConfig(**top_kwargs)


def _set_dotted(data: dict, key: str, value: Any) -> None:
    parts = key.split(".")
    node = data
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override '{key}' conflicts with a scalar value")
    node[parts[-1]] = value


def load_config(
    path: str | os.PathLike | None = None,
    overrides: Mapping[str, Any] | None = None,
    use_env: bool = True,
) -> SimConfig:
    """Build a validated SimConfig.

    Precedence, lowest to highest: built-in defaults, the TOML file at
    ``path``, the ``DRSIM_SEED`` environment variable, then ``overrides``
    (dotted keys such as ``"price.rho"``).
    """
    if path is None:
        data: dict[str, Any] = {}
    else:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"failed to parse config file {path}: {exc}") from None
    if use_env and os.environ.get(SEED_ENV_VAR):
        raw = os.environ[SEED_ENV_VAR]
        try:
            data["seed"] = int(raw)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
    for key, value in (overrides or {}).items():
        _set_dotted(data, key, value)
    return _from_mapping(data)


def loads_config(text: str) -> SimConfig:
    """Parse a TOML string into a validated SimConfig (no env, no overrides)."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"failed to parse config: {exc}") from None
    return _from_mapping(data)


# ---------------------------------------------------------------------------
# TOML writing (minimal, covers exactly the types used by SimConfig)
# ---------------------------------------------------------------------------

def _fmt_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, frozenset):
        return "[" + ", ".join(str(v) for v in sorted(value)) + "]"
    if isinstance(value, tuple):
        return "[" + ", ".join(_fmt_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {value!r}")


def dumps_config(cfg: SimConfig) -> str:
    """Serialize a SimConfig to TOML; ``loads_config`` round-trips it exactly."""
    lines: list[str] = []
    for name in _TOP_FIELDS:
        value = getattr(cfg, name)
        if value is None:
            continue
        lines.append(f"{name} = {_fmt_value(value)}")
    for section in ("demand", "price", "customer", "stress", "budget", "reward"):
        params = getattr(cfg, section)
        lines.append("")
        lines.append(f"[{section}]")
        for f in fields(params):
            if f.name == "archetypes":
                continue
            value = getattr(params, f.name)
            if value is None:
                continue
            lines.append(f"{f.name} = {_fmt_value(value)}")
        if section == "customer":
            for arch in params.archetypes:
                lines.append("")
                lines.append("[[customer.archetypes]]")
                for af in fields(ArchetypeParams):
                    lines.append(f"{af.name} = {_fmt_value(getattr(arch, af.name))}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

PRESET_NAMES = ("default", "uri_analog", "portfolio500")


def preset(name: str) -> SimConfig:
    """Return one of the named configurations.

    ``default`` is the 50-building baseline; ``uri_analog`` stresses the spike
    regime (entry 0.08, thermal boost 0.15) over a 7-day episode;
    ``portfolio500`` scales to 500 synthetic buildings with the demand stress
    threshold raised in proportion.
    """
    if name == "default":
        return SimConfig()
    if name == "uri_analog":
        base = SimConfig()
        return replace(
            base,
            episode_days=7,
            price=replace(base.price, spike_entry_base=0.08, temp_spike_boost=0.15),
        )
    if name == "portfolio500":
        base = SimConfig()
        return replace(
            base,
            n_buildings=500,
            stress=replace(base.stress, demand_threshold=10000.0),
        )
    raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESET_NAMES)}")
