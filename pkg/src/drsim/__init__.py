"""Deterministic demand-response credit market simulator.

A seedable hourly MDP over a portfolio of buildings: regime-switching
wholesale prices, heterogeneous customers with fatigue, a hard daily credit
budget, and a multi-objective risk-aware reward. Ships as a library, a CLI
experiment harness, and a stdio environment server.
"""
from .config import (
    ConfigError,
    SimConfig,
    dumps_config,
    load_config,
    loads_config,
    preset,
    rng_streams,
)
from .env import OBS_DIM, DemandResponseEnv, StepRecord
from .harness import run_episodes, sweep_credit, validate_market
from .policies import parse_policy
from .risk import cvar

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "SimConfig",
    "load_config",
    "loads_config",
    "dumps_config",
    "preset",
    "rng_streams",
    "OBS_DIM",
    "DemandResponseEnv",
    "StepRecord",
    "run_episodes",
    "validate_market",
    "sweep_credit",
    "parse_policy",
    "cvar",
    "__version__",
]
