"""Tail-risk measures over bill vectors, behind a small plug-in registry.

A measure maps a vector of per-building cumulative bills to one scalar. The
built-ins are upper-tail CVaR ("cvar:0.95") and "none"; alternatives register
through :func:`register_measure` without touching the environment code.
"""
from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

__all__ = ["cvar", "delta_risk", "parse_measure", "register_measure", "measure_alpha"]

Measure = Callable[[np.ndarray], float]


def cvar(values, alpha: float) -> float:
    """Mean of the k largest entries, k = ceil((1 - alpha) * n).

    Bills are losses, so the relevant tail is the upper one. The discrete
    estimator takes whole observations (no fractional interpolation), which
    keeps it deterministic and insensitive to how ties are ordered.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("cvar requires a non-empty vector")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    # the 1e-9 slack keeps ceil from overshooting when (1-alpha)*n lands on
    # an integer up to float rounding, e.g. 0.05 * 20
    k = max(1, math.ceil((1.0 - alpha) * v.size - 1e-9))
    tail = np.partition(v, v.size - k)[v.size - k:]
    return float(tail.mean())


def delta_risk(prev_risk: float, bills, measure: Measure) -> tuple[float, float]:
    """Incremental risk: measure the cumulative bills, return (delta, new level).

    Summed across an episode the deltas telescope to the measure of the final
    bills, so the per-step signal carries no double counting.
    """
    new_risk = float(measure(bills))
    return new_risk - prev_risk, new_risk


def _make_cvar(arg: Optional[str]) -> Measure:
    if arg is None:
        raise ValueError("cvar requires a level, e.g. 'cvar:0.95'")
    try:
        alpha = float(arg)
    except ValueError:
        raise ValueError(f"cvar level must be a number, got {arg!r}") from None
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"cvar level must be in (0, 1), got {alpha!r}")

    def measure(values) -> float:
        return cvar(values, alpha)

    measure.alpha = alpha  # type: ignore[attr-defined]
    return measure


def _make_none(arg: Optional[str]) -> None:
    if arg is not None:
        raise ValueError("'none' takes no argument")
    return None


_REGISTRY: dict[str, Callable[[Optional[str]], Optional[Measure]]] = {
    "cvar": _make_cvar,
    "none": _make_none,
}


def register_measure(kind: str, factory: Callable[[Optional[str]], Optional[Measure]]) -> None:
    """Add a measure under ``kind``; selectable as ``"kind"`` or ``"kind:arg"``."""
    _REGISTRY[kind] = factory


def parse_measure(text: str) -> Optional[Measure]:
    """Resolve a measure selector such as ``"cvar:0.95"`` or ``"none"``.

    Returns None when risk is disabled.
    """
    if not isinstance(text, str) or not text:
        raise ValueError(f"risk measure must be a non-empty string, got {text!r}")
    kind, sep, arg = text.partition(":")
    if kind not in _REGISTRY:
        raise ValueError(f"unknown risk measure {kind!r}; known: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[kind](arg if sep else None)


def measure_alpha(text: str, default: float = 0.95) -> float:
    """The CVaR level implied by a selector, or ``default`` for non-CVaR kinds."""
    measure = parse_measure(text)
    return getattr(measure, "alpha", default) if measure is not None else default
