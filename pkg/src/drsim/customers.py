"""Customer response: offer acceptance, reduction sampling, fatigue dynamics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ArchetypeParams, CustomerParams

__all__ = [
    "CustomerState",
    "Response",
    "acceptance_probability",
    "acceptance_probabilities",
    "sample_response",
    "sample_responses",
    "update_fatigue",
]


@dataclass
class CustomerState:
    archetype_index: int
    fatigue: float


@dataclass(frozen=True)
class Response:
    accepted: bool
    delta: float          # fractional reduction of raw baseline demand
    reduction_kwh: float


def acceptance_probabilities(base_accept, kappa, fatigue, credit: float, params: CustomerParams):
    """Vectorized acceptance probability.

    min(1, base * fatigue * 2 * logistic(kappa * (credit - midpoint))): equals
    base * fatigue exactly at the midpoint credit and rises with the credit.
    ``literal_logistic`` flips the sign for the decreasing variant.
    """
    if credit < 0:
        raise ValueError(f"credit must be >= 0, got {credit!r}")
    x = np.asarray(kappa, dtype=float) * params.sensitivity_scale * (credit - params.credit_midpoint)
    if params.literal_logistic:
        x = -x
    logistic = 1.0 / (1.0 + np.exp(-x))
    return np.minimum(1.0, np.asarray(base_accept, dtype=float) * np.asarray(fatigue, dtype=float) * 2.0 * logistic)


def acceptance_probability(archetype: ArchetypeParams, fatigue: float, credit: float, params: CustomerParams) -> float:
    """Scalar acceptance probability for one archetype at one fatigue level."""
    if not params.fatigue_floor - 1e-12 <= fatigue <= 1.0 + 1e-12:
        raise ValueError(f"fatigue must be in [{params.fatigue_floor}, 1], got {fatigue!r}")
    return float(
        acceptance_probabilities(archetype.base_accept, archetype.sensitivity_kappa, fatigue, credit, params)
    )


def sample_responses(
    base_accept: np.ndarray,
    kappa: np.ndarray,
    reduction_mean: np.ndarray,
    fatigue: np.ndarray,
    credit: float,
    d_base: np.ndarray,
    params: CustomerParams,
    accept_rng: np.random.Generator,
    reduce_rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample the whole population's responses to one offer.

    Zero credit is a no-event: nothing is offered and no RNG is consumed.
    Otherwise exactly one uniform is drawn per building (acceptance) and one
    normal per accepting building (reduction fraction), in building order, so
    stream positions depend only on how many offers and acceptances occurred.
    """
    n = d_base.size
    if credit <= 0.0:
        zeros = np.zeros(n)
        return np.zeros(n, dtype=bool), zeros, zeros
    u = accept_rng.random(n)
    accepted = u < acceptance_probabilities(base_accept, kappa, fatigue, credit, params)
    delta = np.zeros(n)
    k = int(accepted.sum())
    if k:
        mu = reduction_mean[accepted]
        z = reduce_rng.standard_normal(k)
        delta[accepted] = np.clip(mu + params.reduction_std_ratio * mu * z, 0.0, params.reduction_cap)
    return accepted, delta, delta * d_base


def sample_response(
    state: CustomerState,
    credit: float,
    d_base: float,
    params: CustomerParams,
    rng: np.random.Generator,
) -> Response:
    """Single-building convenience form of :func:`sample_responses`.

    Draws the acceptance uniform and, if accepted, the reduction normal from
    the one supplied generator.
    """
    if credit <= 0.0:
        return Response(False, 0.0, 0.0)
    arch = params.archetypes[state.archetype_index]
    p = acceptance_probability(arch, state.fatigue, credit, params)
    if rng.random() >= p:
        return Response(False, 0.0, 0.0)
    mu = arch.reduction_mean
    delta = float(np.clip(mu + params.reduction_std_ratio * mu * rng.standard_normal(), 0.0, params.reduction_cap))
    return Response(True, delta, delta * d_base)


def update_fatigue(fatigue, accepted, params: CustomerParams):
    """Activation wears willingness down; idle hours restore it.

    Accepting buildings lose ``fatigue_decay`` down to the floor; everyone
    else recovers by ``fatigue_recovery`` up to 1.
    """
    f = np.asarray(fatigue, dtype=float)
    out = np.where(
        accepted,
        np.maximum(params.fatigue_floor, f - params.fatigue_decay),
        np.minimum(1.0, f + params.fatigue_recovery),
    )
    return float(out) if out.ndim == 0 else out
