"""Framework-free environment conformance checks.

Mirrors the structural checks that RL ecosystem validators run (spaces,
signatures, determinism under seeding, termination bookkeeping) without
requiring one to be installed. Raises ConformanceError on first violation.
"""
from __future__ import annotations

import numpy as np

__all__ = ["ConformanceError", "check_adapter"]


class ConformanceError(AssertionError):
    """The adapter violates the standard environment contract."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConformanceError(message)


def check_adapter(env, seed: int = 0, episodes: int = 2) -> None:
    """Drive ``env`` through full seeded episodes and verify the contract."""
    obs_space = env.observation_space
    act_space = env.action_space
    _require(hasattr(obs_space, "contains") and hasattr(obs_space, "shape"), "observation_space is not a space")
    _require(hasattr(act_space, "sample") and hasattr(act_space, "contains"), "action_space is not a space")

    out = env.reset(seed=seed)
    _require(isinstance(out, tuple) and len(out) == 2, "reset must return (observation, info)")
    obs, info = out
    _require(isinstance(info, dict), f"reset info must be a dict, got {type(info)!r}")
    _require(np.asarray(obs).shape == tuple(obs_space.shape), "reset observation shape mismatch")
    _require(obs_space.contains(np.asarray(obs)), "reset observation outside the declared space")

    obs2, _ = env.reset(seed=seed)
    _require(np.array_equal(np.asarray(obs), np.asarray(obs2)), "same seed must reproduce the reset observation")

    act_space.seed(seed)
    for _ in range(episodes):
        obs, _ = env.reset(seed=seed)
        terminated = truncated = False
        steps = 0
        while not (terminated or truncated):
            action = act_space.sample()
            out = env.step(action)
            _require(len(out) == 5, "step must return (obs, reward, terminated, truncated, info)")
            obs, reward, terminated, truncated, info = out
            _require(obs_space.contains(np.asarray(obs)), f"step {steps}: observation outside the declared space")
            _require(isinstance(float(reward), float), "reward must be a number")
            _require(isinstance(terminated, bool) and isinstance(truncated, bool), "termination flags must be bools")
            _require(isinstance(info, dict), "step info must be a dict")
            steps += 1
            _require(steps <= 100_000, "episode never terminates")
        _require(steps > 0, "episode terminated before any step")
