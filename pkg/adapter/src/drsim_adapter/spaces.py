"""Minimal box spaces, shaped like the common RL space API.

The adapter must describe its observation and action ranges even when no RL
framework is installed, so this module carries a dependency-free Box. When
gymnasium is available the adapter exposes real gymnasium spaces instead (see
``gym_env``); both are built from the same server ``spec`` payload.
"""
from __future__ import annotations

import numpy as np

__all__ = ["Box"]


class Box:
    """An axis-aligned box in R^n with per-dimension open sides as +-inf."""

    def __init__(self, low, high, shape=None, dtype=np.float64):
        self.dtype = np.dtype(dtype)
        if shape is None:
            shape = np.broadcast(np.asarray(low), np.asarray(high)).shape
        self.shape = tuple(shape)
        self.low = np.broadcast_to(np.asarray(low, dtype=self.dtype), self.shape).copy()
        self.high = np.broadcast_to(np.asarray(high, dtype=self.dtype), self.shape).copy()
        if np.any(self.low > self.high):
            raise ValueError("low must be <= high everywhere")
        self._rng = np.random.default_rng()

    def seed(self, seed: int | None = None) -> None:
        self._rng = np.random.default_rng(seed)

    def contains(self, x) -> bool:
        arr = np.asarray(x, dtype=self.dtype)
        if arr.shape != self.shape:
            return False
        # NaN fails both comparisons, so it is never contained
        return bool(np.all(arr >= self.low) and np.all(arr <= self.high))

    def sample(self) -> np.ndarray:
        # bounded dims draw uniformly; unbounded sides fall back to a unit normal offset
        lo = np.where(np.isneginf(self.low), -1.0, self.low)
        hi = np.where(np.isposinf(self.high), lo + 2.0, self.high)
        out = self._rng.uniform(lo, hi)
        return out.astype(self.dtype)

    def __repr__(self) -> str:
        return f"Box(shape={self.shape}, low={self.low.min()!r}, high={self.high.max()!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Box)
            and self.shape == other.shape
            and self.dtype == other.dtype
            and np.array_equal(self.low, other.low)
            and np.array_equal(self.high, other.high)
        )
