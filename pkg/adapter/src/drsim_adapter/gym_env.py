"""Optional gymnasium-native view of the adapter.

Import only works when gymnasium is installed (the ``gym`` extra); the core
adapter stays dependency-free. Observations pass through as float64 so the
JSON boundary stays bit-exact; action arrays arrive as the usual float32 Box.
"""
from __future__ import annotations

from collections.abc import Sequence

import gymnasium
import numpy as np

from .adapter import DemandResponseAdapter

__all__ = ["DemandResponseGymEnv"]


class DemandResponseGymEnv(gymnasium.Env):
    """gymnasium.Env over a child env-server process."""

    metadata = {"render_modes": []}

    def __init__(
        self,
        binary: str | Sequence[str] = "drsim",
        config_path: str | None = None,
        seed: int | None = None,
        overrides: Sequence[str] = (),
    ):
        self._adapter = DemandResponseAdapter(binary, config_path, seed, overrides)
        inner_obs = self._adapter.observation_space
        self.observation_space = gymnasium.spaces.Box(
            low=inner_obs.low, high=inner_obs.high, shape=inner_obs.shape, dtype=np.float64
        )
        self.action_space = gymnasium.spaces.Box(
            low=np.float32(self._adapter.action_space.low[0]),
            high=np.float32(self._adapter.action_space.high[0]),
            shape=(1,),
            dtype=np.float32,
        )

    def reset(self, *, seed: int | None = None, options: dict | None = None):
        super().reset(seed=seed)
        return self._adapter.reset(seed=seed, options=options)

    def step(self, action):
        return self._adapter.step(action)

    def close(self) -> None:
        self._adapter.close()
