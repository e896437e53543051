"""Standard-RL-interface wrapper around the env-server protocol.

One adapter instance owns one child process running ``<binary> env-server``.
Spaces are built from the server's own ``spec`` response, so the declared
bounds can never drift from what the server enforces. All numbers cross the
boundary as JSON doubles, which round-trip float64 exactly.
"""
from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .client import ProtocolClient
from .spaces import Box

__all__ = ["DemandResponseAdapter"]

_UNBOUNDED = float("inf")


def _bound_array(values, sign: float) -> np.ndarray:
    return np.array([sign * _UNBOUNDED if v is None else float(v) for v in values])


class DemandResponseAdapter:
    """reset/step view of a demand-response credit environment child process.

    Parameters
    ----------
    binary:
        The server executable, either a path/name string or a full argv
        prefix (e.g. ``["python", "-m", "drsim"]``).
    config_path:
        Optional TOML config forwarded via ``--config``.
    seed:
        Optional master seed forwarded via ``--seed`` (fixes the default
        used by ``reset(seed=None)``).
    overrides:
        Optional ``key=value`` strings forwarded via ``--set``.
    """

    metadata = {"render_modes": []}

    def __init__(
        self,
        binary: str | Sequence[str] = "drsim",
        config_path: str | None = None,
        seed: int | None = None,
        overrides: Sequence[str] = (),
    ):
        command = [binary] if isinstance(binary, str) else list(binary)
        command.append("env-server")
        if config_path is not None:
            command += ["--config", str(config_path)]
        if seed is not None:
            command += ["--seed", str(int(seed))]
        for pair in overrides:
            command += ["--set", pair]
        self._client = ProtocolClient(command)
        spec = self._client.request({"cmd": "spec"})
        obs_spec = spec["observation"]
        self.observation_space = Box(
            low=_bound_array(obs_spec["low"], -1.0),
            high=_bound_array(obs_spec["high"], +1.0),
            shape=(obs_spec["length"],),
        )
        self.action_space = Box(
            low=float(spec["action"]["low"]),
            high=float(spec["action"]["high"]),
            shape=(1,),
        )
        self.episode_steps = int(spec["episode_steps"])
        self._closed = False

    # ------------------------------------------------------------------
    # core protocol
    # ------------------------------------------------------------------

    def reset(self, seed: int | None = None, options: dict | None = None):
        payload = {"cmd": "reset", "seed": None if seed is None else int(seed)}
        response = self._client.request(payload)
        return np.asarray(response["obs"], dtype=np.float64), response["info"]

    def step(self, action):
        a = self._scalar(action)
        response = self._client.request({"cmd": "step", "action": a})
        return (
            np.asarray(response["obs"], dtype=np.float64),
            float(response["reward"]),
            bool(response["terminated"]),
            bool(response["truncated"]),
            response["info"],
        )

    def close(self) -> None:
        if not self._closed:
            self._client.close()
            self._closed = True

    # ------------------------------------------------------------------
    # conveniences
    # ------------------------------------------------------------------

    @property
    def alive(self) -> bool:
        return self._client.alive

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        return False

    @staticmethod
    def _scalar(action) -> float:
        arr = np.asarray(action, dtype=np.float64)
        if arr.size != 1:
            raise ValueError(f"action must be a scalar or length-1 array, got shape {arr.shape}")
        value = float(arr.reshape(()))
        # non-finite values cannot cross the JSON boundary as valid numbers
        if not math.isfinite(value):
            raise ValueError(f"action must be finite, got {value!r}")
        return value
