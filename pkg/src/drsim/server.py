"""Line-delimited JSON protocol for driving the environment over stdio.

One request object per line, one response per line, flushed immediately.
Commands: reset, step, spec, close. Malformed requests produce an error
object and the loop keeps serving; EOF is treated as close.
"""
from __future__ import annotations

import json
import sys

from .config import SimConfig
from .env import OBS_DIM, DemandResponseEnv, observation_bounds

__all__ = ["serve"]


def _spec_response(config: SimConfig) -> dict:
    low, high = observation_bounds(config)
    return {
        "action": {"low": 0.0, "high": config.credit_max},
        "observation": {"length": OBS_DIM, "low": low, "high": high},
        "episode_steps": config.episode_steps,
    }


def serve(config: SimConfig, stdin=None, stdout=None) -> int:
    """Serve one environment until close or EOF. Returns the exit code."""
    fin = sys.stdin if stdin is None else stdin
    fout = sys.stdout if stdout is None else stdout

    def send(payload: dict) -> None:
        fout.write(json.dumps(payload) + "\n")
        fout.flush()

    env = DemandResponseEnv(config)
    in_episode = False

    for line in fin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError as exc:
            send({"error": f"invalid JSON: {exc}"})
            continue
        if not isinstance(req, dict) or "cmd" not in req:
            send({"error": "request must be a JSON object with a 'cmd' field"})
            continue
        cmd = req["cmd"]

        if cmd == "close":
            send({"ok": True})
            return 0

        if cmd == "spec":
            send(_spec_response(config))
            continue

        if cmd == "reset":
            seed = req.get("seed")
            if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
                send({"error": f"seed must be an integer or null, got {seed!r}"})
                continue
            try:
                obs, info = env.reset(seed=seed)
            except Exception as exc:  # surface the failure, keep serving
                send({"error": f"reset failed: {exc}"})
                continue
            in_episode = True
            send({"obs": obs.tolist(), "info": info})
            continue

        if cmd == "step":
            if not in_episode:
                send({"error": "reset required before step"})
                continue
            if "action" not in req:
                send({"error": "step requires an 'action' field"})
                continue
            action = req["action"]
            if isinstance(action, bool) or not isinstance(action, (int, float)):
                send({"error": f"action must be a number, got {action!r}"})
                continue
            try:
                obs, reward, terminated, truncated, info, _ = env.step(action)
            except Exception as exc:
                send({"error": f"step failed: {exc}"})
                continue
            if terminated:
                in_episode = False
            send(
                {
                    "obs": obs.tolist(),
                    "reward": reward,
                    "terminated": terminated,
                    "truncated": truncated,
                    "info": info,
                }
            )
            continue

        send({"error": f"unknown cmd {cmd!r}; expected reset, step, spec, or close"})

    return 0
