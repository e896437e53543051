"""Optional: a short PPO run should beat the best hand-written baseline.

Skipped when stable-baselines3 (and so gymnasium) is not installed. This is a
directional check on learning signal, not a benchmark: the training budget is
deliberately small.
"""
import json
import subprocess

import pytest

from _server import SERVER_CMD

sb3 = pytest.importorskip("stable_baselines3")

SEED = 100
EVAL_EPISODES = 100


def baseline_reward(policy: str) -> float:
    out = subprocess.run(
        SERVER_CMD
        + ["run", "--policy", policy, "--seed", str(SEED), "--episodes", str(EVAL_EPISODES)],
        check=True,
        capture_output=True,
        text=True,
        timeout=600,
    )
    return json.loads(out.stdout)["mean_episode_reward"]


@pytest.mark.slow
def test_ppo_beats_best_baseline():
    from drsim_adapter.gym_env import DemandResponseGymEnv

    best = max(baseline_reward(p) for p in ("nocredit", "uniform", "rule", "budget-rule"))

    env = DemandResponseGymEnv(binary=SERVER_CMD, seed=SEED)
    try:
        model = sb3.PPO("MlpPolicy", env, seed=SEED, verbose=0)
        model.learn(total_timesteps=200_000)

        total = 0.0
        for ep in range(EVAL_EPISODES):
            obs, _ = env.reset(seed=SEED + ep)
            terminated = False
            while not terminated:
                action, _ = model.predict(obs, deterministic=True)
                obs, reward, terminated, truncated, _ = env.step(action)
                total += reward
        mean_reward = total / EVAL_EPISODES
    finally:
        env.close()

    assert mean_reward > best
