"""Oracle equivalence: the adapter view must match the core's own records.

The core CLI writes per-step JSONL; the adapter sees the same episode through
the stdio protocol. Both sides must agree to 1e-12 relative (in practice the
JSON double round-trip is exact). The random action stream is reconstructed
here from the documented seeding scheme (Philox, spawn key 4, uniform on
[0, credit_max]) so the adapter replays exactly what `run --policy random`
played.
"""
import json
import subprocess

import numpy as np
import pytest

from _server import SERVER_CMD, make_adapter

SEED = 100


def random_actions(seed: int, n: int, credit_max: float = 0.10) -> list[float]:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(4,))))
    return [float(rng.uniform(0.0, credit_max)) for _ in range(n)]


@pytest.fixture(scope="module")
def core_trace(tmp_path_factory):
    out = tmp_path_factory.mktemp("core") / "trace.jsonl"
    subprocess.run(
        SERVER_CMD + ["run", "--policy", "random", "--seed", str(SEED), "--episodes", "1", "--out", str(out)],
        check=True,
        capture_output=True,
        timeout=120,
    )
    return [json.loads(line) for line in out.read_text().splitlines()]


def close_enough(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def test_random_rollout_matches_core_jsonl(core_trace):
    records = core_trace
    assert len(records) == 24
    actions = random_actions(SEED, 24)

    with make_adapter() as env:
        obs, _ = env.reset(seed=SEED)
        payout_sum = 0.0
        for t, (action, rec) in enumerate(zip(actions, records)):
            # the pre-decision price the adapter saw is the record's price
            assert close_enough(obs[3], rec["price"]), f"step {t}: price"
            obs, reward, terminated, _, info = env.step(action)
            assert rec["credit_requested"] == action, f"step {t}: action stream diverged"
            assert close_enough(reward, rec["reward"]), f"step {t}: reward"
            assert close_enough(obs[2], rec["aggregate_demand"]), f"step {t}: demand"
            assert close_enough(obs[13], rec["budget_remaining"]), f"step {t}: budget"
            payout_sum += rec["payout"]
            assert terminated == (t == 23)
        assert close_enough(info["total_payout"], payout_sum)


def test_uniform_rollout_bitwise_identical(core_trace):
    # fixed-credit episodes agree exactly, not merely within tolerance
    out = subprocess.run(
        SERVER_CMD + ["run", "--policy", "uniform:0.05", "--seed", str(SEED), "--episodes", "1"],
        check=True,
        capture_output=True,
        text=True,
        timeout=120,
    )
    summary = json.loads(out.stdout)

    with make_adapter() as env:
        env.reset(seed=SEED)
        total = 0.0
        terminated = False
        while not terminated:
            _, reward, terminated, _, info = env.step(0.05)
            total += reward
    assert total == summary["mean_episode_reward"]
    assert info["budget_utilization"] == summary["budget_utilization"]
