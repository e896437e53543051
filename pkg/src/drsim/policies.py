"""Hand-designed baseline credit policies.

Each policy is a pure mapping from (observation, initial budget) to a credit
level; the random baseline additionally owns a seeded generator. Policies read
only the price-stress and remaining-budget observation entries.
"""
from __future__ import annotations

import numpy as np

from .config import spawn_generator
from .env import OBS_DIM

__all__ = [
    "Policy",
    "NoCreditPolicy",
    "UniformCreditPolicy",
    "RuleBasedPolicy",
    "BudgetAwareRulePolicy",
    "RandomPolicy",
    "parse_policy",
    "POLICY_FORMS",
]

_IDX_PRICE_STRESS = 10
_IDX_BUDGET_REMAINING = 13

POLICY_FORMS = ("nocredit", "uniform", "uniform:<level>", "rule", "budget-rule", "random")


def _check_obs(obs) -> np.ndarray:
    arr = np.asarray(obs, dtype=float)
    if arr.shape != (OBS_DIM,):
        raise ValueError(f"malformed observation: expected shape ({OBS_DIM},), got {arr.shape}")
    return arr


class Policy:
    """Base: act() maps an observation to a credit; seed() re-arms any RNG."""

    name = "policy"

    def act(self, obs, initial_budget: float) -> float:
        raise NotImplementedError

    def seed(self, seed: int) -> None:
        """Stateless policies ignore seeding."""


class NoCreditPolicy(Policy):
    name = "nocredit"

    def act(self, obs, initial_budget: float) -> float:
        _check_obs(obs)
        return 0.0


class UniformCreditPolicy(Policy):
    def __init__(self, credit: float = 0.05):
        if credit < 0:
            raise ValueError(f"uniform credit must be >= 0, got {credit!r}")
        self.credit = float(credit)
        self.name = f"uniform:{self.credit}"

    def act(self, obs, initial_budget: float) -> float:
        _check_obs(obs)
        return self.credit


class RuleBasedPolicy(Policy):
    """Full credit whenever price stress crosses 0.5."""

    name = "rule"

    def __init__(self, high_credit: float = 0.10, stress_threshold: float = 0.5):
        self.high_credit = high_credit
        self.stress_threshold = stress_threshold

    def act(self, obs, initial_budget: float) -> float:
        arr = _check_obs(obs)
        return self.high_credit if arr[_IDX_PRICE_STRESS] > self.stress_threshold else 0.0


class BudgetAwareRulePolicy(Policy):
    """Like the rule policy, but scales the credit by the budget fraction left."""

    name = "budget-rule"

    def __init__(self, high_credit: float = 0.10, stress_threshold: float = 0.5, min_fraction: float = 0.1):
        self.high_credit = high_credit
        self.stress_threshold = stress_threshold
        self.min_fraction = min_fraction

    def act(self, obs, initial_budget: float) -> float:
        arr = _check_obs(obs)
        if initial_budget <= 0:
            raise ValueError(f"initial_budget must be > 0, got {initial_budget!r}")
        beta = arr[_IDX_BUDGET_REMAINING] / initial_budget
        if arr[_IDX_PRICE_STRESS] > self.stress_threshold and beta > self.min_fraction:
            return self.high_credit * beta
        return 0.0


class RandomPolicy(Policy):
    """Uniform random credit on [0, credit_max], from its own named stream."""

    name = "random"

    def __init__(self, credit_max: float = 0.10, seed: int = 0):
        self.credit_max = credit_max
        self.seed(seed)

    def seed(self, seed: int) -> None:
        self._rng = spawn_generator(int(seed), 4)

    def act(self, obs, initial_budget: float) -> float:
        _check_obs(obs)
        return float(self._rng.uniform(0.0, self.credit_max))


def parse_policy(text: str, credit_max: float = 0.10) -> Policy:
    """Resolve a policy selector string.

    Forms: ``nocredit``, ``uniform`` (0.05), ``uniform:<level>``, ``rule``,
    ``budget-rule``, ``random``.
    """
    if not isinstance(text, str) or not text:
        raise ValueError(f"policy must be a non-empty string, got {text!r}")
    kind, sep, arg = text.partition(":")
    if kind == "nocredit":
        policy: Policy = NoCreditPolicy()
    elif kind == "uniform":
        level = 0.05
        if sep:
            try:
                level = float(arg)
            except ValueError:
                raise ValueError(f"uniform credit level must be a number, got {arg!r}") from None
        if not 0.0 <= level <= credit_max:
            raise ValueError(f"uniform credit level must be in [0, {credit_max}], got {level!r}")
        policy = UniformCreditPolicy(level)
        sep = ""
    elif kind == "rule":
        policy = RuleBasedPolicy()
    elif kind == "budget-rule":
        policy = BudgetAwareRulePolicy()
    elif kind == "random":
        policy = RandomPolicy(credit_max)
    else:
        raise ValueError(f"unknown policy {text!r}; expected one of: {', '.join(POLICY_FORMS)}")
    if sep:
        raise ValueError(f"policy {kind!r} takes no argument, got {text!r}")
    return policy
