"""Baseline policy behavior and the policy selector grammar."""
import numpy as np
import pytest

from drsim.policies import (
    POLICY_FORMS,
    BudgetAwareRulePolicy,
    NoCreditPolicy,
    RandomPolicy,
    RuleBasedPolicy,
    UniformCreditPolicy,
    parse_policy,
)


def obs_with(price_stress=0.0, budget_remaining=0.0):
    obs = np.zeros(32)
    obs[10] = price_stress
    obs[13] = budget_remaining
    return obs


class TestFixedPolicies:
    def test_nocredit(self):
        assert NoCreditPolicy().act(obs_with(0.9, 100.0), 100.0) == 0.0

    def test_uniform_default(self):
        p = UniformCreditPolicy()
        assert p.credit == 0.05
        assert p.name == "uniform:0.05"
        assert p.act(obs_with(), 100.0) == 0.05

    def test_uniform_negative_rejected(self):
        with pytest.raises(ValueError, match=">= 0"):
            UniformCreditPolicy(-0.01)


class TestRulePolicies:
    def test_rule_fires_on_high_stress(self):
        p = RuleBasedPolicy()
        assert p.act(obs_with(price_stress=0.6), 100.0) == 0.10

    def test_rule_quiet_below_threshold(self):
        p = RuleBasedPolicy()
        assert p.act(obs_with(price_stress=0.4), 100.0) == 0.0
        assert p.act(obs_with(price_stress=0.5), 100.0) == 0.0

    def test_budget_rule_scales_by_remaining_fraction(self):
        p = BudgetAwareRulePolicy()
        assert p.act(obs_with(0.6, 50.0), 100.0) == pytest.approx(0.05, abs=1e-12)

    def test_budget_rule_quiet_when_calm(self):
        p = BudgetAwareRulePolicy()
        assert p.act(obs_with(0.4, 50.0), 100.0) == 0.0

    def test_budget_rule_cuts_off_when_nearly_spent(self):
        p = BudgetAwareRulePolicy()
        assert p.act(obs_with(0.6, 5.0), 100.0) == 0.0
        assert p.act(obs_with(0.6, 10.0), 100.0) == 0.0   # exactly the floor: off

    def test_budget_rule_rejects_nonpositive_budget(self):
        p = BudgetAwareRulePolicy()
        with pytest.raises(ValueError, match="initial_budget"):
            p.act(obs_with(0.6, 5.0), 0.0)

    def test_reads_only_stress_and_budget(self):
        # everything else in the observation is ignored
        a = obs_with(0.7, 30.0)
        b = obs_with(0.7, 30.0)
        b[[0, 2, 3, 8, 14, 25, 31]] = [23, 999, 9.5, 40, 0.1, 777, 6]
        for p in (RuleBasedPolicy(), BudgetAwareRulePolicy()):
            assert p.act(a, 100.0) == p.act(b, 100.0)


class TestRandomPolicy:
    def test_range_and_determinism(self):
        p = RandomPolicy(credit_max=0.10, seed=5)
        draws = [p.act(obs_with(), 100.0) for _ in range(200)]
        assert all(0.0 <= d <= 0.10 for d in draws)
        assert len(set(draws)) > 100
        p.seed(5)
        again = [p.act(obs_with(), 100.0) for _ in range(200)]
        assert draws == again

    def test_seed_changes_stream(self):
        p = RandomPolicy(seed=1)
        a = p.act(obs_with(), 100.0)
        p.seed(2)
        b = p.act(obs_with(), 100.0)
        assert a != b


class TestMalformedObservation:
    @pytest.mark.parametrize(
        "policy",
        [NoCreditPolicy(), UniformCreditPolicy(), RuleBasedPolicy(), BudgetAwareRulePolicy(), RandomPolicy()],
    )
    def test_wrong_shape(self, policy):
        with pytest.raises(ValueError, match="malformed observation"):
            policy.act(np.zeros(31), 100.0)


class TestParse:
    def test_forms(self):
        assert isinstance(parse_policy("nocredit"), NoCreditPolicy)
        assert parse_policy("uniform").credit == 0.05
        assert parse_policy("uniform:0.02").credit == 0.02
        assert parse_policy("uniform:0").credit == 0.0
        assert isinstance(parse_policy("rule"), RuleBasedPolicy)
        assert isinstance(parse_policy("budget-rule"), BudgetAwareRulePolicy)
        assert isinstance(parse_policy("random"), RandomPolicy)
        assert len(POLICY_FORMS) == 6

    def test_uniform_respects_credit_max(self):
        assert parse_policy("uniform:0.15", credit_max=0.2).credit == 0.15
        with pytest.raises(ValueError, match=r"in \[0, 0.1\]"):
            parse_policy("uniform:0.2", credit_max=0.1)

    @pytest.mark.parametrize(
        "text,msg",
        [
            ("uniform:abc", "must be a number"),
            ("uniform:-0.01", "must be in"),
            ("rule:1", "takes no argument"),
            ("nocredit:x", "takes no argument"),
            ("bogus", "unknown policy"),
            ("", "non-empty"),
            ("Uniform", "unknown policy"),
        ],
    )
    def test_rejects(self, text, msg):
        with pytest.raises(ValueError, match=msg):
            parse_policy(text)
