"""Configuration: defaults, validation, TOML round-trip, presets, seeding."""
import dataclasses

import numpy as np
import pytest

from drsim.config import (
    ConfigError,
    SimConfig,
    dumps_config,
    load_config,
    loads_config,
    preset,
    PRESET_NAMES,
    rng_streams,
    SEED_ENV_VAR,
    spawn_generator,
)


class TestDefaults:
    def test_top_level(self):
        cfg = SimConfig()
        assert cfg.n_buildings == 50
        assert cfg.episode_days == 1
        assert cfg.steps_per_day == 24
        assert cfg.retail_rate == 0.15
        assert cfg.credit_max == 0.10
        assert cfg.feedback_gamma == 0.9
        assert cfg.day_of_year is None
        assert cfg.episode_steps == 24

    def test_price(self):
        p = SimConfig().price
        assert (p.tou_offpeak, p.tou_shoulder, p.tou_peak) == (0.07, 0.12, 0.18)
        assert p.peak_hours == frozenset(range(16, 22))
        assert p.offpeak_hours == frozenset({22, 23, 0, 1, 2, 3, 4, 5})
        assert p.rho == 0.9
        assert p.sigma_eps == 0.02
        assert p.spike_entry_base == 0.005
        assert p.spike_exit_prob == 0.15
        assert p.temp_spike_boost == 0.03
        assert (p.spike_lognormal_mu, p.spike_lognormal_sigma) == (0.4, 0.8)
        assert (p.price_cap, p.price_floor) == (9.50, 0.02)
        assert p.elasticity_lambda == 0.0
        assert p.ewma_alpha == 0.8

    def test_het_multipliers(self):
        het = SimConfig().price.het_multipliers
        assert len(het) == 24
        for h in (7, 8, 9, 18, 19, 20):
            assert het[h] == 1.8
        for h in (22, 23, 0, 1, 2, 3, 4, 5):
            assert het[h] == 1.0
        for h in (6, 10, 11, 12, 13, 14, 15, 16, 17, 21):
            assert het[h] == 1.4

    def test_archetype_table(self):
        rows = [
            (a.proportion, a.base_accept, a.reduction_mean, a.sensitivity_kappa)
            for a in SimConfig().customer.archetypes
        ]
        assert rows == [
            (0.30, 0.80, 0.20, 3.0),
            (0.20, 0.85, 0.18, 1.5),
            (0.35, 0.65, 0.12, 2.0),
            (0.15, 0.40, 0.08, 1.0),
        ]

    def test_customer(self):
        c = SimConfig().customer
        assert c.credit_midpoint == 0.05
        assert c.fatigue_decay == 0.1
        assert c.fatigue_recovery == 0.05
        assert c.fatigue_floor == 0.3
        assert c.reduction_std_ratio == 0.25
        assert c.reduction_cap == 0.5
        assert c.sensitivity_scale == 1.0
        assert c.literal_logistic is False

    def test_stress(self):
        s = SimConfig().stress
        assert s.demand_threshold == 100.0
        assert s.price_threshold == 0.25
        assert s.price_slope == 20.0
        assert (s.thermal_hi, s.thermal_lo, s.thermal_ramp) == (35.0, 0.0, 10.0)
        assert (s.w_demand, s.w_price, s.w_thermal) == (0.3, 0.5, 0.2)

    def test_budget(self):
        b = SimConfig().budget
        assert (b.mu, b.sigma, b.rollover) == (100.0, 20.0, 0.95)
        assert (b.seasonal_base, b.seasonal_amp) == (0.6, 0.8)

    def test_reward(self):
        r = SimConfig().reward
        assert (r.w_revenue, r.w_cost, r.w_stress, r.w_risk) == (0.3, 0.5, 0.2, 0.3)
        assert r.scale == 0.01
        assert r.risk == "cvar:0.95"

    def test_demand(self):
        d = SimConfig().demand
        assert d.source == "synthetic"
        assert d.hvac_coeff == 4.0
        assert d.load_noise_sigma == 0.15
        assert (d.scale_min, d.scale_max) == (0.7, 1.3)
        assert d.temp_noise_sigma == 1.0

    def test_empty_file_is_defaults(self, tmp_path):
        path = tmp_path / "empty.toml"
        path.write_text("")
        assert load_config(path, use_env=False) == SimConfig()


class TestValidation:
    def test_proportions_sum_error(self):
        text = "\n".join(
            "[[customer.archetypes]]\n"
            f'name = "a{i}"\nproportion = 0.5\nbase_accept = 0.5\n'
            "reduction_mean = 0.1\nsensitivity_kappa = 1.0"
            for i in range(4)
        )
        with pytest.raises(ConfigError, match="sum to 2.0"):
            loads_config(text)

    def test_config_error_is_value_error(self):
        assert issubclass(ConfigError, ValueError)

    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("bogus = 1", "unknown config key 'bogus'"),
            ("[price]\nbogus = 1", "unknown config key 'price.bogus'"),
            ("n_buildings = 1.5", "must be an integer"),
            ("retail_rate = \"abc\"", "must be a number"),
            ("[customer]\nliteral_logistic = 1", "must be a boolean"),
            ("[price]\nrho = 1.5", "price.rho"),
            ("[price]\nprice_floor = 10.0", "price_floor"),
            ("[demand]\nsource = \"csv_replay\"", "profile_path"),
            ("[reward]\nrisk = \"bogus\"", "unknown risk measure"),
            ("[reward]\nrisk = \"cvar:1.5\"", "cvar level"),
            ("n_buildings = 0", "n_buildings"),
            ("steps_per_day = 12", "steps_per_day"),
            ("feedback_gamma = 1.5", "feedback_gamma"),
        ],
    )
    def test_rejects(self, text, fragment):
        with pytest.raises(ConfigError, match=fragment):
            loads_config(text)

    def test_archetype_unknown_and_missing_keys(self):
        row = (
            '[[customer.archetypes]]\nname = "a"\nproportion = 1.0\n'
            "base_accept = 0.5\nreduction_mean = 0.1\nsensitivity_kappa = 1.0\n"
        )
        with pytest.raises(ConfigError, match="exactly 4"):
            loads_config(row)
        with pytest.raises(ConfigError, match=r"missing key"):
            loads_config('[[customer.archetypes]]\nname = "a"\n' + row * 3)

    def test_parse_failure_names_file(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("n_buildings = [unclosed")
        with pytest.raises(ConfigError, match="failed to parse"):
            load_config(path, use_env=False)


class TestOverridesAndEnv:
    def test_dotted_override(self):
        cfg = load_config(None, {"price.rho": 0.95, "n_buildings": 10}, use_env=False)
        assert cfg.price.rho == 0.95
        assert cfg.n_buildings == 10

    def test_override_determinism(self):
        a = load_config(None, {"seed": 42}, use_env=False)
        b = load_config(None, {"seed": 42}, use_env=False)
        assert a == b
        assert a.seed == 42

    def test_env_seed(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "777")
        assert load_config(None).seed == 777
        # explicit overrides beat the environment
        assert load_config(None, {"seed": 3}).seed == 3

    def test_env_seed_invalid(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "not-a-number")
        with pytest.raises(ConfigError, match=SEED_ENV_VAR):
            load_config(None)

    def test_env_ignored_when_disabled(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "777")
        assert load_config(None, use_env=False).seed == SimConfig().seed

    def test_file_values_applied(self, tmp_path):
        path = tmp_path / "cfg.toml"
        path.write_text("n_buildings = 7\n[budget]\nmu = 55.0\n")
        cfg = load_config(path, use_env=False)
        assert cfg.n_buildings == 7
        assert cfg.budget.mu == 55.0


class TestRoundTrip:
    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_presets_round_trip(self, name):
        cfg = preset(name)
        assert loads_config(dumps_config(cfg)) == cfg

    def test_modified_config_round_trips(self):
        cfg = dataclasses.replace(
            SimConfig(),
            day_of_year=120,
            customer=dataclasses.replace(SimConfig().customer, literal_logistic=True),
        )
        assert loads_config(dumps_config(cfg)) == cfg


class TestPresets:
    def test_default(self):
        cfg = preset("default")
        assert cfg == SimConfig()
        assert cfg.n_buildings == 50

    def test_uri_analog(self):
        cfg = preset("uri_analog")
        assert cfg.price.spike_entry_base == 0.08
        assert cfg.price.temp_spike_boost == 0.15
        assert cfg.episode_days == 7

    def test_portfolio500(self):
        cfg = preset("portfolio500")
        assert cfg.n_buildings == 500
        assert cfg.stress.demand_threshold == 10000.0
        assert cfg.demand.source == "synthetic"

    def test_unknown_name(self):
        with pytest.raises(ConfigError, match="unknown preset"):
            preset("bogus")


class TestStreams:
    def test_spawn_generator_deterministic(self):
        a = spawn_generator(5, 0).random(4)
        b = spawn_generator(5, 0).random(4)
        assert np.array_equal(a, b)

    def test_sub_streams_differ(self):
        a = spawn_generator(5, 0).random(4)
        b = spawn_generator(5, 1).random(4)
        c = spawn_generator(6, 0).random(4)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_rng_streams_reproducible(self):
        s1, s2 = rng_streams(9), rng_streams(9)
        for name in ("market", "customer", "budget", "demand"):
            assert getattr(s1, name).random() == getattr(s2, name).random()

    def test_named_streams_independent(self):
        s = rng_streams(9)
        # consuming one stream must not move any other
        before = rng_streams(9).budget.random(3)
        s.market.random(1000)
        assert np.array_equal(s.budget.random(3), before)
