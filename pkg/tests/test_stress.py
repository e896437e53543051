"""Grid stress indicators: sigmoid anchors, thermal ramp, weighted mixing."""
import dataclasses

import pytest

from drsim.config import StressParams
from drsim.stress import sigmoid, stress_indicators


PARAMS = StressParams()


class TestAnchors:
    def test_midpoints(self):
        r = stress_indicators(100.0, 0.25, 20.0, PARAMS)
        assert r.demand_stress == 0.5
        assert r.price_stress == 0.5
        assert r.thermal_stress == 0.0
        assert r.overall == pytest.approx(0.4, abs=1e-12)

    def test_thermal_hot(self):
        assert stress_indicators(0.0, 0.02, 40.0, PARAMS).thermal_stress == 0.5

    def test_thermal_cold(self):
        assert stress_indicators(0.0, 0.02, -5.0, PARAMS).thermal_stress == 0.5

    @pytest.mark.parametrize("temp", [0.0, 10.0, 17.5, 35.0])
    def test_thermal_zero_inside_band(self, temp):
        assert stress_indicators(0.0, 0.02, temp, PARAMS).thermal_stress == 0.0

    def test_thermal_unclamped(self):
        # Table range [0, 1] is typical, not enforced: 50 C rides the ramp past 1
        assert stress_indicators(0.0, 0.02, 50.0, PARAMS).thermal_stress == pytest.approx(1.5)


class TestShape:
    def test_demand_monotone(self):
        vals = [stress_indicators(d, 0.25, 20.0, PARAMS).demand_stress for d in (90, 95, 100, 105, 110)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_price_monotone(self):
        vals = [stress_indicators(100, p, 20.0, PARAMS).price_stress for p in (0.05, 0.15, 0.25, 0.50, 2.0)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_indicators_bounded(self):
        for d in (0.0, 50.0, 1e5):
            for p in (0.02, 0.25, 9.5):
                r = stress_indicators(d, p, 20.0, PARAMS)
                assert 0.0 <= r.demand_stress <= 1.0
                assert 0.0 <= r.price_stress <= 1.0

    def test_overall_linear_in_weights(self):
        params = dataclasses.replace(PARAMS, w_demand=1.0, w_price=2.0, w_thermal=3.0)
        r = stress_indicators(130.0, 0.5, 41.0, params)
        assert r.overall == pytest.approx(
            1.0 * r.demand_stress + 2.0 * r.price_stress + 3.0 * r.thermal_stress, abs=1e-12
        )

    def test_price_slope(self):
        # sigma_P = sigmoid(slope * (p - threshold)): one slope unit off midpoint
        r = stress_indicators(0.0, 0.30, 20.0, PARAMS)
        assert r.price_stress == pytest.approx(sigmoid(20.0 * 0.05), abs=1e-12)

    def test_demand_threshold_scales(self):
        params = dataclasses.replace(PARAMS, demand_threshold=10000.0)
        assert stress_indicators(10000.0, 0.25, 20.0, params).demand_stress == 0.5


class TestSigmoid:
    def test_extreme_arguments_stable(self):
        assert sigmoid(-800.0) == 0.0
        assert sigmoid(800.0) == 1.0

    def test_symmetry(self):
        assert sigmoid(1.7) + sigmoid(-1.7) == pytest.approx(1.0, abs=1e-12)

    def test_zero(self):
        assert sigmoid(0.0) == 0.5
