"""Episodic credit-issuance MDP.

One step is one hour: the agent sees the pre-decision wholesale price and
offers a per-kWh credit; buildings accept or decline, loads and bills update,
the budget is charged, and the reward balances utility revenue, consumer
cost, grid stress, and incremental tail risk.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import budget as budget_model
from . import customers, demand, market, risk
from .config import RewardParams, SimConfig, rng_streams
from .stress import stress_indicators

__all__ = ["OBS_DIM", "StepRecord", "DemandResponseEnv", "reward_value", "observation_bounds"]

OBS_DIM = 32
_HISTORY_LEN = 5
_OBS_BUILDINGS = 10


@dataclass(frozen=True)
class StepRecord:
    """Everything observable about one completed step, JSONL-ready."""

    t: int
    hour: int
    price: float
    credit_requested: float
    credit_effective: float
    aggregate_demand: float
    n_accepted: int
    reduction_total_kwh: float
    revenue: float
    consumer_cost: float
    payout: float
    budget_remaining: float
    demand_stress: float
    price_stress: float
    thermal_stress: float
    stress_overall: float
    reward: float
    reward_revenue: float
    reward_cost: float
    reward_stress: float
    reward_risk: float
    cvar_running: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def reward_value(
    params: RewardParams,
    revenue: float,
    consumer_cost: float,
    stress_overall: float,
    delta_risk: float,
    n_buildings: int,
) -> tuple[float, float, float, float, float]:
    """Scalar reward and its four signed components (they sum to the reward)."""
    c_rev = params.scale * params.w_revenue * revenue / n_buildings
    c_cost = -params.scale * params.w_cost * consumer_cost / n_buildings
    c_stress = -params.scale * params.w_stress * stress_overall
    c_risk = -params.scale * params.w_risk * delta_risk
    return c_rev + c_cost + c_stress + c_risk, c_rev, c_cost, c_stress, c_risk


def observation_bounds(config: SimConfig) -> tuple[list, list]:
    """Per-dimension observation bounds; None marks an unbounded side.

    Bounds are exact where the dynamics guarantee them (clock fields, prices
    via floor/cap, sigmoid stresses, last credit) and open where the model can
    legitimately exceed the typical range (demand aggregates, thermal stress,
    budget with rollover, building loads, cumulative credits).
    """
    p = config.price
    low: list = [0.0] * OBS_DIM
    high: list = [None] * OBS_DIM
    high[0] = 23.0
    high[1] = 6.0
    low[3] = p.price_floor
    high[3] = p.price_cap
    for i in range(4, 8):
        low[i] = p.price_floor
        high[i] = p.price_cap
    low[8] = demand.TEMP_MIN
    high[8] = demand.TEMP_MAX
    high[9] = 1.0
    high[10] = 1.0
    high[14] = config.credit_max
    high[31] = float(config.episode_days)
    return low, high


class DemandResponseEnv:
    """Seeded, deterministic environment over one building portfolio.

    ``reset(seed)`` rebuilds every random stream from the seed, so a
    (config, seed) pair pins the full trajectory bit for bit. ``step``
    returns ``(obs, reward, terminated, truncated, info, record)``.
    """

    def __init__(self, config: SimConfig):
        self.config = config
        p = config.price
        self._tou = np.array([market.tou_base(h, p) for h in range(24)])
        arch = config.customer.archetypes
        self._arch_proportion = np.array([a.proportion for a in arch])
        self._arch_base = np.array([a.base_accept for a in arch])
        self._arch_mu = np.array([a.reduction_mean for a in arch])
        self._arch_kappa = np.array([a.sensitivity_kappa for a in arch])
        self._measure = risk.parse_measure(config.reward.risk)
        if config.demand.source == "csv_replay":
            self._src_profiles, self._weather = demand.load_profiles_csv(
                config.demand.profile_path, config.demand.weather_path
            )
        else:
            self._src_profiles, self._weather = None, None
        self._ready = False
        self._done = True

    # ------------------------------------------------------------------
    # episode lifecycle
    # ------------------------------------------------------------------

    def reset(self, seed: int | None = None) -> tuple[np.ndarray, dict]:
        cfg = self.config
        self._seed = cfg.seed if seed is None else int(seed)
        s = rng_streams(self._seed)
        self._streams = s
        n = cfg.n_buildings

        if cfg.day_of_year is not None:
            doy0 = cfg.day_of_year
        else:
            doy0 = int(s.calendar.integers(0, 365))
        self._doy0 = doy0
        self._temps = demand.TemperatureProcess(doy0, self._weather, cfg.demand.temp_noise_sigma, s.weather)

        self._arch_idx = s.archetype.choice(len(self._arch_proportion), size=n, p=self._arch_proportion)
        self._base = self._arch_base[self._arch_idx]
        self._mu = self._arch_mu[self._arch_idx]
        self._kappa = self._arch_kappa[self._arch_idx]
        self._fatigue = np.ones(n)
        self._mult = np.ones(n)
        self._bills = np.zeros(n)

        if cfg.demand.source == "csv_replay":
            profiles = demand.replicate_profiles(self._src_profiles, n, s.loads)
            self._replay_series = [prof.series for prof in profiles]
            self._replay_jitter = np.array([prof.jitter for prof in profiles])
            self._scales = None
        else:
            self._scales = s.loads.uniform(cfg.demand.scale_min, cfg.demand.scale_max, n)
            self._hvacs = cfg.demand.hvac_coeff * self._scales

        # burn the AR(1) residual to stationarity before the first priced hour
        self._market = market.MarketState()
        for h in range(24):
            market.advance_market(self._market, h, self._temps.burn(h), cfg.price, s.market)
        self._temp = self._temps.at(0)
        self._price = market.advance_market(self._market, 0, self._temp, cfg.price, s.market)

        b0 = budget_model.draw_daily_budget(doy0, 0.0, s.budget, cfg.budget)
        self._ledger = budget_model.BudgetLedger(b0, b0, 0.0, doy0)
        self._initial_budget = b0
        self._daily_budgets = [b0]
        self._daily_payouts = [0.0]

        self._t = 0
        self._cum_credits = 0.0
        self._prev_risk = 0.0
        self._last_credit = 0.0
        self._d_base = self._draw_baseline(0)
        d0 = float(self._d_base.sum())
        self._last_agg = d0
        self._prev_agg = d0
        self._hist = np.zeros(_HISTORY_LEN)
        self._hist[-1] = d0

        self._ready = True
        self._done = False
        info = {"initial_budget": b0, "seed": self._seed, "day_of_year": doy0}
        return self._build_obs(), info

    def step(self, action) -> tuple[np.ndarray, float, bool, bool, dict, StepRecord]:
        if not self._ready:
            raise RuntimeError("reset() must be called before step()")
        if self._done:
            raise RuntimeError("episode is terminated; call reset()")
        cfg = self.config
        s = self._streams

        a = float(action)
        if not math.isfinite(a):
            raise ValueError(f"action must be a finite number, got {action!r}")
        c_req = min(max(a, 0.0), cfg.credit_max)
        c_pre = budget_model.cap_credit(c_req, self._ledger.remaining, self._prev_agg)

        accepted, delta, reduction = customers.sample_responses(
            self._base, self._kappa, self._mu, self._fatigue,
            c_pre, self._d_base, cfg.customer, s.accept, s.reduce,
        )
        d_post = demand.effective_demand(self._d_base, self._mult, reduction)
        agg = float(d_post.sum())
        n_accepted = int(accepted.sum())
        reduction_total = float(reduction.sum())

        payout = c_pre * float(d_post[accepted].sum())
        c_eff = c_pre
        if payout > self._ledger.remaining:
            # hard cap: shrink the rate, keep the acceptance outcomes
            c_eff = c_pre * (self._ledger.remaining / payout)
            payout = self._ledger.remaining
        budget_model.charge(self._ledger, payout)

        price = self._price
        temp = self._temp
        revenue = (cfg.retail_rate - c_eff - price) * agg
        consumer_cost = (cfg.retail_rate - c_eff) * agg
        self._bills += (cfg.retail_rate - c_eff * accepted) * d_post

        sr = stress_indicators(agg, price, temp, cfg.stress)
        if self._measure is not None:
            d_risk, self._prev_risk = risk.delta_risk(self._prev_risk, self._bills, self._measure)
        else:
            d_risk = 0.0
        reward, c_rev, c_cost, c_stress, c_risk = reward_value(
            cfg.reward, revenue, consumer_cost, sr.overall, d_risk, cfg.n_buildings
        )

        self._fatigue = customers.update_fatigue(self._fatigue, accepted, cfg.customer)
        self._mult = demand.update_feedback_multiplier(self._mult, delta, cfg.feedback_gamma)
        self._market.reduction_ewma = market.update_reduction_ewma(
            self._market.reduction_ewma, reduction_total, cfg.price.ewma_alpha
        )

        self._cum_credits += payout
        self._daily_payouts[-1] += payout
        self._last_credit = c_req
        step_index = self._t
        self._t += 1
        t = self._t
        terminated = t >= cfg.episode_steps
        if t % cfg.steps_per_day == 0 and not terminated:
            carry = self._ledger.remaining
            new_doy = self._temps.day_of_year(t)
            b = budget_model.draw_daily_budget(new_doy, carry, s.budget, cfg.budget)
            self._ledger = budget_model.BudgetLedger(b, b, carry, new_doy)
            self._daily_budgets.append(b)
            self._daily_payouts.append(0.0)

        # pre-decision quantities for the next hour
        self._temp = self._temps.at(t)
        self._price = market.advance_market(self._market, t % 24, self._temp, cfg.price, s.market)
        self._d_base = self._draw_baseline(t)
        self._prev_agg = agg
        self._last_agg = agg
        self._hist[:-1] = self._hist[1:]
        self._hist[-1] = agg

        record = StepRecord(
            t=step_index,
            hour=step_index % 24,
            price=price,
            credit_requested=c_req,
            credit_effective=c_eff,
            aggregate_demand=agg,
            n_accepted=n_accepted,
            reduction_total_kwh=reduction_total,
            revenue=revenue,
            consumer_cost=consumer_cost,
            payout=payout,
            budget_remaining=self._ledger.remaining,
            demand_stress=sr.demand_stress,
            price_stress=sr.price_stress,
            thermal_stress=sr.thermal_stress,
            stress_overall=sr.overall,
            reward=reward,
            reward_revenue=c_rev,
            reward_cost=c_cost,
            reward_stress=c_stress,
            reward_risk=c_risk,
            cvar_running=self._prev_risk,
        )
        info: dict = {}
        if terminated:
            self._done = True
            drawn = sum(self._daily_budgets)
            info = {
                "budget_utilization": (self._cum_credits / drawn) if drawn > 0 else 0.0,
                "budget_drawn": drawn,
                "total_payout": self._cum_credits,
                "final_risk": self._prev_risk,
            }
        return self._build_obs(), reward, terminated, False, info, record

    # ------------------------------------------------------------------
    # internals
    # ------------------------------------------------------------------

    def _draw_baseline(self, step: int) -> np.ndarray:
        cfg = self.config
        if cfg.demand.source == "csv_replay":
            vals = np.array([ser[step % ser.size] for ser in self._replay_series])
            return vals * self._replay_jitter
        noise = cfg.demand.load_noise_sigma * self._streams.loads.standard_normal(cfg.n_buildings)
        return demand.synthetic_demand(self._scales, self._hvacs, step % 24, self._temp, noise)

    def _build_obs(self) -> np.ndarray:
        cfg = self.config
        t = self._t
        obs = np.zeros(OBS_DIM)
        obs[0] = t % 24
        obs[1] = self._temps.day_of_year(t) % 7
        obs[2] = self._last_agg
        obs[3] = self._price
        obs[4:8] = market.price_forecast(self._market, t % 24, cfg.price)
        obs[8] = self._temp
        sr = stress_indicators(self._last_agg, self._price, self._temp, cfg.stress)
        obs[9] = sr.demand_stress
        obs[10] = sr.price_stress
        obs[11] = sr.thermal_stress
        obs[12] = sr.overall
        obs[13] = self._ledger.remaining
        obs[14] = self._last_credit
        loads = self._d_base * self._mult
        k = min(cfg.n_buildings, _OBS_BUILDINGS)
        obs[15:15 + k] = loads[:k]
        obs[25:30] = self._hist
        obs[30] = self._cum_credits
        obs[31] = t // cfg.steps_per_day
        return obs

    # ------------------------------------------------------------------
    # read-only accessors used by the harness and tests
    # ------------------------------------------------------------------

    @property
    def bills(self) -> np.ndarray:
        return self._bills.copy()

    @property
    def initial_budget(self) -> float:
        return self._initial_budget

    @property
    def daily_budgets(self) -> list[float]:
        return list(self._daily_budgets)

    @property
    def daily_payouts(self) -> list[float]:
        return list(self._daily_payouts)

    @property
    def total_payout(self) -> float:
        return self._cum_credits
