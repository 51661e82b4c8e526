"""Named verification scenarios: each pairs an analytic prediction with a
Monte Carlo (or numerical) estimate and a pass/fail verdict per claim."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Any, Callable

import numpy as np

from . import analytic, game, stats
from .config import ConfigError, ExperimentConfig, direction_law_from_dict, direction_law_to_dict
from .model import FixedSpeed, IntruderSpec, NetworkConfig, PointMass, UniformDirection, wrap_angle
from .sim import (
    SimulationWindow,
    default_detection_horizon,
    estimate_area_coverage,
    estimate_interval_coverage,
    run_replications,
    sample_detection_time,
    sample_point_timeline,
)


@dataclass
class Claim:
    name: str
    passed: bool
    predicted: float | None = None
    empirical: float | None = None
    se: float | None = None
    ci: tuple[float, float] | None = None
    tolerance: float | None = None
    note: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": bool(self.passed)}
        for key in ("predicted", "empirical", "se", "tolerance"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.ci is not None:
            out["ci"] = list(self.ci)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class ScenarioResult:
    columns: list[str]
    rows: list[list]
    claims: list[Claim]
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)


@dataclass(frozen=True)
class Scenario:
    name: str
    run: Callable[[ExperimentConfig], ScenarioResult]
    defaults: dict
    params: dict
    tolerances: dict
    help: str


def derive_seed(seed: int, *keys: int) -> int:
    """Independent integer seed for a sub-stream of ``seed``."""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0] >> 1)


def _ci(mean: float, se: float) -> tuple[float, float]:
    return (mean - stats.Z95 * se, mean + stats.Z95 * se)


def _rel_claim(name: str, predicted: float, empirical: float, se: float, rel: float) -> Claim:
    return Claim(name, abs(empirical - predicted) <= rel * abs(predicted), predicted, empirical, se,
                 _ci(empirical, se), rel, "relative tolerance")


def _abs_claim(name: str, predicted: float, empirical: float, se: float | None, tol: float) -> Claim:
    return Claim(name, abs(empirical - predicted) <= tol, predicted, empirical, se,
                 None if se is None else _ci(empirical, se), tol, "absolute tolerance")


def _fixed_speed(cfg: ExperimentConfig) -> float:
    return cfg.network.mean_speed


# ---------------------------------------------------------------------------
# Replication bodies (module level so they pickle for worker pools)
# ---------------------------------------------------------------------------


def _area_rep(net: NetworkConfig, t: float, points: int, side: float | None, rng) -> tuple[int, int]:
    window = SimulationWindow.for_config(net, horizon=t, side=side)
    est = estimate_area_coverage(net, t, points, rng, window)
    return round(est.value * points), points


def _interval_rep(net: NetworkConfig, duration: float, points: int, side: float | None, rng) -> tuple[int, int]:
    window = SimulationWindow.for_config(net, horizon=duration, side=side)
    est = estimate_interval_coverage(net, duration, points, rng, window)
    return round(est.value * points), points


def _detect_rep(net: NetworkConfig, intruder: IntruderSpec, horizon: float, reach: float | None, rng):
    s = sample_detection_time(net, intruder, horizon, rng, reach=reach)
    return s.value, s.censored


def _timeline_rep(net: NetworkConfig, horizon: float, rng):
    tl = sample_point_timeline(net, horizon, rng)
    return tl.complete_gaps(), tl.complete_covered(), tl.covered_fraction


def _fractions(rs) -> np.ndarray:
    return np.array([h / n for h, n in rs.results])


def _detection_samples(cfg: ExperimentConfig, net: NetworkConfig, intruder: IntruderSpec,
                       n: int, seed: int, horizon: float | None = None, reach: float | None = None):
    if horizon is None:
        horizon = cfg.horizon if cfg.horizon is not None else default_detection_horizon(net, intruder)
    rs = run_replications(partial(_detect_rep, net, intruder, horizon, reach), n, seed)
    values = np.array([v for v, _ in rs.results])
    censored = np.array([c for _, c in rs.results], dtype=bool)
    return values, censored, horizon


def _detection_rows(values, censored) -> list[list]:
    return [[i, float(v), int(c)] for i, (v, c) in enumerate(zip(values, censored))]


def _censor_claim(values, censored, rate: float, horizon: float, k: float) -> Claim:
    n = values.size
    p = math.exp(-rate * horizon)
    bound = p + k * math.sqrt(max(p * (1 - p), 1e-300) / n)
    frac = float(censored.mean())
    return Claim("censoring_rate", frac <= bound, p, frac, None, None, bound,
                 f"{int(censored.sum())} of {n} censored at horizon {horizon:g}")


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


def run_area_coverage(cfg: ExperimentConfig) -> ScenarioResult:
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    predicted = analytic.area_coverage(net.density, net.sensing_radius)
    rows, claims, per_time = [], [], []
    for k, t in enumerate(p["times"]):
        rs = run_replications(partial(_area_rep, net, float(t), cfg.test_points, p["window_side"]),
                              cfg.replications, derive_seed(cfg.seed, k))
        fr = _fractions(rs)
        mean, se = stats.mean_and_se(fr)
        if math.isnan(se):
            hits, n = rs.results[0]
            se = math.sqrt(mean * (1 - mean) / n)
        per_time.append((t, mean, se))
        rows += [[i, t, h, n, h / n] for i, (h, n) in enumerate(rs.results)]
        claims.append(_abs_claim(f"area_coverage_t={t:g}", predicted, mean, se, tol["abs_tol"]))
    if len(per_time) >= 2:
        (window, m0, s0), (t1, m1, s1) = per_time[0], per_time[-1]
        band = tol["invariance_se"] * math.hypot(s0, s1)
        claims.append(Claim(f"time_invariance_{window:g}_vs_{t1:g}", abs(m0 - m1) < band, 0.0, m0 - m1,
                            math.hypot(s0, s1), None, band, "difference within k combined SE"))
    return ScenarioResult(["replicate", "time", "covered", "points", "fraction"], rows, claims,
                          {"predicted_fraction": predicted})


def run_interval_coverage(cfg: ExperimentConfig) -> ScenarioResult:
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    dt = float(p["duration"])
    predicted = analytic.interval_coverage_straight(net.density, net.sensing_radius, net.mean_speed, dt)
    rs = run_replications(partial(_interval_rep, net, dt, cfg.test_points, p["window_side"]),
                          cfg.replications, cfg.seed)
    mean, se = stats.mean_and_se(_fractions(rs))
    rows = [[i, dt, h, n, h / n] for i, (h, n) in enumerate(rs.results)]
    claims = [_abs_claim(f"interval_coverage_dt={dt:g}", predicted, mean, se, tol["abs_tol"])]
    return ScenarioResult(["replicate", "duration", "covered", "points", "fraction"], rows, claims,
                          {"predicted_fraction": predicted})


def run_required_speed(cfg: ExperimentConfig) -> ScenarioResult:
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    density, r = net.density, net.sensing_radius
    floor = analytic.area_coverage(density, r)
    targets = p["targets"]
    if targets is None:
        targets = np.linspace(floor, p["max_target"], p["n_targets"]).tolist()
    rows, worst = [], 0.0
    for target in targets:
        for window in p["durations"]:
            v = analytic.required_speed(density, r, target, window)
            back = analytic.interval_coverage_straight(density, r, v, window)
            err = abs(back - target)
            worst = max(worst, err)
            rows.append([target, window, v, back, err])
    claim = Claim("roundtrip_max_abs_error", worst < tol["roundtrip"], 0.0, worst, None, None,
                  tol["roundtrip"], f"{len(rows)} grid points")
    return ScenarioResult(["target_fraction", "duration", "required_speed", "roundtrip_fraction",
                           "abs_error"], rows, [claim], {"grid_points": len(rows)})


def _require_intruder(cfg: ExperimentConfig, static: bool, dwell: bool) -> None:
    if static and cfg.intruder.speed != 0:
        raise ConfigError("intruder.speed", f"{cfg.scenario} needs a static intruder (speed 0)")
    if not dwell and cfg.intruder.sensing_time != 0:
        raise ConfigError("intruder.sensing_time", f"{cfg.scenario} needs sensing_time 0")
    if dwell and cfg.intruder.sensing_time <= 0:
        raise ConfigError("intruder.sensing_time", f"{cfg.scenario} needs sensing_time > 0")


def run_detect_static(cfg: ExperimentConfig) -> ScenarioResult:
    _require_intruder(cfg, static=True, dwell=False)
    net, tol = cfg.network, cfg.tolerances
    rate = analytic.static_detection_law(net.density, net.sensing_radius, net.mean_speed)
    values, censored, horizon = _detection_samples(cfg, net, cfg.intruder, cfg.replications, cfg.seed)
    ok = values[~censored]
    mle = stats.exp_rate_mle(ok)
    d = stats.ks_exponential(ok, rate)
    claims = [
        Claim("rate_mle", abs(mle.rate - rate) <= tol["rate_rel"] * rate, rate, mle.rate, None,
              (mle.ci_low, mle.ci_high), tol["rate_rel"], "relative tolerance"),
        Claim("ks_exponential", d < stats.ks_critical(ok.size, tol["ks_coef"]), None, d, None, None,
              stats.ks_critical(ok.size, tol["ks_coef"]), "D below coef/sqrt(n)"),
        _censor_claim(values, censored, rate, horizon, tol["censor_se"]),
    ]
    return ScenarioResult(["replicate", "sample", "censored"], _detection_rows(values, censored), claims,
                          {"predicted_rate": rate, "predicted_mean": 1.0 / rate, "horizon": horizon,
                           "censored": int(censored.sum())})


def run_durations(cfg: ExperimentConfig) -> ScenarioResult:
    net, tol = cfg.network, cfg.tolerances
    horizon = cfg.horizon if cfg.horizon is not None else cfg.params["default_horizon"]
    summary = analytic.duration_summary(net.density, net.sensing_radius, net.mean_speed)
    time_fraction = analytic.time_coverage(net.density, net.sensing_radius)
    rs = run_replications(partial(_timeline_rep, net, horizon), cfg.replications, cfg.seed)
    gaps = np.concatenate([g for g, _, _ in rs.results])
    covered = np.concatenate([c for _, c, _ in rs.results])
    fractions = np.array([f for _, _, f in rs.results])
    rows = []
    for i, (g, c, f) in enumerate(rs.results):
        rows += [[i, "uncovered_spell", float(x)] for x in g]
        rows += [[i, "covered_spell", float(x)] for x in c]
        rows.append([i, "covered_fraction", float(f)])
    gap_rate = stats.exp_rate_mle(gaps)
    cov_mean, cov_se = stats.mean_and_se(covered)
    frac_mean, frac_se = stats.mean_and_se(fractions)
    claims = [
        Claim("uncovered_gap_rate", abs(gap_rate.rate * summary.mean_uncovered - 1) <= tol["rate_rel"],
              1.0 / summary.mean_uncovered, gap_rate.rate, None, (gap_rate.ci_low, gap_rate.ci_high),
              tol["rate_rel"], f"MLE over {gaps.size} complete gaps"),
        Claim("mean_covered_duration", abs(cov_mean - summary.mean_covered) <= tol["covered_rel"] * summary.mean_covered,
              summary.mean_covered, cov_mean, cov_se, _ci(cov_mean, cov_se), tol["covered_rel"],
              f"{covered.size} complete covered spells"),
        _abs_claim("covered_time_fraction", time_fraction, frac_mean, frac_se, tol["fraction_abs"]),
    ]
    return ScenarioResult(["replicate", "kind", "value"], rows, claims,
                          {"predicted": summary._asdict(), "horizon": horizon})


def run_detect_sensing_time(cfg: ExperimentConfig) -> ScenarioResult:
    _require_intruder(cfg, static=True, dwell=True)
    net, tol = cfg.network, cfg.tolerances
    dwell = cfg.intruder.sensing_time
    law = analytic.sensing_time_law(net.density, net.sensing_radius, net.mean_speed, dwell)
    values, censored, horizon = _detection_samples(cfg, net, cfg.intruder, cfg.replications, cfg.seed)
    ok = values[~censored]
    mean, se = stats.mean_and_se(ok)
    d = stats.ks_exponential(ok - dwell, law.rate)
    crit = stats.ks_critical(ok.size, tol["ks_coef"])
    claims = [
        _rel_claim("mean_detection_time", law.mean_detection, mean, se, tol["mean_rel"]),
        Claim("ks_shifted_exponential", d < crit, None, d, None, None, crit,
              f"samples minus {dwell:g} against Exp({law.rate:g})"),
        _censor_claim(values, censored, law.rate, horizon - dwell, tol["censor_se"]),
    ]
    return ScenarioResult(["replicate", "sample", "censored"], _detection_rows(values, censored), claims,
                          {"effective_radius": law.effective_radius, "predicted_rate": law.rate,
                           "predicted_mean": law.mean_detection, "horizon": horizon,
                           "censored": int(censored.sum())})


def run_optimal_speed_sweep(cfg: ExperimentConfig) -> ScenarioResult:
    """Empirical mean detection time over a speed grid.

    Every grid point reuses the same seeds, so the deployments differ only
    in speed (common random numbers), which sharpens the argmin.
    """
    _require_intruder(cfg, static=True, dwell=True)
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    dwell, density, r = cfg.intruder.sensing_time, net.density, net.sensing_radius
    speeds = np.linspace(p["speed_low"], p["speed_high"], p["n_speeds"])
    step = float(speeds[1] - speeds[0]) if speeds.size > 1 else 0.0
    opt = analytic.optimal_speed(density, r, dwell)
    rows, means = [], []
    for v in speeds:
        sweep_net = replace(net, speed_law=FixedSpeed(float(v)))
        values, censored, horizon = _detection_samples(cfg, sweep_net, cfg.intruder, cfg.replications, cfg.seed)
        mean, se = stats.mean_and_se(values)
        pred = analytic.sensing_time_law(density, r, float(v), dwell).mean_detection
        means.append(mean)
        rows.append([float(v), values.size, int(censored.sum()), mean, se, pred])
    argmin = float(speeds[int(np.argmin(means))])
    at_opt = analytic.sensing_time_law(density, r, opt.speed, dwell).mean_detection
    claims = [
        Claim("empirical_argmin", abs(argmin - opt.speed) <= tol["argmin_steps"] * step + 1e-12,
              opt.speed, argmin, None, None, tol["argmin_steps"] * step, "within k grid steps"),
        Claim("analytic_mean_at_optimum", abs(at_opt - opt.mean_detection) <= tol["analytic_abs"],
              opt.mean_detection, at_opt, None, None, tol["analytic_abs"], "closed form vs law at v*"),
    ]
    return ScenarioResult(["speed", "n", "censored", "mean", "se", "predicted_mean"], rows, claims,
                          {"optimal_speed": opt.speed, "optimal_mean": opt.mean_detection, "grid_step": step})


def closed_form_effective_speed(law, theta_t: float, v_t: float, v_s: float) -> float | None:
    """Independent closed forms: law of cosines for a point mass, elliptic integral for uniform."""
    if isinstance(law, PointMass):
        return math.sqrt(max(v_s * v_s + v_t * v_t - 2 * v_s * v_t * math.cos(law.theta - theta_t), 0.0))
    if isinstance(law, UniformDirection):
        from scipy.special import ellipe

        c = v_t / v_s
        return v_s * (1 + c) * 2.0 / math.pi * float(ellipe(4 * c / (1 + c) ** 2))
    return None


def run_detect_mobile(cfg: ExperimentConfig) -> ScenarioResult:
    if cfg.intruder.sensing_time != 0:
        raise ConfigError("intruder.sensing_time", "detect-mobile needs sensing_time 0")
    net, tol, intr = cfg.network, cfg.tolerances, cfg.intruder
    vs = net.mean_speed
    eff = analytic.effective_speed(net.direction_law, intr.direction, intr.speed, vs)
    rate = analytic.mobile_detection_law(net.density, net.sensing_radius, eff)
    if rate == 0:
        raise ConfigError("intruder", "co-moving intruder is never detected; nothing to simulate")
    values, censored, horizon = _detection_samples(cfg, net, intr, cfg.replications, cfg.seed)
    ok = values[~censored]
    mean, se = stats.mean_and_se(ok)
    d = stats.ks_exponential(ok, rate)
    crit = stats.ks_critical(ok.size, tol["ks_coef"])
    claims = [
        _rel_claim("mean_detection_time", 1.0 / rate, mean, se, tol["mean_rel"]),
        Claim("ks_exponential", d < crit, None, d, None, None, crit, "D below coef/sqrt(n)"),
        _censor_claim(values, censored, rate, horizon, tol["censor_se"]),
    ]
    exact = closed_form_effective_speed(net.direction_law, intr.direction, intr.speed, vs)
    if exact is not None:
        claims.append(_abs_claim("effective_speed_closed_form", exact, eff, None, tol["closed_form_abs"]))
    return ScenarioResult(["replicate", "sample", "censored"], _detection_rows(values, censored), claims,
                          {"effective_speed": eff, "predicted_rate": rate, "predicted_mean": 1.0 / rate,
                           "horizon": horizon, "censored": int(censored.sum())})


def _grid(p: dict) -> game.GridSpec:
    return game.GridSpec(n_angles=p["n_angles"], n_speeds=p["n_speeds"])


def _response_row(label: str, br: game.BestResponse) -> list:
    return [label, br.direction, br.speed, br.min_effective_speed, br.payoff]


def _circ_dist(a: float, b: float) -> float:
    d = abs(wrap_angle(a - b))
    return min(d, 2 * math.pi - d)


def run_game_best_response(cfg: ExperimentConfig) -> ScenarioResult:
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    density, r, vs, vmax = net.density, net.sensing_radius, net.mean_speed, float(p["v_t_max"])
    grid = _grid(p)
    law = net.direction_law
    br = game.best_response_intruder(law, vs, vmax, grid, density=density, radius=r)
    uni = game.best_response_intruder(UniformDirection(), vs, vmax, grid, density=density, radius=r)
    d_theta = 2 * math.pi / grid.n_angles
    d_v = vmax / (grid.n_speeds - 1)
    claims = [Claim("minimax_bound", br.min_effective_speed <= uni.min_effective_speed + tol["bound_margin"],
                    uni.min_effective_speed, br.min_effective_speed, None, None, tol["bound_margin"],
                    "no law beats uniform headings")]
    if isinstance(law, PointMass):
        v_star = min(vmax, vs)
        payoff = game.UNDETECTABLE if vmax >= vs else 1.0 / (2 * density * r * (vs - vmax))
        claims += [
            Claim("direction_matches_sensors", _circ_dist(br.direction, law.theta) <= d_theta,
                  law.theta, br.direction, None, None, d_theta, "within one angular grid step"),
            _abs_claim("speed_matches", v_star, br.speed, None, d_v),
            Claim("payoff", (math.isinf(payoff) and br.undetectable)
                  or (not math.isinf(payoff) and abs(br.payoff - payoff) <= tol["payoff_rel"] * payoff),
                  payoff, br.payoff, None, None, tol["payoff_rel"], "relative tolerance"),
        ]
        worst = max(abs(analytic.effective_speed(law, law.theta, f * vs, vs) - abs(f * vs - vs))
                    for f in (0.0, 0.5, 1.0, 1.5))
        claims.append(Claim("same_direction_effective_speed", worst <= tol["closed_form_abs"], 0.0, worst,
                            None, None, tol["closed_form_abs"], "|v_t - v_s| at v_t/v_s in {0, .5, 1, 1.5}"))
    elif isinstance(law, UniformDirection):
        payoff = 1.0 / (2 * density * r * vs)
        claims += [
            _abs_claim("stationary_best_response", 0.0, br.speed, None, d_v),
            Claim("payoff", abs(br.payoff - payoff) <= tol["payoff_rel"] * payoff, payoff, br.payoff,
                  None, None, tol["payoff_rel"], "relative tolerance"),
        ]
    rows = [_response_row(repr(law), br)]
    return ScenarioResult(["law", "direction", "speed", "min_effective_speed", "payoff"], rows, claims,
                          {"best_response": {"direction": br.direction, "speed": br.speed,
                                             "min_effective_speed": br.min_effective_speed,
                                             "payoff": br.payoff, "undetectable": br.undetectable}})


def run_game_equilibrium(cfg: ExperimentConfig) -> ScenarioResult:
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    family = game.reference_family() if p["family"] is None else [
        direction_law_from_dict(d, f"params.family[{i}]") for i, d in enumerate(p["family"])]
    report = game.equilibrium_check(net.density, net.sensing_radius, net.mean_speed, float(p["v_t_max"]),
                                    family, _grid(p), tol["margin"])
    others = [r.response.min_effective_speed for k, r in enumerate(report.results) if k != report.uniform_index]
    gap = report.uniform_value - max(others) if others else math.inf
    chain_err = max(abs(h.mean_over_headings - h.uniform_value) for _, h in report.bound_checks)
    chain_ok = all(h.min_over_headings <= h.mean_over_headings + 1e-12 for _, h in report.bound_checks)
    claims = [
        Claim("uniform_maximises_min_effective_speed", report.uniform_is_max, report.uniform_value,
              max(others) if others else None, None, None, tol["margin"],
              f"margin {gap:.6g} over the best alternative"),
        _abs_claim("stationary_best_response_to_uniform", 0.0, report.uniform_response_speed, None,
                   report.speed_tolerance),
        Claim("minimax_bound_all_laws", report.bound_holds, report.uniform_value, None, None, None,
              tol["margin"], "min effective speed <= uniform value + margin"),
        Claim("heading_average_chain", chain_ok and chain_err <= tol["chain_abs"], 0.0, chain_err, None, None,
              tol["chain_abs"], "min over headings <= heading average == uniform value"),
    ]
    rows = [_response_row(r.label, r.response) for r in report.results]
    laws = [{"law": direction_law_to_dict(r.law), "label": r.label,
             "min_effective_speed": r.response.min_effective_speed,
             "minimax_value": r.response.payoff, "direction": r.response.direction,
             "speed": r.response.speed} for r in report.results]
    return ScenarioResult(["law", "direction", "speed", "min_effective_speed", "payoff"], rows, claims,
                          {"laws": laws, "uniform_index": report.uniform_index})


def _ordering_claim(name: str, empirical: float, se: float, bound: float, k: float, upper: bool) -> Claim:
    """``upper``: empirical should not exceed ``bound``; otherwise should not fall below it."""
    diff = (bound - empirical) if upper else (empirical - bound)
    if diff > k * se:
        status = "separated"
    elif diff >= -k * se:
        status = "statistically equal (flagged for review)"
    else:
        status = "reversed"
    return Claim(name, status != "reversed", bound, empirical, se, _ci(empirical, se), k, status)


def run_straightline_optimality(cfg: ExperimentConfig) -> ScenarioResult:
    net, p, tol = cfg.network, cfg.params, cfg.tolerances
    turning = replace(net, turn_interval=float(p["turn_interval"]))
    density, r, vs = net.density, net.sensing_radius, net.mean_speed
    k = tol["se_band"]
    rows, claims = [], []

    dt = float(p["duration"])
    bound = analytic.interval_coverage_straight(density, r, vs, dt)
    rs = run_replications(partial(_interval_rep, turning, dt, cfg.test_points, None),
                          cfg.replications, derive_seed(cfg.seed, 1))
    fr = _fractions(rs)
    mean, se = stats.mean_and_se(fr)
    rows += [["interval_coverage", i, float(x)] for i, x in enumerate(fr)]
    claims.append(_ordering_claim("interval_coverage_below_straight", mean, se, bound, k, upper=True))

    static = IntruderSpec()
    rate = analytic.static_detection_law(density, r, vs)
    horizon = p["horizon_factor"] / rate
    values, censored, _ = _detection_samples(cfg, turning, static, p["detection_samples"],
                                             derive_seed(cfg.seed, 2), horizon=horizon)
    mean, se = stats.mean_and_se(values)
    rows += [["static_detection", i, float(x)] for i, x in enumerate(values)]
    c = _ordering_claim("static_detection_above_straight", mean, se, 1.0 / rate, k, upper=False)
    c.note += f"; {int(censored.sum())} censored (counted at the horizon)"
    claims.append(c)

    vt = float(p["mobile_intruder_speed"])
    if vt > 0:
        mobile = IntruderSpec(speed=vt, direction=0.0)
        eff = analytic.effective_speed(net.direction_law, 0.0, vt, vs)
        mrate = analytic.mobile_detection_law(density, r, eff)
        values, censored, _ = _detection_samples(cfg, turning, mobile, p["detection_samples"],
                                                 derive_seed(cfg.seed, 3), horizon=p["horizon_factor"] / mrate)
        mean, se = stats.mean_and_se(values)
        rows += [["mobile_detection", i, float(x)] for i, x in enumerate(values)]
        c = _ordering_claim("mobile_detection_above_straight", mean, se, 1.0 / mrate, k, upper=False)
        c.note += f"; {int(censored.sum())} censored (counted at the horizon)"
        claims.append(c)
    return ScenarioResult(["check", "replicate", "value"], rows, claims,
                          {"turn_interval": turning.turn_interval})


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_DETECT_TOL = {"ks_coef": 1.63, "censor_se": 3.0}
_GRID = {"n_angles": 720, "n_speeds": 201}

SCENARIOS: dict[str, Scenario] = {s.name: s for s in [
    Scenario("area-coverage", run_area_coverage, {"replications": 400, "test_points": 500},
             {"times": [0.0, 1.0, 5.0], "window_side": None},
             {"abs_tol": 0.01, "invariance_se": 3.0},
             "instantaneous covered fraction at several times"),
    Scenario("interval-coverage", run_interval_coverage, {"replications": 200, "test_points": 1000},
             {"duration": 1.0, "window_side": None}, {"abs_tol": 0.01},
             "fraction covered at least once during [0, duration)"),
    Scenario("required-speed", run_required_speed, {},
             {"targets": None, "n_targets": 10, "max_target": 0.99, "durations": [0.5, 1.0, 2.0, 5.0, 10.0]},
             {"roundtrip": 1e-10}, "speed needed for a target interval coverage (round trip)"),
    Scenario("detect-static", run_detect_static, {"replications": 10_000}, {},
             {"rate_rel": 0.03, **_DETECT_TOL}, "detection time of a static intruder"),
    Scenario("durations", run_durations, {"replications": 400},
             {"default_horizon": 250.0},
             {"rate_rel": 0.03, "covered_rel": 0.03, "fraction_abs": 0.01},
             "covered and uncovered spell lengths at a fixed point"),
    Scenario("detect-sensing-time", run_detect_sensing_time,
             {"replications": 10_000, "intruder": {"sensing_time": 0.6}}, {},
             {"mean_rel": 0.03, **_DETECT_TOL}, "detection with a minimum sensing time"),
    Scenario("optimal-speed-sweep", run_optimal_speed_sweep,
             {"replications": 10_000, "intruder": {"sensing_time": 0.6}},
             {"speed_low": 0.3, "speed_high": 1.6, "n_speeds": 15},
             {"argmin_steps": 1.0, "analytic_abs": 1e-12}, "mean detection time across sensor speeds"),
    Scenario("detect-mobile", run_detect_mobile, {"replications": 10_000, "intruder": {"speed": 1.0}}, {},
             {"mean_rel": 0.03, "closed_form_abs": 1e-8, **_DETECT_TOL}, "detection of a moving intruder"),
    Scenario("game-best-response", run_game_best_response, {}, {"v_t_max": 0.5, **_GRID},
             {"bound_margin": 1e-6, "payoff_rel": 1e-6, "closed_form_abs": 1e-9},
             "intruder best response to a sensor heading law"),
    Scenario("game-equilibrium", run_game_equilibrium, {}, {"v_t_max": 1.0, "family": None, **_GRID},
             {"margin": 1e-6, "chain_abs": 1e-4}, "uniform headings vs a family of laws"),
    Scenario("straightline-optimality", run_straightline_optimality,
             {"replications": 200, "test_points": 1000},
             {"turn_interval": 0.2, "duration": 1.0, "detection_samples": 10_000, "horizon_factor": 20.0,
              "mobile_intruder_speed": 0.5},
             {"se_band": 3.0}, "turning sensors never beat straight lines"),
]}


def resolve(scenario: str, file_dict: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge scenario defaults < config file < CLI overrides and validate strictly."""
    from .config import deep_merge

    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}")
    spec = SCENARIOS[scenario]
    base = {"scenario": scenario, "params": dict(spec.params), "tolerances": dict(spec.tolerances),
            **{k: v for k, v in spec.defaults.items()}}
    merged = deep_merge(base, file_dict or {})
    if merged.get("scenario") != scenario:
        raise ConfigError("scenario", f"config is for {merged.get('scenario')!r}, not {scenario!r}")
    merged = deep_merge(merged, overrides or {})
    for section, allowed in (("params", spec.params), ("tolerances", spec.tolerances)):
        if not isinstance(merged.get(section), dict):
            raise ConfigError(section, "expected an object")
        for key in merged[section]:
            if key not in allowed:
                raise ConfigError(f"{section}.{key}", f"unknown key for scenario {scenario}")
    return ExperimentConfig.from_dict(merged)
