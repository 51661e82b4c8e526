"""Monte Carlo estimators for coverage fractions, durations and detection times."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .. import analytic
from ..model import IntruderSpec, NetworkConfig
from .geometry import CoverageTimeline, Fleet, coverage_timeline, union_intervals
from .sampling import (
    SimulationWindow,
    break_times,
    radial_chunks,
    sample_disk_fleet_direct,
    sample_fleet,
)

_SENSOR_BLOCK = 400_000


class Estimate(NamedTuple):
    value: float
    se: float
    n: int


@dataclass(frozen=True)
class DetectionSample:
    value: float
    censored: bool

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("detection time must be >= 0")


def _binomial(hits: int, n: int) -> Estimate:
    p = hits / n
    return Estimate(p, math.sqrt(p * (1.0 - p) / n), n)


def estimate_area_coverage(config: NetworkConfig, t: float, n_points: int, rng: np.random.Generator,
                           window: SimulationWindow | None = None) -> Estimate:
    """Fraction of uniform test points covered at time ``t`` in one deployment.

    The standard error is binomial, i.e. conditional on the deployment.
    """
    if window is None:
        window = SimulationWindow.for_config(config, horizon=t)
    fleet = sample_fleet(config, window, rng, horizon=t)
    points = window.test_points(rng, n_points)
    if len(fleet) == 0:
        return Estimate(0.0, 0.0, n_points)
    tree = cKDTree(fleet.positions(t))
    dist, _ = tree.query(points, k=1, distance_upper_bound=config.sensing_radius * (1 + 1e-12))
    return _binomial(int(np.count_nonzero(dist <= config.sensing_radius)), n_points)


def _points_swept(fleet: Fleet, points: np.ndarray, radius: float, duration: float) -> np.ndarray:
    """Whether each point lies within ``radius`` of some track during ``[0, duration]``."""
    verts = fleet.vertices()
    live = fleet.breaks < duration
    live[0] = True
    seg_start = verts[:, live].reshape(-1, 2)
    ends_t = np.minimum(np.append(fleet.breaks[1:], math.inf), duration)[live]
    seg_vec = (fleet.velocities[:, live] * (ends_t - fleet.breaks[live])[None, :, None]).reshape(-1, 2)
    # segments that cannot come within radius of the window are irrelevant
    tree = cKDTree(points)
    reach = np.sqrt((seg_vec**2).sum(axis=1)) + radius
    covered = np.zeros(points.shape[0], dtype=bool)
    seg_len2 = (seg_vec**2).sum(axis=1)
    for s0, d, l2, rr in zip(seg_start, seg_vec, seg_len2, reach):
        cand = tree.query_ball_point(s0, rr)
        if not cand:
            continue
        cand = np.asarray(cand)
        rel = points[cand] - s0
        u = np.clip(rel @ d / l2, 0.0, 1.0) if l2 > 0 else np.zeros(cand.size)
        near = ((rel - u[:, None] * d) ** 2).sum(axis=1) <= radius * radius
        covered[cand[near]] = True
    return covered


def estimate_interval_coverage(config: NetworkConfig, duration: float, n_points: int,
                               rng: np.random.Generator, window: SimulationWindow | None = None) -> Estimate:
    """Fraction of test points covered at least once during ``[0, duration)``.

    Coverage is decided by exact point-to-segment distances along each
    sensor's polyline, which is the same as asking whether the point's
    coverage timeline has a spell starting before ``duration``.
    """
    if window is None:
        window = SimulationWindow.for_config(config, horizon=duration)
    fleet = sample_fleet(config, window, rng, horizon=duration)
    points = window.test_points(rng, n_points)
    if len(fleet) == 0:
        return Estimate(0.0, 0.0, n_points)
    hits = _points_swept(fleet, points, config.sensing_radius, duration)
    return _binomial(int(hits.sum()), n_points)


def sample_point_timeline(config: NetworkConfig, horizon: float, rng: np.random.Generator) -> CoverageTimeline:
    """Coverage history of the origin over ``[0, horizon]`` in a fresh deployment.

    Only sensors within ``r + v_max * horizon`` can ever reach the origin, so
    they are the only ones deployed. Large disks are processed in blocks.
    """
    reach = config.sensing_radius + config.max_speed * horizon
    fleet = sample_disk_fleet_direct(config, (0.0, 0.0), reach, rng, horizon)
    starts, ends = [], []
    for lo in range(0, len(fleet), _SENSOR_BLOCK):
        part = Fleet(fleet.origins[lo:lo + _SENSOR_BLOCK], fleet.breaks,
                     fleet.velocities[lo:lo + _SENSOR_BLOCK])
        _, s, e = part.contact_intervals((0.0, 0.0), config.sensing_radius, horizon)
        starts.append(s)
        ends.append(e)
    if not starts:
        return coverage_timeline((0.0, 0.0), fleet, config.sensing_radius, horizon)
    return CoverageTimeline((0.0, 0.0), union_intervals(np.concatenate(starts), np.concatenate(ends)),
                            float(horizon))


def default_detection_horizon(config: NetworkConfig, intruder: IntruderSpec, factor: float = 10.0) -> float:
    """``t_d + factor / predicted_rate`` for straight-line sensors at their mean speed."""
    vs = config.mean_speed
    r = config.sensing_radius
    if intruder.sensing_time > 0:
        law = analytic.sensing_time_law(config.density, r, vs, intruder.sensing_time)
        return intruder.sensing_time + factor / law.rate
    if intruder.is_static:
        rate = analytic.static_detection_law(config.density, r, vs)
    else:
        eff = analytic.effective_speed(config.direction_law, intruder.direction, intruder.speed, vs)
        rate = analytic.mobile_detection_law(config.density, r, eff)
    if rate == 0:
        raise analytic.NeverDetected("predicted detection rate is zero")
    return factor / rate


def detection_reach(config: NetworkConfig, intruder: IntruderSpec, horizon: float) -> float:
    return config.sensing_radius + (config.max_speed + intruder.speed) * horizon


def fleet_detection_time(fleet: Fleet, intruder: IntruderSpec, radius: float, horizon: float) -> float:
    """Earliest detection of an intruder starting at the origin by any sensor of ``fleet``.

    Returns ``inf`` when nothing detects it by ``horizon``. Works in the
    intruder's frame; with a dwell requirement a single sensor has to keep
    continuous contact for ``sensing_time``.
    """
    dwell = intruder.sensing_time
    _, start, end = fleet.contact_intervals((0.0, 0.0), radius, horizon, intruder.velocity,
                                            keep_tangent=dwell == 0)
    if dwell > 0:
        start = start[end - start >= dwell]
    if start.size == 0:
        return math.inf
    t = float(start.min()) + dwell
    return t if t <= horizon else math.inf


def sample_detection_time(config: NetworkConfig, intruder: IntruderSpec, horizon: float,
                          rng: np.random.Generator, reach: float | None = None,
                          max_redraws: int = 10_000) -> DetectionSample:
    """One detection time for an intruder that starts uncovered at the origin.

    Deployments covering the intruder at t = 0 are discarded and redrawn,
    each attempt from its own child stream. Sensors are generated outward
    from the intruder and generation stops once no farther sensor could
    beat the current detection time; the result equals processing every
    sensor within ``reach`` (default ``r + (v_max + v_t) * horizon``).
    """
    if not horizon > 0:
        raise ValueError("horizon must be > 0")
    r = config.sensing_radius
    if reach is None:
        reach = detection_reach(config, intruder, horizon)
    closing = config.max_speed + intruder.speed
    breaks = break_times(config, horizon)
    dwell = intruder.sensing_time
    if config.density == 0:
        return DetectionSample(float(horizon), True)
    target = math.pi * reach * reach
    for _ in range(max_redraws):
        attempt = np.random.default_rng(rng.integers(1 << 63))
        chunks = radial_chunks(config, (0.0, 0.0), attempt, breaks.size)
        areas, origins, vel = next(chunks)
        if areas[0] <= math.pi * r * r:
            continue
        best = math.inf
        while True:
            keep = areas <= target
            if keep.any():
                fleet = Fleet(origins[keep], breaks, vel[keep])
                best = min(best, fleet_detection_time(fleet, intruder, r, horizon))
            if areas[-1] > target:
                break
            if closing == 0:
                break
            nearest_next = math.sqrt(areas[-1] / math.pi)
            if (nearest_next - r) / closing + dwell >= best:
                break
            areas, origins, vel = next(chunks)
        if math.isinf(best):
            return DetectionSample(float(horizon), True)
        return DetectionSample(best, False)
    raise RuntimeError("could not draw a deployment leaving the intruder uncovered")
