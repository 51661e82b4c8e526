"""Zero-sum sensor-vs-intruder mobility game.

The sensors pick a direction law, the intruder then picks a straight-line
speed and heading to maximise its expected detection time
``1 / (2 * density * radius * v_eff)``. Maximising that time is the same as
minimising the effective sensor speed ``v_eff``, which is what the search
below works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import analytic
from .model import TWO_PI, DirectionDistribution, PointMass, UniformDirection, wrap_angle

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
UNDETECTABLE = math.inf


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   rel_tol: float = 1e-6, abs_tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= rel_tol * max(abs(a), abs(b), 1.0) + abs_tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    # endpoints matter when the minimum sits on the boundary (e.g. v_t = 0)
    cands = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    fx, x = min(cands)
    return x, fx


@dataclass(frozen=True)
class GridSpec:
    n_angles: int = 720
    n_speeds: int = 201
    oversample: int = 8
    refine_rounds: int = 4
    rel_tol: float = 1e-6

    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_angles) / self.n_angles

    def speeds(self, v_max: float) -> np.ndarray:
        return np.linspace(0.0, v_max, self.n_speeds)


@dataclass(frozen=True)
class StrategyProfile:
    sensor_strategy: DirectionDistribution
    intruder_speed: float
    intruder_direction: float

    def effective_speed(self, sensor_speed: float) -> float:
        return analytic.effective_speed(self.sensor_strategy, self.intruder_direction,
                                        self.intruder_speed, sensor_speed)

    def payoff(self, density: float, radius: float, sensor_speed: float) -> float:
        return expected_detection_time(density, radius, self.effective_speed(sensor_speed))


@dataclass(frozen=True)
class BestResponse:
    direction: float
    speed: float
    min_effective_speed: float
    payoff: float

    @property
    def undetectable(self) -> bool:
        return math.isinf(self.payoff)


def expected_detection_time(density: float, radius: float, effective: float, eps: float = 1e-12) -> float:
    rate = analytic.mobile_detection_law(density, radius, effective)
    if rate <= eps * 2.0 * density * radius:
        return UNDETECTABLE
    return float(1.0 / rate)


def _grid_integrals(law: DirectionDistribution, c_values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Trapezoid values of the direction integral on the (speed ratio, angle) grid.

    Continuous components become a circular correlation of the density with
    the (even) relative-speed factor, done by FFT on an oversampled circle.
    """
    n_ang = grid.n_angles
    n = n_ang * grid.oversample
    nodes = TWO_PI * np.arange(n) / n
    theta_t = grid.angles()
    out = np.zeros((c_values.size, n_ang))
    w_nodes = np.stack([analytic.relative_speed_factor(nodes, c) for c in c_values])
    for weight, comp in law.components():
        if isinstance(comp, PointMass):
            for i, c in enumerate(c_values):
                out[i] += weight * analytic.relative_speed_factor(comp.theta - theta_t, c)
        elif isinstance(comp, UniformDirection):
            out += weight * w_nodes.mean(axis=1)[:, None]
        else:
            f_hat = np.fft.rfft(comp.density(nodes))
            corr = np.fft.irfft(np.fft.rfft(w_nodes, axis=1) * f_hat[None, :], n=n, axis=1)
            out += weight * (TWO_PI / n) * corr[:, ::grid.oversample]
    return out


def effective_speed_grid(law: DirectionDistribution, sensor_speed: float, v_t_max: float,
                         grid: GridSpec | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Effective sensor speed on the (intruder speed, intruder heading) grid."""
    grid = grid or GridSpec()
    speeds = grid.speeds(v_t_max)
    c = speeds / sensor_speed
    vals = sensor_speed * (1.0 + c)[:, None] * _grid_integrals(law, c, grid)
    return speeds, grid.angles(), vals


def best_response_intruder(sensor_law: DirectionDistribution, sensor_speed: float, v_t_max: float,
                           grid: GridSpec | None = None, *, density: float = 1.0,
                           radius: float = 0.5) -> BestResponse:
    """Intruder heading and speed in ``[0, v_t_max]`` that minimise the effective sensor speed.

    A grid scan picks the starting cell, coordinate-wise golden-section search
    refines it, and the co-moving point of every point-mass component is
    checked exactly since the objective has a cusp there.
    """
    if not sensor_speed > 0:
        raise ValueError("sensor_speed must be > 0")
    if not (v_t_max >= 0 and math.isfinite(v_t_max)):
        raise ValueError("v_t_max must be finite and >= 0")
    grid = grid or GridSpec()

    def objective(theta: float, v: float) -> float:
        return analytic.effective_speed(sensor_law, theta, v, sensor_speed)

    speeds, angles, vals = effective_speed_grid(sensor_law, sensor_speed, v_t_max, grid)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    theta, v = float(angles[j]), float(speeds[i])
    best = objective(theta, v)
    d_theta = TWO_PI / grid.n_angles
    d_v = speeds[1] - speeds[0] if speeds.size > 1 else 0.0

    for _ in range(grid.refine_rounds):
        prev = best
        if d_v > 0:
            v, best = golden_section(lambda x: objective(theta, x), max(0.0, v - d_v),
                                     min(v_t_max, v + d_v), grid.rel_tol)
        if v > 0:
            t, fb = golden_section(lambda x: objective(x, v), theta - d_theta, theta + d_theta, grid.rel_tol)
            if fb <= best:
                theta, best = wrap_angle(t), fb
        if prev - best <= grid.rel_tol * max(prev, 1e-300):
            break

    for _, comp in sensor_law.components():
        if isinstance(comp, PointMass):
            v_match = min(sensor_speed, v_t_max)
            val = objective(comp.theta, v_match)
            if val < best:
                theta, v, best = comp.theta, v_match, val

    best = max(float(best), 0.0)
    return BestResponse(float(wrap_angle(theta)), float(v), best,
                        expected_detection_time(density, radius, best))


def minimax_value(sensor_law: DirectionDistribution, sensor_speed: float, density: float, radius: float,
                  v_t_max: float, grid: GridSpec | None = None) -> float:
    """Expected detection time the intruder can guarantee against ``sensor_law``."""
    return best_response_intruder(sensor_law, sensor_speed, v_t_max, grid,
                                  density=density, radius=radius).payoff


@dataclass(frozen=True)
class HeadingAverage:
    """Both sides of the averaging step bounding any law by the uniform one."""

    intruder_speed: float
    min_over_headings: float
    mean_over_headings: float
    uniform_value: float


def heading_average_bound(law: DirectionDistribution, sensor_speed: float, intruder_speed: float,
                          grid: GridSpec | None = None) -> HeadingAverage:
    """Min over intruder headings, mean over headings, and the uniform-law value at one speed."""
    grid = grid or GridSpec()
    c = intruder_speed / sensor_speed
    row = sensor_speed * (1.0 + c) * _grid_integrals(law, np.array([c]), grid)[0]
    uniform = analytic.effective_speed(UniformDirection(), 0.0, intruder_speed, sensor_speed)
    return HeadingAverage(float(intruder_speed), float(row.min()), float(row.mean()), float(uniform))


@dataclass(frozen=True)
class LawResult:
    label: str
    law: DirectionDistribution
    response: BestResponse


@dataclass
class EquilibriumReport:
    sensor_speed: float
    v_t_max: float
    results: list[LawResult]
    uniform_index: int
    uniform_response_speed: float
    speed_tolerance: float
    margin: float = 1e-6
    bound_checks: list[tuple[str, HeadingAverage]] = field(default_factory=list)

    @property
    def uniform_value(self) -> float:
        return self.results[self.uniform_index].response.min_effective_speed

    @property
    def uniform_is_max(self) -> bool:
        """Uniform beats every other law's intruder-minimised effective speed by ``margin``."""
        u = self.uniform_value
        return all(r.response.min_effective_speed < u - self.margin
                   for k, r in enumerate(self.results) if k != self.uniform_index)

    @property
    def bound_holds(self) -> bool:
        u = self.uniform_value
        return all(r.response.min_effective_speed <= u + self.margin for r in self.results)

    @property
    def stationary_response(self) -> bool:
        return self.uniform_response_speed <= self.speed_tolerance

    @property
    def passed(self) -> bool:
        return self.uniform_is_max and self.stationary_response and self.bound_holds


def equilibrium_check(density: float, radius: float, sensor_speed: float, v_t_max: float,
                      law_family: Sequence[DirectionDistribution], grid: GridSpec | None = None,
                      margin: float = 1e-6) -> EquilibriumReport:
    """Check on a finite family that uniform headings are the sensors' best
    choice and that a stationary intruder is the best reply to them."""
    grid = grid or GridSpec()
    family = list(law_family)
    uniform_idx = next((k for k, law in enumerate(family) if isinstance(law, UniformDirection)), None)
    if uniform_idx is None:
        raise ValueError("law_family must include UniformDirection()")
    results = [LawResult(repr(law), law, best_response_intruder(law, sensor_speed, v_t_max, grid,
                                                                density=density, radius=radius))
               for law in family]
    speed_tol = v_t_max / (grid.n_speeds - 1) if grid.n_speeds > 1 else 0.0
    checks = []
    for law in family:
        for v in (0.25 * v_t_max, 0.5 * v_t_max, v_t_max):
            checks.append((repr(law), heading_average_bound(law, sensor_speed, v, grid)))
    return EquilibriumReport(sensor_speed, v_t_max, results, uniform_idx,
                             results[uniform_idx].response.speed, speed_tol, margin, checks)


def reference_family() -> list[DirectionDistribution]:
    from .model import Mixture, VonMises

    return [
        UniformDirection(),
        PointMass(0.0),
        VonMises(0.0, 2.0),
        VonMises(0.0, 8.0),
        Mixture(((0.5, PointMass(0.0)), (0.5, PointMass(math.pi / 2)))),
    ]
