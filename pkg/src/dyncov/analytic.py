"""Closed-form coverage and detection-time results for mobile sensor networks.

Everything here is a pure function of its arguments. Laws that involve a
direction density (mobile intruders) go through a composite Simpson rule in
the intruder-relative angle, so the only non-smooth point of the relative
speed factor sits on the integration endpoints.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .model import TWO_PI, DirectionDistribution, PointMass, UniformDirection, VonMises

QUAD_PANELS = 4096
QUAD_TOL = 1e-9
QUAD_MAX_PANELS = 1 << 18


class NeverDetected(ValueError):
    """The requested configuration can never detect the intruder."""


class QuadratureError(ArithmeticError):
    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (estimated error {error_estimate:.3g})")
        self.error_estimate = error_estimate


class CoverageSummary(NamedTuple):
    area: float
    interval: float
    time_fraction: float


class DurationSummary(NamedTuple):
    mean_uncovered: float
    mean_covered: float
    mean_cycle: float


class SensingTimeLaw(NamedTuple):
    effective_radius: float
    rate: float
    mean_detection: float


class OptimalSpeed(NamedTuple):
    speed: float
    mean_detection: float


def _nonneg(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not value >= 0 or math.isnan(value):
            raise ValueError(f"{name} must be >= 0, got {value}")


def _positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")


# ---------------------------------------------------------------------------
# Area coverage
# ---------------------------------------------------------------------------


def area_coverage(density: float, radius: float) -> float:
    """Fraction of the plane covered at any single instant."""
    _nonneg(density=density, radius=radius)
    return -math.expm1(-density * math.pi * radius**2)


def interval_coverage_straight(density: float, radius: float, mean_speed: float, duration: float) -> float:
    """Fraction of the plane covered at least once during a window of ``duration``,
    for sensors moving in straight lines with average speed ``mean_speed``."""
    _nonneg(density=density, radius=radius, mean_speed=mean_speed, duration=duration)
    # same association as area_coverage so interval >= area coverage holds bit-for-bit
    exponent = density * math.pi * radius**2 + 2.0 * density * radius * mean_speed * duration
    return -math.expm1(-exponent)


def time_coverage(density: float, radius: float) -> float:
    """Long-run fraction of time a fixed point is covered."""
    return area_coverage(density, radius)


def coverage_summary(density: float, radius: float, mean_speed: float, duration: float) -> CoverageSummary:
    area = area_coverage(density, radius)
    return CoverageSummary(area, interval_coverage_straight(density, radius, mean_speed, duration), area)


def required_speed(density: float, radius: float, target_fraction: float, duration: float) -> float:
    """Mean straight-line speed needed to cover ``target_fraction`` of the area within ``duration``."""
    _positive(density=density, radius=radius, duration=duration)
    initial = area_coverage(density, radius)
    if not target_fraction < 1.0:
        raise ValueError("target_fraction must be < 1")
    # allow a couple of ulps of slack so the threshold itself round-trips to 0
    if target_fraction < initial - 4 * math.ulp(initial):
        raise ValueError(
            f"target_fraction {target_fraction} is below the instantaneous coverage {initial}"
        )
    numerator = density * math.pi * radius**2 + math.log1p(-target_fraction)
    return max(0.0, -numerator / (2.0 * density * radius * duration))


# ---------------------------------------------------------------------------
# Stationary intruder
# ---------------------------------------------------------------------------


def static_detection_law(density: float, radius: float, mean_speed: float) -> float:
    """Rate of the exponential detection time of an initially uncovered static intruder."""
    _nonneg(density=density, radius=radius, mean_speed=mean_speed)
    return 2.0 * density * radius * mean_speed


def duration_summary(density: float, radius: float, speed: float) -> DurationSummary:
    """Mean lengths of the uncovered gaps, covered spells and full cycles at a point."""
    _positive(density=density, radius=radius)
    if not speed > 0:
        raise ValueError("durations are undefined for stationary sensors")
    rate = static_detection_law(density, radius, speed)
    exponent = density * math.pi * radius**2
    return DurationSummary(
        mean_uncovered=1.0 / rate,
        mean_covered=math.expm1(exponent) / rate,
        mean_cycle=math.exp(exponent) / rate,
    )


def effective_radius(radius: float, speed: float, sensing_time: float) -> float:
    _nonneg(radius=radius, speed=speed, sensing_time=sensing_time)
    half_chord = 0.5 * speed * sensing_time
    if half_chord >= radius:
        return 0.0
    return math.sqrt((radius - half_chord) * (radius + half_chord))


def sensing_time_law(density: float, radius: float, speed: float, sensing_time: float) -> SensingTimeLaw:
    """Detection law when a sensor must stay in range for ``sensing_time``.

    Detection time is ``sensing_time + T`` with ``T`` exponential at the rate
    returned here. Raises :class:`NeverDetected` once a full diameter crossing
    is shorter than the required dwell.
    """
    _positive(density=density, radius=radius, speed=speed)
    _nonneg(sensing_time=sensing_time)
    if speed * sensing_time >= 2.0 * radius:
        raise NeverDetected(
            f"dwell {sensing_time} at speed {speed} needs a chord of {speed * sensing_time}, "
            f"longer than the sensing diameter {2 * radius}"
        )
    reduced = effective_radius(radius, speed, sensing_time)
    rate = static_detection_law(density, reduced, speed)
    return SensingTimeLaw(reduced, rate, sensing_time + 1.0 / rate)


def optimal_speed(density: float, radius: float, sensing_time: float) -> OptimalSpeed:
    """Sensor speed minimising the expected detection time under a dwell requirement."""
    _positive(density=density, radius=radius)
    if not sensing_time > 0:
        raise ValueError("sensing_time must be > 0; without it faster is always better")
    speed = math.sqrt(2.0) * radius / sensing_time
    k = 2.0 * density * radius**2
    return OptimalSpeed(speed, (1.0 + k) * sensing_time / k)


# ---------------------------------------------------------------------------
# Mobile intruder
# ---------------------------------------------------------------------------


def relative_speed_factor(u, c: float):
    """Relative sensor/intruder speed divided by ``v_s * (1 + c)``.

    ``u`` is the angle between sensor and intruder headings, ``c = v_t / v_s``.
    """
    if c < 0:
        raise ValueError("speed ratio must be >= 0")
    k = 4.0 * c / (1.0 + c) ** 2
    # 1 - k cos^2 = (1 - k) + k sin^2 avoids cancellation near the co-moving cusp
    s = np.sin(0.5 * np.asarray(u, dtype=float))
    out = np.sqrt(np.maximum((1.0 - k) + k * s * s, 0.0))
    return float(out) if out.ndim == 0 else out


def _simpson(values: np.ndarray, h: float) -> float:
    return h / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum())


def _relative_integral(law: DirectionDistribution, theta_t: float, c: float,
                       panels: int, tol: float) -> tuple[float, float]:
    """Integral of w(u) f(u + theta_t) over u in [0, 2*pi) with a Richardson error estimate."""
    n = panels
    if isinstance(law, VonMises) and law.kappa > 0:
        # a concentrated density needs several nodes per angular standard deviation
        # or both Simpson levels can miss the peak and agree on ~0
        while n < 8 * TWO_PI * math.sqrt(law.kappa):
            n *= 2
    while True:
        u = np.linspace(0.0, TWO_PI, n + 1)
        g = relative_speed_factor(u, c) * law.density(u + theta_t)
        fine = _simpson(g, TWO_PI / n)
        coarse = _simpson(g[::2], 2 * TWO_PI / n)
        err = abs(fine - coarse) / 15.0
        if err <= tol:
            return fine + (fine - coarse) / 15.0, err
        if n >= QUAD_MAX_PANELS:
            raise QuadratureError("effective-speed quadrature did not converge", err)
        n *= 2


def direction_integral(law: DirectionDistribution, theta_t: float, c: float,
                       panels: int = QUAD_PANELS, tol: float = QUAD_TOL) -> float:
    """The integral of w(theta - theta_t) against the direction law.

    Point-mass components are evaluated exactly and uniform components use
    the fact that the integral does not depend on ``theta_t``.
    """
    total = 0.0
    uniform_value = None
    for weight, comp in law.components():
        if isinstance(comp, PointMass):
            total += weight * relative_speed_factor(comp.theta - theta_t, c)
            continue
        if isinstance(comp, UniformDirection):
            if uniform_value is None:
                uniform_value, _ = _relative_integral(comp, 0.0, c, panels, tol)
            total += weight * uniform_value
            continue
        value, _ = _relative_integral(comp, theta_t, c, panels, tol)
        total += weight * value
    return total


def effective_speed(direction_law: DirectionDistribution, intruder_direction: float,
                    intruder_speed: float, sensor_speed: float) -> float:
    """Mean sensor speed as seen from an intruder moving in a straight line."""
    _positive(sensor_speed=sensor_speed)
    _nonneg(intruder_speed=intruder_speed)
    c = intruder_speed / sensor_speed
    return sensor_speed * (1.0 + c) * direction_integral(direction_law, intruder_direction, c)


def mobile_detection_law(density: float, radius: float, effective: float) -> float:
    """Exponential detection rate for a mobile intruder; zero means never detected."""
    return static_detection_law(density, radius, effective)


def mean_detection_time(rate: float) -> float:
    return math.inf if rate == 0 else 1.0 / rate
