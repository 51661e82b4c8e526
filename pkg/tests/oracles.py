"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code: closed forms are
re-typed from their definitions with ``math``, and the geometry oracle is a
plain time-stepping simulation.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special


def area_coverage(density, radius):
    return 1.0 - math.exp(-density * math.pi * radius**2)


def interval_coverage(density, radius, speed, duration):
    return 1.0 - math.exp(-density * (math.pi * radius**2 + 2.0 * radius * speed * duration))


def uniform_effective_speed(v_t, v_s):
    """Mean relative speed against uniformly-headed sensors, via the complete elliptic integral.

    E|v_s e(Θ) - v_t e(0)| = (2/π)(v_s + v_t) E(m), m = 4 v_s v_t / (v_s + v_t)^2.
    """
    if v_t == 0:
        return v_s
    m = 4.0 * v_s * v_t / (v_s + v_t) ** 2
    return 2.0 / math.pi * (v_s + v_t) * float(special.ellipe(m))


def relative_speed_by_cosines(theta_s, theta_t, v_t, v_s):
    return math.sqrt(max(v_s**2 + v_t**2 - 2 * v_s * v_t * math.cos(theta_s - theta_t), 0.0))


def mean_relative_speed(density_fn, theta_t, v_t, v_s):
    """∫ |v_s e(θ) - v_t e(θ_t)| f(θ) dθ by adaptive quadrature (scipy.quad)."""
    val, _ = integrate.quad(
        lambda th: relative_speed_by_cosines(th, theta_t, v_t, v_s) * density_fn(th),
        0.0, 2 * math.pi, points=[theta_t % (2 * math.pi)], limit=400, epsabs=1e-13, epsrel=1e-12)
    return val


def track_positions(origin, segments, times):
    """Positions of a piecewise-linear track at ``times``.

    ``segments`` is a list of ``(start_time, (ux, uy), speed)``.
    """
    times = np.asarray(times, dtype=float)
    pos = np.tile(np.asarray(origin, dtype=float), (times.size, 1))
    for k, (t0, (ux, uy), speed) in enumerate(segments):
        t1 = segments[k + 1][0] if k + 1 < len(segments) else math.inf
        dt = np.clip(times - t0, 0.0, t1 - t0)
        pos[:, 0] += speed * ux * dt
        pos[:, 1] += speed * uy * dt
    return pos


def brute_force_intervals(point, tracks, radius, horizon, dt=1e-4):
    """Covered intervals of ``point`` found by checking every multiple of ``dt``.

    ``tracks`` is a list of ``(origin, segments)`` pairs. Returns the grid
    times where coverage starts and stops, as an (m, 2) array.
    """
    times = np.arange(0.0, horizon + 0.5 * dt, dt)
    covered = np.zeros(times.size, dtype=bool)
    p = np.asarray(point, dtype=float)
    for origin, segments in tracks:
        pos = track_positions(origin, segments, times)
        covered |= np.hypot(pos[:, 0] - p[0], pos[:, 1] - p[1]) <= radius
    edges = np.diff(covered.astype(np.int8))
    starts = list(times[1:][edges == 1])
    ends = list(times[:-1][edges == -1])
    if covered[0]:
        starts.insert(0, 0.0)
    if covered[-1]:
        ends.append(times[-1])
    return np.column_stack([starts, ends]) if starts else np.zeros((0, 2))


def random_fixture(rng, max_sensors=5, horizon=6.0, radius=0.5):
    """A few sensors aimed roughly at the origin, some of them turning once or twice."""
    tracks = []
    for _ in range(int(rng.integers(1, max_sensors + 1))):
        start = rng.uniform(-3.0, 3.0, size=2)
        aim = math.atan2(-start[1], -start[0]) + rng.uniform(-0.4, 0.4)
        speed = rng.uniform(0.5, 2.0)
        segs = [(0.0, (math.cos(aim), math.sin(aim)), speed)]
        t = 0.0
        for _ in range(int(rng.integers(0, 3))):
            t += rng.uniform(0.5, 2.0)
            heading = rng.uniform(0.0, 2 * math.pi)
            segs.append((t, (math.cos(heading), math.sin(heading)), rng.uniform(0.2, 2.0)))
        tracks.append((tuple(start), segs))
    return tracks, horizon, radius
