"""Poisson deployment of mobile sensors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..model import NetworkConfig, SensorTrack
from .geometry import Fleet

_CHUNK = 128


@dataclass(frozen=True)
class SimulationWindow:
    """Square observation region of side ``side`` centred at the origin.

    Sensors are deployed over the square grown by ``margin`` on every side;
    with ``margin = r + v_max * horizon`` every sensor that can reach the
    observation region before ``horizon`` is present.
    """

    side: float
    margin: float

    def __post_init__(self):
        if not self.side > 0 or not self.margin >= 0:
            raise ValueError("need side > 0 and margin >= 0")

    @classmethod
    def for_config(cls, config: NetworkConfig, horizon: float, side: float | None = None) -> SimulationWindow:
        if side is None:
            side = 20.0 * config.sensing_radius
        return cls(side, config.sensing_radius + config.max_speed * horizon)

    @property
    def half_extent(self) -> float:
        return 0.5 * self.side + self.margin

    @property
    def deployment_area(self) -> float:
        return (2.0 * self.half_extent) ** 2

    def test_points(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(-0.5 * self.side, 0.5 * self.side, size=(n, 2))


def break_times(config: NetworkConfig, horizon: float) -> np.ndarray:
    if config.turn_interval is None or not math.isfinite(horizon):
        return np.zeros(1)
    n = max(1, math.ceil(horizon / config.turn_interval))
    return config.turn_interval * np.arange(n)


def _velocities(config: NetworkConfig, rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    speeds = config.speed_law.sample(rng, n)
    headings = config.direction_law.sample(rng, n * k).reshape(n, k)
    return speeds[:, None, None] * np.stack([np.cos(headings), np.sin(headings)], axis=-1)


def sample_fleet(config: NetworkConfig, window: SimulationWindow, rng: np.random.Generator,
                 horizon: float | None = None) -> Fleet:
    """Deploy a Poisson number of sensors uniformly over the expanded window."""
    if horizon is None:
        vmax = config.max_speed
        horizon = (window.margin - config.sensing_radius) / vmax if vmax > 0 else 0.0
    breaks = break_times(config, horizon)
    n = int(rng.poisson(config.density * window.deployment_area))
    h = window.half_extent
    origins = rng.uniform(-h, h, size=(n, 2))
    return Fleet(origins, breaks, _velocities(config, rng, n, breaks.size))


def sample_configuration(config: NetworkConfig, window: SimulationWindow,
                         rng: np.random.Generator, horizon: float | None = None) -> list[SensorTrack]:
    return sample_fleet(config, window, rng, horizon).to_tracks()


def radial_chunks(config: NetworkConfig, center, rng: np.random.Generator, n_breaks: int,
                  chunk: int = _CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Endless stream of sensor chunks in increasing distance from ``center``.

    Yields ``(enclosed_area, origins, velocities)``. The enclosed area grows by
    exponential increments of mean ``1 / density``, which generates the
    Poisson process outward; each chunk consumes the generator identically.
    """
    center = np.asarray(center, dtype=float)
    area = 0.0
    while True:
        areas = area + np.cumsum(rng.exponential(1.0 / config.density, chunk))
        phi = rng.uniform(0.0, 2.0 * math.pi, chunk)
        vel = _velocities(config, rng, chunk, n_breaks)
        rho = np.sqrt(areas / math.pi)
        yield areas, center + np.column_stack([rho * np.cos(phi), rho * np.sin(phi)]), vel
        area = float(areas[-1])


def sample_disk_fleet(config: NetworkConfig, center, radius: float, rng: np.random.Generator,
                      horizon: float) -> Fleet:
    """Deploy sensors in the disk ``|x - center| <= radius`` in order of distance.

    Two calls with equally seeded generators and different radii agree on
    every sensor inside the smaller disk, which lets speed sweeps share
    their random configurations.
    """
    breaks = break_times(config, horizon)
    k = breaks.size
    if config.density == 0 or radius <= 0:
        return Fleet(np.zeros((0, 2)), breaks, np.zeros((0, k, 2)))
    target = math.pi * radius * radius
    origins, vels = [], []
    for areas, orig, vel in radial_chunks(config, center, rng, k):
        keep = areas <= target
        origins.append(orig[keep])
        vels.append(vel[keep])
        if areas[-1] > target:
            break
    return Fleet(np.concatenate(origins), breaks, np.concatenate(vels))


def sample_disk_fleet_direct(config: NetworkConfig, center, radius: float,
                             rng: np.random.Generator, horizon: float) -> Fleet:
    """Poisson count plus i.i.d. uniform positions in a disk; faster for large disks."""
    breaks = break_times(config, horizon)
    n = int(rng.poisson(config.density * math.pi * radius * radius))
    rho = radius * np.sqrt(rng.uniform(size=n))
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    origins = np.asarray(center, dtype=float) + np.column_stack([rho * np.cos(phi), rho * np.sin(phi)])
    return Fleet(origins, breaks, _velocities(config, rng, n, breaks.size))
