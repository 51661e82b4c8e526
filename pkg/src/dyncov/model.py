"""Domain types: network parameters, mobility laws, trajectories and intruders."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.special import i0e

TWO_PI = 2.0 * math.pi


def wrap_angle(theta):
    """Reduce an angle (or array of angles) into [0, 2*pi)."""
    wrapped = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def unit_vector(theta: float) -> tuple[float, float]:
    return (math.cos(theta), math.sin(theta))


# ---------------------------------------------------------------------------
# Speed laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedSpeed:
    value: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"speed must be finite and >= 0, got {self.value}")

    def mean(self) -> float:
        return float(self.value)

    @property
    def max_speed(self) -> float:
        return float(self.value)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, float(self.value))


@dataclass(frozen=True)
class UniformSpeed:
    low: float
    high: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise ValueError("speed bounds must be finite")
        if self.low < 0 or self.high < self.low:
            raise ValueError(f"need 0 <= low <= high, got [{self.low}, {self.high}]")

    def mean(self) -> float:
        return 0.5 * (self.low + self.high)

    @property
    def max_speed(self) -> float:
        return float(self.high)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.low, self.high, size)


@dataclass(frozen=True)
class DiscreteSpeed:
    values: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.values or len(self.values) != len(self.weights):
            raise ValueError("values and weights must be non-empty and of equal length")
        if any(not math.isfinite(v) or v < 0 for v in self.values):
            raise ValueError("speeds must be finite and >= 0")
        if any(w < 0 for w in self.weights) or abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")

    def mean(self) -> float:
        return math.fsum(v * w for v, w in zip(self.values, self.weights))

    @property
    def max_speed(self) -> float:
        return max(v for v, w in zip(self.values, self.weights) if w > 0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(np.asarray(self.values), size=size, p=np.asarray(self.weights))


SpeedDistribution = Union[FixedSpeed, UniformSpeed, DiscreteSpeed]


# ---------------------------------------------------------------------------
# Direction laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformDirection:
    """Directions drawn uniformly from [0, 2*pi)."""

    def density(self, theta):
        return np.full(np.shape(theta), 1.0 / TWO_PI) if np.ndim(theta) else 1.0 / TWO_PI

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return wrap_angle(rng.uniform(0.0, TWO_PI, size))

    def components(self) -> list[tuple[float, DirectionDistribution]]:
        return [(1.0, self)]


@dataclass(frozen=True)
class PointMass:
    """Every sensor heads in the same direction ``theta``."""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def density(self, theta):
        raise ValueError("a point-mass direction law has no density")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.theta)

    def components(self) -> list[tuple[float, DirectionDistribution]]:
        return [(1.0, self)]


@dataclass(frozen=True)
class VonMises:
    mu: float
    kappa: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.kappa)) or self.kappa < 0:
            raise ValueError("need finite mu and kappa >= 0")
        object.__setattr__(self, "mu", wrap_angle(self.mu))

    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        # i0e(k) = exp(-k) I0(k), so this stays finite for large kappa
        out = np.exp(self.kappa * (np.cos(theta - self.mu) - 1.0)) / (TWO_PI * i0e(self.kappa))
        return float(out) if out.ndim == 0 else out

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return wrap_angle(rng.vonmises(self.mu, self.kappa, size))

    def components(self) -> list[tuple[float, DirectionDistribution]]:
        return [(1.0, self)]


@dataclass(frozen=True)
class Mixture:
    """Finite mixture of direction laws, given as ``(weight, law)`` pairs."""

    parts: tuple[tuple[float, DirectionDistribution], ...]

    def __post_init__(self):
        parts = tuple((float(w), law) for w, law in self.parts)
        if not parts:
            raise ValueError("mixture needs at least one component")
        if any(w < 0 for w, _ in parts) or abs(math.fsum(w for w, _ in parts) - 1.0) > 1e-12:
            raise ValueError("mixture weights must be non-negative and sum to 1")
        object.__setattr__(self, "parts", parts)

    def components(self) -> list[tuple[float, DirectionDistribution]]:
        flat = []
        for w, law in self.parts:
            flat.extend((w * sub_w, sub) for sub_w, sub in law.components())
        return [(w, law) for w, law in flat if w > 0]

    def density(self, theta):
        comps = self.components()
        if any(isinstance(law, PointMass) for _, law in comps):
            raise ValueError("mixture with point-mass components has no density")
        return sum(w * np.asarray(law.density(theta)) for w, law in comps)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        comps = self.components()
        weights = np.array([w for w, _ in comps])
        which = rng.choice(len(comps), size=size, p=weights / weights.sum())
        out = np.empty(size)
        for k, (_, law) in enumerate(comps):
            mask = which == k
            out[mask] = law.sample(rng, int(mask.sum()))
        return out


DirectionDistribution = Union[UniformDirection, PointMass, VonMises, Mixture]


# ---------------------------------------------------------------------------
# Network and intruder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NetworkConfig:
    """Poisson Boolean model parameters plus the sensors' mobility laws.

    ``turn_interval`` is ``None`` for straight-line motion; otherwise every
    sensor re-draws its heading from ``direction_law`` at multiples of it.
    """

    density: float
    sensing_radius: float
    speed_law: SpeedDistribution = field(default_factory=lambda: FixedSpeed(1.0))
    direction_law: DirectionDistribution = field(default_factory=UniformDirection)
    turn_interval: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.density) and self.density >= 0):
            raise ValueError(f"density must be finite and >= 0, got {self.density}")
        if not (math.isfinite(self.sensing_radius) and self.sensing_radius > 0):
            raise ValueError(f"sensing_radius must be > 0, got {self.sensing_radius}")
        if self.turn_interval is not None and not self.turn_interval > 0:
            raise ValueError("turn_interval must be positive")

    @property
    def max_speed(self) -> float:
        return self.speed_law.max_speed

    @property
    def mean_speed(self) -> float:
        return self.speed_law.mean()


@dataclass(frozen=True)
class IntruderSpec:
    """A static (``speed == 0``) or straight-line mobile intruder.

    ``sensing_time`` is the minimum continuous dwell a single sensor needs to
    detect it; zero means detection on first contact.
    """

    speed: float = 0.0
    direction: float = 0.0
    sensing_time: float = 0.0
    max_speed: float = math.inf

    def __post_init__(self):
        if not (math.isfinite(self.speed) and self.speed >= 0):
            raise ValueError("intruder speed must be finite and >= 0")
        if self.speed > self.max_speed:
            raise ValueError(f"intruder speed {self.speed} exceeds max_speed {self.max_speed}")
        if not (math.isfinite(self.sensing_time) and self.sensing_time >= 0):
            raise ValueError("sensing_time must be finite and >= 0")
        object.__setattr__(self, "direction", wrap_angle(self.direction))

    @property
    def is_static(self) -> bool:
        return self.speed == 0.0

    @property
    def velocity(self) -> np.ndarray:
        return self.speed * np.array(unit_vector(self.direction))

    def speed_ratio(self, sensor_speed: float) -> float:
        return self.speed / sensor_speed


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    start_time: float
    direction: tuple[float, float]
    speed: float

    @property
    def velocity(self) -> np.ndarray:
        return self.speed * np.asarray(self.direction)


@dataclass(frozen=True)
class SensorTrack:
    """Piecewise-linear sensor trajectory starting at ``origin`` at t = 0."""

    origin: tuple[float, float]
    segments: tuple[Segment, ...]

    def __post_init__(self):
        origin = tuple(float(x) for x in self.origin)
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        if len(origin) != 2:
            raise ValueError("origin must be a 2D point")
        if not segs or segs[0].start_time != 0.0:
            raise ValueError("first segment must start at t = 0")
        starts = [s.start_time for s in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("segment start times must be strictly increasing")
        for s in segs:
            if s.speed < 0 or not math.isfinite(s.speed):
                raise ValueError("segment speeds must be finite and >= 0")
            if abs(math.hypot(*s.direction) - 1.0) > 1e-9:
                raise ValueError("segment directions must be unit vectors")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "segments", segs)

    @classmethod
    def straight(cls, origin: Sequence[float], theta: float, speed: float) -> SensorTrack:
        return cls(tuple(origin), (Segment(0.0, unit_vector(theta), speed),))

    @property
    def max_speed(self) -> float:
        return max(s.speed for s in self.segments)

    def vertices(self) -> np.ndarray:
        """Positions at each segment start time, shape (n_segments, 2)."""
        out = np.empty((len(self.segments), 2))
        pos = np.asarray(self.origin, dtype=float)
        out[0] = pos
        for k in range(1, len(self.segments)):
            prev = self.segments[k - 1]
            pos = pos + prev.velocity * (self.segments[k].start_time - prev.start_time)
            out[k] = pos
        return out

    def position(self, t: float) -> np.ndarray:
        return position_at(self, t)


def position_at(track: SensorTrack, t: float) -> np.ndarray:
    """Position of ``track`` at time ``t`` (extrapolates along the last segment)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    starts = [s.start_time for s in track.segments]
    k = int(np.searchsorted(starts, t, side="right")) - 1
    seg = track.segments[k]
    return track.vertices()[k] + seg.velocity * (t - seg.start_time)
