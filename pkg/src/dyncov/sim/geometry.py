"""Exact contact geometry between piecewise-linear sensor tracks and a point.

A sensor covers a point while ``|p(t) - x| <= r``. On each linear segment
that is a quadratic in ``t``, so contact intervals, first hit times and
coverage timelines are all computed in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..model import Segment, SensorTrack


@dataclass(frozen=True)
class Fleet:
    """Array form of many tracks sharing common segment start times.

    ``breaks`` has shape (k,) with ``breaks[0] == 0``; ``origins`` is (n, 2);
    ``velocities`` is (n, k, 2) with row ``j`` active on
    ``[breaks[j], breaks[j + 1])`` and the last row extending forever.
    """

    origins: np.ndarray
    breaks: np.ndarray
    velocities: np.ndarray

    def __post_init__(self):
        if self.breaks.ndim != 1 or self.breaks.size == 0 or self.breaks[0] != 0.0:
            raise ValueError("breaks must be 1D and start at 0")
        if self.velocities.shape != (self.origins.shape[0], self.breaks.size, 2):
            raise ValueError("velocities must have shape (n, k, 2)")

    def __len__(self) -> int:
        return self.origins.shape[0]

    @classmethod
    def straight(cls, origins: np.ndarray, velocities: np.ndarray) -> Fleet:
        origins = np.asarray(origins, dtype=float).reshape(-1, 2)
        return cls(origins, np.zeros(1), np.asarray(velocities, dtype=float).reshape(-1, 1, 2))

    @classmethod
    def from_tracks(cls, tracks: Sequence[SensorTrack]) -> Fleet:
        tracks = list(tracks)
        if not tracks:
            return cls(np.zeros((0, 2)), np.zeros(1), np.zeros((0, 1, 2)))
        breaks = np.unique(np.concatenate([[s.start_time for s in t.segments] for t in tracks]))
        vel = np.empty((len(tracks), breaks.size, 2))
        for i, track in enumerate(tracks):
            starts = [s.start_time for s in track.segments]
            active = np.searchsorted(starts, breaks, side="right") - 1
            seg_vel = np.array([s.velocity for s in track.segments])
            vel[i] = seg_vel[active]
        origins = np.array([t.origin for t in tracks], dtype=float)
        return cls(origins, breaks, vel)

    def to_tracks(self) -> list[SensorTrack]:
        tracks = []
        for i in range(len(self)):
            segs = []
            for j, t0 in enumerate(self.breaks):
                v = self.velocities[i, j]
                speed = float(math.hypot(*v))
                direction = (1.0, 0.0) if speed == 0 else (float(v[0] / speed), float(v[1] / speed))
                segs.append(Segment(float(t0), direction, speed))
            tracks.append(SensorTrack(tuple(self.origins[i]), tuple(segs)))
        return tracks

    def vertices(self) -> np.ndarray:
        """Positions at each break time, shape (n, k, 2)."""
        out = np.empty_like(self.velocities)
        out[:, 0] = self.origins
        if self.breaks.size > 1:
            steps = self.velocities[:, :-1] * np.diff(self.breaks)[None, :, None]
            out[:, 1:] = self.origins[:, None, :] + np.cumsum(steps, axis=1)
        return out

    def positions(self, t: float) -> np.ndarray:
        if t < 0:
            raise ValueError("t must be >= 0")
        j = int(np.searchsorted(self.breaks, t, side="right")) - 1
        if j == 0:
            return self.origins + self.velocities[:, 0] * t
        return self.vertices()[:, j] + self.velocities[:, j] * (t - self.breaks[j])

    @property
    def max_speed(self) -> float:
        if len(self) == 0:
            return 0.0
        return float(np.sqrt((self.velocities**2).sum(axis=-1)).max())

    def contact_intervals(self, point, radius: float, horizon: float = math.inf,
                          offset=(0.0, 0.0), keep_tangent: bool = False):
        """Per-sensor closed intervals during which the sensor covers ``point``.

        ``offset`` is the point's own velocity: the point sits at
        ``point + offset * t`` (the intruder frame). Intervals of one sensor
        that touch at a segment boundary are joined, so each returned interval
        is a maximal continuous contact. Returns ``(sensor, start, end)``
        arrays ordered by sensor then time, clipped to ``[0, horizon]``.
        """
        n = len(self)
        empty = (np.zeros(0, dtype=int), np.zeros(0), np.zeros(0))
        if n == 0:
            return empty
        offset = np.asarray(offset, dtype=float)
        seg_end = np.append(self.breaks[1:], math.inf)
        live = self.breaks <= horizon
        breaks, seg_end = self.breaks[live], np.minimum(seg_end[live], horizon)
        verts = self.vertices()[:, live]
        rel_pos = verts - np.asarray(point, dtype=float) - offset * breaks[None, :, None]
        rel_vel = self.velocities[:, live] - offset

        a = np.einsum("nkd,nkd->nk", rel_vel, rel_vel)
        b = np.einsum("nkd,nkd->nk", rel_pos, rel_vel)
        c = np.einsum("nkd,nkd->nk", rel_pos, rel_pos) - radius * radius
        disc = b * b - a * c
        moving = a > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            root = np.sqrt(np.where(disc >= 0, disc, 0.0))
            tau_in = np.where(moving, (-b - root) / np.where(moving, a, 1.0), -math.inf)
            tau_out = np.where(moving, (-b + root) / np.where(moving, a, 1.0), math.inf)
        hit = np.where(moving, disc >= 0, c <= 0)
        start = np.maximum(breaks[None, :] + tau_in, breaks[None, :])
        end = np.minimum(breaks[None, :] + tau_out, seg_end[None, :])
        hit &= start <= end
        if not keep_tangent:
            hit &= start < end
        sensor, seg = np.nonzero(hit)
        if sensor.size == 0:
            return empty
        start, end = start[sensor, seg], end[sensor, seg]
        if breaks.size > 1:
            sensor, start, end = _join_touching(sensor, start, end)
        return sensor, start, end

    def first_hit_times(self, point, radius: float, horizon: float = math.inf,
                        offset=(0.0, 0.0)) -> np.ndarray:
        """Earliest contact time per sensor (``inf`` when the sensor never gets in range)."""
        sensor, start, _ = self.contact_intervals(point, radius, horizon, offset, keep_tangent=True)
        out = np.full(len(self), math.inf)
        np.minimum.at(out, sensor, start)
        return out


def _join_touching(sensor, start, end, eps: float = 1e-12):
    new = np.ones(sensor.size, dtype=bool)
    scale = np.maximum(1.0, np.abs(end[:-1]))
    new[1:] = (sensor[1:] != sensor[:-1]) | (start[1:] > end[:-1] + eps * scale)
    idx = np.flatnonzero(new)
    return sensor[idx], start[idx], np.maximum.reduceat(end, idx)


def as_fleet(tracks) -> Fleet:
    return tracks if isinstance(tracks, Fleet) else Fleet.from_tracks(tracks)


def first_hit_time(track: SensorTrack, point, radius: float,
                   relative_velocity_offset=(0.0, 0.0)) -> float | None:
    """Earliest ``t >= 0`` at which ``track`` is within ``radius`` of a point
    moving with velocity ``relative_velocity_offset`` from ``point``.

    Returns 0 when the point starts inside the disk and ``None`` when no
    segment ever reaches it. A tangential touch counts as a hit.
    """
    t = Fleet.from_tracks([track]).first_hit_times(point, radius, offset=relative_velocity_offset)[0]
    return None if math.isinf(t) else float(t)


def union_intervals(starts, ends) -> np.ndarray:
    """Union of closed intervals as a sorted (m, 2) array of disjoint pieces."""
    starts = np.asarray(starts, dtype=float)
    ends = np.asarray(ends, dtype=float)
    if starts.size == 0:
        return np.zeros((0, 2))
    order = np.argsort(starts, kind="stable")
    s, e = starts[order], ends[order]
    reach = np.maximum.accumulate(e)
    new = np.ones(s.size, dtype=bool)
    new[1:] = s[1:] > reach[:-1]
    idx = np.flatnonzero(new)
    return np.column_stack([s[idx], np.maximum.reduceat(e, idx)])


def merge_intervals(intervals: Iterable[tuple[float, float]]) -> np.ndarray:
    arr = np.asarray(list(intervals), dtype=float).reshape(-1, 2)
    return union_intervals(arr[:, 0], arr[:, 1])


@dataclass(frozen=True)
class CoverageTimeline:
    """Covered spells of a fixed point over ``[0, horizon]``."""

    point: tuple[float, float]
    intervals: np.ndarray
    horizon: float

    @property
    def covered_time(self) -> float:
        return float((self.intervals[:, 1] - self.intervals[:, 0]).sum())

    @property
    def covered_fraction(self) -> float:
        return self.covered_time / self.horizon

    def gaps(self) -> np.ndarray:
        """Uncovered spells as an (m, 2) array, including the censored ends."""
        edges = np.concatenate([[0.0], self.intervals.ravel(), [self.horizon]]).reshape(-1, 2)
        return edges[edges[:, 1] > edges[:, 0]]

    def complete_gaps(self) -> np.ndarray:
        """Lengths of uncovered spells that start and end inside the window."""
        if self.intervals.shape[0] < 2:
            return np.zeros(0)
        return self.intervals[1:, 0] - self.intervals[:-1, 1]

    def complete_covered(self) -> np.ndarray:
        """Lengths of covered spells not cut by either end of the window."""
        iv = self.intervals
        keep = (iv[:, 0] > 0.0) & (iv[:, 1] < self.horizon)
        return iv[keep, 1] - iv[keep, 0]

    def is_covered(self, t: float) -> bool:
        iv = self.intervals
        return bool(np.any((iv[:, 0] <= t) & (t <= iv[:, 1])))

    def covered_during(self, t0: float, t1: float) -> bool:
        """Whether any covered spell meets ``[t0, t1)``."""
        iv = self.intervals
        return bool(np.any((iv[:, 0] < t1) & (iv[:, 1] >= t0)))


def coverage_timeline(point, tracks, radius: float, horizon: float,
                      offset=(0.0, 0.0)) -> CoverageTimeline:
    """Covered/uncovered history of ``point`` under a set of tracks.

    ``tracks`` may be a list of :class:`SensorTrack` or a :class:`Fleet`.
    """
    if not horizon > 0:
        raise ValueError("horizon must be > 0")
    fleet = as_fleet(tracks)
    _, start, end = fleet.contact_intervals(point, radius, horizon, offset)
    pt = tuple(float(x) for x in point)
    return CoverageTimeline(pt, union_intervals(start, end), float(horizon))
