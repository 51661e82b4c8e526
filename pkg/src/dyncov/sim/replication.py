"""Seeded, order-independent replication harness."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

WORKERS_ENV = "DYNCOV_WORKERS"


def child_rng(base_seed: int, index: int) -> np.random.Generator:
    """Generator for replication ``index``; depends only on ``(base_seed, index)``."""
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(index,)))


def _run_one(experiment: Callable[[np.random.Generator], Any], base_seed: int, index: int):
    return experiment(child_rng(base_seed, index))


def _run_block(experiment, base_seed: int, indices: range) -> list:
    return [_run_one(experiment, base_seed, i) for i in indices]


@dataclass(frozen=True)
class ReplicationSet:
    results: list
    base_seed: int

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.results, dtype=float)

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def std(self) -> float:
        v = self.values
        return float(v.std(ddof=1)) if v.size > 1 else math.nan

    @property
    def se(self) -> float:
        return self.std / math.sqrt(len(self.results))

    def __len__(self) -> int:
        return len(self.results)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_replications(experiment: Callable[[np.random.Generator], Any], n_reps: int, base_seed: int,
                     workers: int | None = None) -> ReplicationSet:
    """Run ``experiment(rng)`` ``n_reps`` times with per-replication child seeds.

    Results are returned in replication order and are identical for any
    number of workers. With ``workers > 1`` the experiment must be picklable
    (a module-level function or a ``functools.partial`` of one).
    """
    if n_reps < 1:
        raise ValueError("n_reps must be >= 1")
    workers = default_workers() if workers is None else workers
    if workers <= 1 or n_reps == 1:
        return ReplicationSet(_run_block(experiment, base_seed, range(n_reps)), base_seed)
    step = math.ceil(n_reps / (4 * workers))
    blocks = [range(lo, min(lo + step, n_reps)) for lo in range(0, n_reps, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_run_block, [experiment] * len(blocks), [base_seed] * len(blocks), blocks)
        results = [r for part in parts for r in part]
    return ReplicationSet(results, base_seed)
