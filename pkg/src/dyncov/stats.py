"""Estimators for comparing Monte Carlo samples with analytic predictions."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

Z95 = 1.959963984540054


class RateEstimate(NamedTuple):
    rate: float
    ci_low: float
    ci_high: float
    n: int


class Proportion(NamedTuple):
    p_hat: float
    ci_low: float
    ci_high: float


def _as_samples(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("no samples")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("samples must be finite and > 0")
    return x


def exp_rate_mle(samples) -> RateEstimate:
    """MLE of an exponential rate with a normal-approximation 95% interval."""
    x = _as_samples(samples)
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples")
    rate = n / math.fsum(x)
    half = Z95 / math.sqrt(n)
    return RateEstimate(rate, rate * (1.0 - half), rate * (1.0 + half), n)


def ks_exponential(samples, rate: float) -> float:
    """Kolmogorov-Smirnov distance between the samples and ``Exp(rate)``."""
    if not rate > 0:
        raise ValueError("rate must be > 0")
    x = np.sort(_as_samples(samples))
    n = x.size
    cdf = -np.expm1(-rate * x)
    d_plus = np.max(np.arange(1, n + 1) / n - cdf)
    d_minus = np.max(cdf - np.arange(n) / n)
    return float(max(d_plus, d_minus))


def ks_critical(n: int, coefficient: float = 1.63) -> float:
    """Asymptotic KS critical value; 1.63 corresponds to alpha ~ 0.01."""
    return coefficient / math.sqrt(n)


def proportion_ci(successes: int, trials: int) -> Proportion:
    """Wilson score 95% interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    p = successes / trials
    z2 = Z95 * Z95
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = Z95 * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == trials else min(1.0, centre + half)
    return Proportion(p, low, high)


def mean_and_se(values) -> tuple[float, float]:
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("no values")
    if x.size == 1:
        return float(x[0]), math.nan
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def within_se(estimate: float, se: float, target: float, k: float = 3.0) -> bool:
    return abs(estimate - target) <= k * se
