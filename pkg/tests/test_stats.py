from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps
from statsmodels.stats.proportion import proportion_confint

from dyncov import stats


def test_rate_of_constant_samples():
    assert stats.exp_rate_mle([2.0] * 5).rate == 0.5


def test_rate_of_exponential_draws():
    x = np.random.default_rng(3).exponential(1.0, 10_000)
    est = stats.exp_rate_mle(x)
    assert 0.97 <= est.rate <= 1.03
    assert est.ci_low <= est.rate <= est.ci_high
    assert est.n == 10_000


def test_rate_needs_two_samples():
    with pytest.raises(ValueError):
        stats.exp_rate_mle([1.0])
    with pytest.raises(ValueError):
        stats.exp_rate_mle([1.0, -1.0])


def test_ks_at_quantiles():
    n = 200
    x = -np.log1p(-np.arange(1, n + 1) / (n + 1))
    assert stats.ks_exponential(x, 1.0) <= 1.0 / (n + 1) + 1e-12


def test_ks_detects_fit_and_misfit():
    x = np.random.default_rng(5).exponential(1.0, 10_000)
    assert stats.ks_exponential(x, 1.0) < stats.ks_critical(10_000)
    assert stats.ks_critical(10_000) == pytest.approx(0.0163)
    assert stats.ks_exponential(x, 2.0) > 0.15


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("rate", [0.5, 1.0, 3.0])
def test_ks_matches_scipy(seed, rate):
    x = np.random.default_rng(seed).exponential(1.3, 500)
    ref = sps.kstest(x, sps.expon(scale=1.0 / rate).cdf).statistic
    assert stats.ks_exponential(x, rate) == pytest.approx(ref, abs=1e-12)


@given(st.floats(0.1, 10))
def test_ks_scale_invariance(s):
    x = np.random.default_rng(9).exponential(1.0, 300)
    assert stats.ks_exponential(s * x, 2.0 / s) == pytest.approx(stats.ks_exponential(x, 2.0), abs=1e-12)


def test_wilson_edges():
    p = stats.proportion_ci(0, 40)
    assert p.p_hat == 0 and p.ci_low == 0
    p = stats.proportion_ci(40, 40)
    assert p.p_hat == 1 and p.ci_high == 1
    with pytest.raises(ValueError):
        stats.proportion_ci(0, 0)


def test_wilson_half():
    p = stats.proportion_ci(50, 100)
    assert p.ci_low == pytest.approx(0.404, abs=5e-4)
    assert p.ci_high == pytest.approx(0.596, abs=5e-4)


@given(st.integers(1, 2000), st.data())
def test_wilson_matches_statsmodels(trials, data):
    k = data.draw(st.integers(0, trials))
    p = stats.proportion_ci(k, trials)
    lo, hi = proportion_confint(k, trials, alpha=0.05, method="wilson")
    assert p.ci_low == pytest.approx(lo, abs=1e-9)
    assert p.ci_high == pytest.approx(hi, abs=1e-9)
    assert 0.0 <= p.ci_low <= p.p_hat <= p.ci_high <= 1.0


def test_mean_and_se():
    m, se = stats.mean_and_se([1.0, 2.0, 3.0])
    assert m == 2.0 and se == pytest.approx(1.0 / np.sqrt(3))
    assert stats.within_se(2.05, 0.02, 2.0)
    assert not stats.within_se(2.1, 0.02, 2.0)
