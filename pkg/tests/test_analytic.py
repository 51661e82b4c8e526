from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dyncov import analytic
from dyncov.game import golden_section
from dyncov.model import Mixture, PointMass, UniformDirection, VonMises

# --- area / interval coverage -------------------------------------------------


def test_area_coverage_no_sensors():
    assert analytic.area_coverage(0.0, 1.0) == 0.0


@pytest.mark.parametrize("density, radius, expected", [(1.0, 1.0, 0.9567861), (1.0, 0.5, 0.5440623)])
def test_area_coverage_values(density, radius, expected):
    value = analytic.area_coverage(density, radius)
    assert value == pytest.approx(oracles.area_coverage(density, radius), rel=1e-14)
    assert value == pytest.approx(expected, abs=5e-7)


@pytest.mark.parametrize("speed, duration, expected, digits", [
    (1.0, 0.0, 0.5440623, 5e-7),
    # exact value is 1 - exp(-(pi/4 + 1)) = 0.8322697...; the quoted 0.8322676 is off by ~2e-6
    (1.0, 1.0, 0.8322676, 5e-6),
    (0.0, 5.0, 0.5440623, 5e-7),
])
def test_interval_coverage_values(speed, duration, expected, digits):
    value = analytic.interval_coverage_straight(1.0, 0.5, speed, duration)
    assert value == pytest.approx(oracles.interval_coverage(1.0, 0.5, speed, duration), rel=1e-14)
    assert value == pytest.approx(expected, abs=digits)


@given(st.floats(0, 5), st.floats(0.01, 2), st.floats(0, 5), st.floats(0, 5))
def test_coverage_summary_invariants(density, radius, speed, duration):
    s = analytic.coverage_summary(density, radius, speed, duration)
    assert s.interval >= s.area
    assert s.time_fraction == s.area
    assert 0.0 <= s.area <= 1.0 and 0.0 <= s.interval <= 1.0


@settings(max_examples=200)
@given(st.floats(0, 3), st.floats(0.01, 1), st.floats(0, 3), st.floats(0, 3), st.floats(0, 1))
def test_coverage_monotone(density, radius, speed, duration, bump):
    f = analytic.interval_coverage_straight
    base = f(density, radius, speed, duration)
    assert f(density + bump, radius, speed, duration) >= base
    assert f(density, radius + bump, speed, duration) >= base
    assert f(density, radius, speed + bump, duration) >= base
    assert f(density, radius, speed, duration + bump) >= base
    assert analytic.area_coverage(density + bump, radius + bump) >= analytic.area_coverage(density, radius)


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        analytic.area_coverage(-1.0, 1.0)
    with pytest.raises(ValueError):
        analytic.interval_coverage_straight(1.0, 0.5, -1.0, 1.0)


# --- required speed -----------------------------------------------------------


def test_required_speed_at_threshold_is_zero():
    f0 = analytic.area_coverage(1.0, 0.5)
    assert analytic.required_speed(1.0, 0.5, f0, 3.0) == 0.0


def test_required_speed_inverts_unit_example():
    assert analytic.required_speed(1.0, 0.5, oracles.interval_coverage(1.0, 0.5, 1.0, 1.0), 1.0) \
        == pytest.approx(1.0, rel=1e-12)


def test_required_speed_round_trip_example():
    v = analytic.required_speed(1.0, 0.5, 0.9, 2.0)
    assert oracles.interval_coverage(1.0, 0.5, v, 2.0) == pytest.approx(0.9, abs=1e-12)


@settings(max_examples=300)
@given(st.floats(0.1, 5), st.floats(0.05, 2), st.floats(0, 1), st.floats(0.1, 20))
def test_required_speed_round_trip(density, radius, frac, duration):
    floor = analytic.area_coverage(density, radius)
    f0 = floor + frac * (0.999 - floor)
    if f0 >= 0.999 or floor >= 0.999:
        return
    v = analytic.required_speed(density, radius, f0, duration)
    assert analytic.interval_coverage_straight(density, radius, v, duration) == pytest.approx(f0, abs=1e-10)


def test_required_speed_rejects_unreachable_targets():
    with pytest.raises(ValueError):
        analytic.required_speed(1.0, 0.5, 0.2, 1.0)
    with pytest.raises(ValueError):
        analytic.required_speed(1.0, 0.5, 1.0, 1.0)


# --- detection laws and durations ----------------------------------------------


def test_static_detection_law():
    assert analytic.static_detection_law(1.0, 0.5, 1.0) == 1.0
    assert analytic.mean_detection_time(analytic.static_detection_law(1.0, 0.5, 1.0)) == 1.0
    assert analytic.static_detection_law(1.0, 0.5, 0.0) == 0.0
    assert analytic.mean_detection_time(0.0) == math.inf
    assert analytic.static_detection_law(2.0, 0.5, 1.0) == 2.0


def test_duration_summary_values():
    d = analytic.duration_summary(1.0, 0.5, 1.0)
    assert d.mean_uncovered == pytest.approx(1.0)
    assert d.mean_covered == pytest.approx(math.exp(math.pi / 4) - 1.0, rel=1e-14)
    assert d.mean_covered == pytest.approx(1.1932801, abs=5e-8)
    assert d.mean_cycle == pytest.approx(2.1932801, abs=5e-8)
    half = analytic.duration_summary(1.0, 0.5, 2.0)
    assert np.allclose(half, np.array(d) / 2, rtol=1e-14)


@given(st.floats(0.01, 5), st.floats(0.01, 2), st.floats(0.01, 5))
def test_duration_identities(density, radius, speed):
    d = analytic.duration_summary(density, radius, speed)
    assert d.mean_cycle == pytest.approx(d.mean_uncovered + d.mean_covered, rel=1e-12)
    assert d.mean_covered / d.mean_cycle == pytest.approx(analytic.area_coverage(density, radius), rel=1e-12)
    assert min(d) > 0


def test_sensing_time_law_reduces_without_dwell():
    law = analytic.sensing_time_law(1.0, 0.5, 1.0, 0.0)
    assert law.effective_radius == 0.5
    assert law.mean_detection == pytest.approx(1.0)


def test_sensing_time_law_example():
    law = analytic.sensing_time_law(1.0, 0.5, 1.0, 0.6)
    assert law.effective_radius == pytest.approx(0.4, rel=1e-14)
    assert law.rate == pytest.approx(0.8, rel=1e-14)
    assert law.mean_detection == pytest.approx(1.85, rel=1e-14)


def test_sensing_time_law_boundary():
    near = analytic.sensing_time_law(1.0, 0.5, 1.0, 1.0 - 1e-9)
    assert near.effective_radius < 1e-4
    assert near.mean_detection > 1e3
    with pytest.raises(analytic.NeverDetected):
        analytic.sensing_time_law(1.0, 0.5, 1.0, 1.0)


def test_optimal_speed_example():
    opt = analytic.optimal_speed(1.0, 0.5, 0.6)
    assert opt.speed == pytest.approx(math.sqrt(2) * 0.5 / 0.6, rel=1e-15)
    assert opt.speed == pytest.approx(1.1785113, abs=5e-8)
    assert opt.mean_detection == pytest.approx(1.8, abs=1e-12)

    def mean_at(v):
        try:
            return analytic.sensing_time_law(1.0, 0.5, v, 0.6).mean_detection
        except analytic.NeverDetected:  # 1.5 v* exceeds 2r / t_d here
            return math.inf

    means = [mean_at(f * opt.speed) for f in (0.5, 1.0, 1.5)]
    assert means[1] == min(means)
    assert math.isinf(means[2])
    assert means[1] < mean_at(1.2 * opt.speed)
    assert means[1] == pytest.approx(opt.mean_detection, abs=1e-12)


@pytest.mark.parametrize("density, radius, dwell", [(1.0, 0.5, 0.6), (3.0, 0.2, 0.1), (0.2, 2.0, 5.0)])
def test_optimal_speed_matches_golden_section(density, radius, dwell):
    opt = analytic.optimal_speed(density, radius, dwell)
    v, m = golden_section(lambda s: analytic.sensing_time_law(density, radius, s, dwell).mean_detection,
                          1e-6, 2 * radius / dwell * (1 - 1e-9), rel_tol=1e-10)
    assert v == pytest.approx(opt.speed, rel=1e-4)
    assert m == pytest.approx(opt.mean_detection, rel=1e-10)


# --- mobile intruder -----------------------------------------------------------


@pytest.mark.parametrize("u, c, expected", [(0.0, 1.0, 0.0), (math.pi, 0.3, 1.0), (math.pi, 1.0, 1.0),
                                             (math.pi / 2, 1.0, math.sqrt(0.5))])
def test_relative_speed_factor(u, c, expected):
    assert analytic.relative_speed_factor(u, c) == pytest.approx(expected, abs=1e-15)


@given(st.floats(0, 2 * math.pi), st.floats(0, 3), st.floats(0.1, 3))
def test_relative_speed_factor_matches_law_of_cosines(u, c, vs):
    vt = c * vs
    direct = oracles.relative_speed_by_cosines(u, 0.0, vt, vs)
    assert vs * (1 + c) * analytic.relative_speed_factor(u, c) == pytest.approx(direct, abs=1e-7)


def test_uniform_effective_speed_static_intruder():
    assert analytic.effective_speed(UniformDirection(), 0.0, 0.0, 1.7) == pytest.approx(1.7, rel=1e-12)


def test_uniform_effective_speed_matched_speeds():
    v = analytic.effective_speed(UniformDirection(), 0.0, 1.0, 1.0)
    assert abs(v - 4 / math.pi) < 1e-8
    assert analytic.effective_speed(UniformDirection(), 0.0, 2.0, 2.0) == pytest.approx(8 / math.pi, rel=1e-9)


@pytest.mark.parametrize("c", [0.0, 0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0])
def test_uniform_effective_speed_matches_elliptic_integral(c):
    assert analytic.effective_speed(UniformDirection(), 0.3, c * 1.5, 1.5) \
        == pytest.approx(oracles.uniform_effective_speed(c * 1.5, 1.5), abs=1e-9)


def test_uniform_effective_speed_is_rotation_invariant():
    vals = [analytic.effective_speed(UniformDirection(), th, 0.7, 1.0) for th in np.linspace(0, 2 * math.pi, 25)]
    assert max(vals) - min(vals) < 1e-9


def test_uniform_effective_speed_monotone_in_intruder_speed():
    vals = [analytic.effective_speed(UniformDirection(), 0.0, vt, 1.0) for vt in np.linspace(0, 3, 100)]
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[0] == min(vals)


@pytest.mark.parametrize("vt", [0.0, 0.5, 1.0, 1.5])
def test_point_mass_same_direction(vt):
    # the same-heading case reduces to |v_t - v_s|
    assert analytic.effective_speed(PointMass(0.4), 0.4, vt, 1.0) == pytest.approx(abs(vt - 1.0), abs=1e-9)


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0, 3), st.floats(0.1, 3))
def test_point_mass_law_of_cosines(theta_s, theta_t, vt, vs):
    assert analytic.effective_speed(PointMass(theta_s), theta_t, vt, vs) \
        == pytest.approx(oracles.relative_speed_by_cosines(theta_s, theta_t, vt, vs), abs=1e-9)


@pytest.mark.parametrize("law", [VonMises(0.5, 2.0), VonMises(4.0, 8.0),
                                 Mixture(((0.3, VonMises(1.0, 1.0)), (0.7, UniformDirection())))])
@pytest.mark.parametrize("vt", [0.3, 1.0, 2.0])
def test_smooth_law_matches_adaptive_quadrature(law, vt):
    expected = oracles.mean_relative_speed(law.density, 1.1, vt, 1.0)
    assert analytic.effective_speed(law, 1.1, vt, 1.0) == pytest.approx(expected, abs=1e-8)


def test_mixture_with_point_masses_is_weighted_sum():
    law = Mixture(((0.5, PointMass(0.0)), (0.5, PointMass(math.pi / 2))))
    expected = 0.5 * oracles.relative_speed_by_cosines(0.0, 0.2, 0.8, 1.0) \
        + 0.5 * oracles.relative_speed_by_cosines(math.pi / 2, 0.2, 0.8, 1.0)
    assert analytic.effective_speed(law, 0.2, 0.8, 1.0) == pytest.approx(expected, abs=1e-12)


def test_quadrature_error_reports_estimate(monkeypatch):
    monkeypatch.setattr(analytic, "QUAD_MAX_PANELS", 8)
    with pytest.raises(analytic.QuadratureError) as info:
        analytic.direction_integral(VonMises(0.3, 0.5), 0.0, 1.0, panels=8, tol=1e-15)
    assert info.value.error_estimate > 0


def test_concentrated_law_is_resolved_from_few_panels():
    law = VonMises(0.1, 200.0)
    expected = oracles.mean_relative_speed(law.density, 0.0, 1.0, 1.0)
    assert analytic.direction_integral(law, 0.0, 1.0, panels=8) * 2.0 == pytest.approx(expected, abs=1e-8)


def test_mobile_detection_law():
    assert analytic.mobile_detection_law(1.0, 0.5, 1.0) == 1.0
    assert analytic.mobile_detection_law(1.0, 0.5, 4 / math.pi) == pytest.approx(1.2732395, abs=5e-8)
    rate = analytic.mobile_detection_law(1.0, 0.5, 0.0)
    assert rate == 0.0 and analytic.mean_detection_time(rate) == math.inf
