from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from secrecy_sim.special import E1Bounds, e1, e1_bounds, e1_scaled

EULER_GAMMA = 0.5772156649015329


def quadrature_e1(x: float) -> float:
    """Independent adaptive-quadrature oracle for E1(x).

    exp(x)*E1(x) = int_0^inf exp(-s)/(s+x) ds for x >= 1; for small x the
    substitution t = x*e^v gives E1(x) = exp(-x) * int_0^inf
    exp(-x*(e^v - 1)) dv, which keeps the integrand well-scaled.
    """
    if x >= 1.0:
        scaled, _ = integrate.quad(
            lambda s: math.exp(-s) / (s + x), 0.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=400
        )
        return math.exp(-x) * scaled

    def integrand(v: float) -> float:
        with np.errstate(over="ignore"):
            t = x * float(np.expm1(v))
        return math.exp(-t) if t < 745.0 else 0.0

    scaled, _ = integrate.quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=400)
    return math.exp(-x) * scaled


def test_e1_at_one():
    assert e1(1.0) == pytest.approx(0.219384, abs=1e-6)
    assert e1(1.0) == pytest.approx(quadrature_e1(1.0), rel=1e-12)


def test_e1_matches_quadrature_oracle_across_range():
    for x in np.logspace(-8, math.log10(700.0), 60):
        ref = quadrature_e1(float(x))
        assert e1(float(x)) == pytest.approx(ref, rel=1e-12)


def test_e1_matches_scipy_exp1():
    xs = np.logspace(-8, 2.5, 80)
    ours = np.array([e1(float(x)) for x in xs])
    ref = scipy.special.exp1(xs)
    assert np.allclose(ours, ref, rtol=1e-12, atol=0.0)


def test_e1_inside_analytic_bracket_at_0_4():
    lower = 0.5 * math.exp(-0.4) * math.log(6.0)
    upper = math.exp(-0.4) * math.log(3.5)
    assert lower <= e1(0.4) <= upper


def test_small_x_behavior():
    for x in (1e-6, 1e-8):
        series = -EULER_GAMMA - math.log(x) + x - x * x / 4.0
        assert e1(x) == pytest.approx(series, rel=1e-12)
        assert e1(x) + math.log(x) == pytest.approx(-EULER_GAMMA, abs=2 * x)


def test_e1_underflows_gracefully():
    assert e1(800.0) == 0.0
    assert e1(700.0) > 0.0


def test_e1_scaled_at_one():
    assert e1_scaled(1.0) == pytest.approx(0.596347, abs=1e-5)
    assert e1_scaled(1.0) == pytest.approx(math.e * quadrature_e1(1.0), rel=1e-12)


def test_e1_scaled_asymptotic_series_at_1000():
    x = 1000.0
    series = (1.0 / x) * (1.0 - 1.0 / x + 2.0 / x**2 - 6.0 / x**3)
    assert e1_scaled(x) == pytest.approx(series, rel=1e-9)


def test_e1_scaled_no_overflow_for_huge_arguments():
    for x in (1e3, 1e6, 1e12, 1e300):
        value = e1_scaled(x)
        assert math.isfinite(value)
        assert value == pytest.approx(1.0 / x, rel=1e-2)


def test_scaled_unscaled_consistency():
    for x in (0.1, 1.0, 10.0):
        assert e1_scaled(x) * math.exp(-x) == pytest.approx(e1(x), rel=1e-12)


def test_x_times_scaled_tends_to_one():
    assert abs(1e4 * e1_scaled(1e4) - 1.0) <= 1e-3
    assert abs(1e8 * e1_scaled(1e8) - 1.0) <= 1e-7


def test_bounds_bracket_on_log_grid():
    for x in np.logspace(-6, 3, 200):
        b = e1_bounds(float(x))
        assert b.lower <= b.upper
        assert b.contains(e1(float(x)))
        # same bracket, scaled form
        assert 0.5 * math.log1p(2.0 / x) <= e1_scaled(float(x)) <= math.log1p(1.0 / x)


def test_bounds_at_large_argument():
    b = e1_bounds(100.0)
    assert 0.0 < b.lower <= e1(100.0) <= b.upper
    assert b.upper < 1e-43


def test_bounds_formula():
    b = e1_bounds(0.5)
    assert b.lower == pytest.approx(0.5 * math.exp(-0.5) * math.log(5.0), rel=1e-15)
    assert b.upper == pytest.approx(math.exp(-0.5) * math.log(3.0), rel=1e-15)


def test_vectorized_scaled_matches_scalar():
    xs = np.logspace(-5, 4, 53)
    vec = e1_scaled(xs)
    assert vec.shape == xs.shape
    assert np.array_equal(vec, np.array([e1_scaled(float(x)) for x in xs]))


@pytest.mark.parametrize("bad", [0.0, -1.0, -1e-300])
def test_rejects_nonpositive_arguments(bad):
    with pytest.raises(ValueError):
        e1(bad)
    with pytest.raises(ValueError):
        e1_scaled(bad)
    with pytest.raises(ValueError):
        e1_bounds(bad)
    with pytest.raises(ValueError):
        e1_scaled(np.array([1.0, bad]))


def test_e1_rejects_arrays():
    with pytest.raises(TypeError):
        e1(np.array([1.0, 2.0]))


def test_invalid_bracket_rejected():
    with pytest.raises(ValueError):
        E1Bounds(lower=2.0, upper=1.0)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=1e-6, max_value=70.0),
    st.floats(min_value=1.0 + 1e-9, max_value=10.0),
)
def test_e1_strictly_decreasing_and_positive(x, factor):
    # e1 underflows to 0 beyond ~745, so strictness is asserted inside the
    # representable range only; the scaled form never underflows.
    lo, hi = x, x * factor
    assert e1(lo) > e1(hi) > 0.0


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=1e-6, max_value=1e12),
    st.floats(min_value=1.0 + 1e-9, max_value=10.0),
)
def test_e1_scaled_strictly_decreasing_and_positive(x, factor):
    assert e1_scaled(x) > e1_scaled(x * factor) > 0.0


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e3))
def test_bracket_holds_everywhere(x):
    assert e1_bounds(x).contains(e1(x))
