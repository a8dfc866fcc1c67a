import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conekit import (
    PreconditionError,
    bessel_i,
    bessel_j,
    bessel_k,
    bessel_k_reflect,
    gamma_fact,
    lemma1_check,
    lemma2_check,
)

mp.mp.dps = 30


# ---------------------------------------------------------------------------
# generalized factorial
# ---------------------------------------------------------------------------


def test_gamma_fact_integers():
    assert gamma_fact(0).value == 1.0
    assert gamma_fact(3).value == 6.0
    assert gamma_fact(6).value == 720.0


def test_gamma_fact_half_against_quadrature():
    # independent oracle: (1/2)! as the Euler integral of t^(1/2) e^-t,
    # substituted t = u^2 so the integrand is smooth at the origin
    x, w = np.polynomial.legendre.leggauss(200)
    u = 7.0 * (x + 1.0) / 2.0
    oracle = float(np.sum(7.0 / 2.0 * w * 2.0 * u * u * np.exp(-u * u)))
    r = gamma_fact(0.5)
    assert r.value == pytest.approx(oracle, abs=1e-12)
    assert r.value == pytest.approx(0.8862269254527580, rel=1e-13)


@given(st.floats(min_value=0.0, max_value=20.0))
def test_gamma_fact_recurrence(a):
    lhs = gamma_fact(a + 1.0).value
    rhs = (a + 1.0) * gamma_fact(a).value
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_gamma_fact_domain_and_overflow():
    with pytest.raises(PreconditionError):
        gamma_fact(-1.0)
    with pytest.raises(PreconditionError):
        gamma_fact(-2.5)
    with pytest.raises(OverflowError):
        gamma_fact(200.0)


# ---------------------------------------------------------------------------
# J_nu
# ---------------------------------------------------------------------------


def test_j_at_zero():
    assert bessel_j(0.0, 0.0).value == 1.0
    assert bessel_j(2.0, 0.0).value == 0.0
    assert bessel_j(0.4, 0.0).value == 0.0


@pytest.mark.parametrize("nu", [0.5, 2.0, 3.7])
def test_j_small_argument_leading_term(nu):
    x = 1e-4
    lead = (x / 2.0) ** nu / math.gamma(nu + 1.0)
    assert bessel_j(nu, x).value / lead == pytest.approx(1.0, abs=1e-6)


def test_j_half_order_closed_form():
    # J_{1/2}(x) = sqrt(2/(pi x)) sin x
    r = bessel_j(0.5, 2.0)
    assert r.value == pytest.approx(math.sqrt(2.0 / (math.pi * 2.0)) * math.sin(2.0), abs=1e-14)
    assert r.value == pytest.approx(0.5130161365618278, abs=1e-14)


@pytest.mark.parametrize("nu", [0.0, 0.7, 1.5, 3.0, 4.5])
@pytest.mark.parametrize("x", [0.3, 2.0, 7.5, 16.2, 25.0, 40.0])
def test_j_against_high_precision(nu, x):
    # covers both the series branch and the integral branch
    r = bessel_j(nu, x)
    ref = float(mp.besselj(mp.mpf(nu), mp.mpf(x)))
    assert abs(r.value - ref) <= max(5.0 * r.abs_error, 1e-13)


@pytest.mark.parametrize("nu", [0.0, 0.7, 2.0, 3.5])
def test_j_solves_bessel_equation(nu):
    # central-difference residual of x^2 f'' + x f' + (x^2 - nu^2) f = 0,
    # in the normalized form f'' + f'/x + (1 - nu^2/x^2) f
    h = 2e-3
    for x in np.linspace(0.5, 10.0, 7):
        fm, f0, fp = (bessel_j(nu, x + d) for d in (-h, 0.0, h))
        d2 = (fp.value - 2.0 * f0.value + fm.value) / h**2
        d1 = (fp.value - fm.value) / (2.0 * h)
        resid = d2 + d1 / x + (1.0 - nu**2 / x**2) * f0.value
        errs = fm.abs_error + f0.abs_error + fp.abs_error
        assert abs(resid) <= 10.0 * h**2 + 10.0 * errs / h**2


# ---------------------------------------------------------------------------
# I_nu
# ---------------------------------------------------------------------------


def test_i_at_zero_and_asymptotic_ratio():
    assert bessel_i(0.0, 0.0).value == 1.0
    assert bessel_i(1.5, 0.0).value == 0.0
    r = bessel_i(0.0, 30.0)
    ratio = r.value * math.sqrt(2.0 * math.pi * 30.0) / math.exp(30.0)
    assert ratio == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("nu", [0.5, 2.0, 3.7])
def test_i_small_argument_leading_term(nu):
    x = 1e-4
    lead = (x / 2.0) ** nu / math.gamma(nu + 1.0)
    assert bessel_i(nu, x).value / lead == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("nu,x", [(0.0, 0.5), (1.5, 1.0), (4.0, 0.3), (0.0, 30.0), (1.5, 100.0), (2.0, 700.0)])
def test_i_against_high_precision(nu, x):
    r = bessel_i(nu, x)
    ref = float(mp.besseli(mp.mpf(nu), mp.mpf(x)))
    assert abs(r.value - ref) <= r.abs_error + 1e-15 * abs(ref)


def test_i_overflow():
    with pytest.raises(OverflowError):
        bessel_i(0.0, 720.0)


# ---------------------------------------------------------------------------
# K_nu
# ---------------------------------------------------------------------------


def test_k_half_order_closed_form():
    # K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
    r = bessel_k(0.5, 1.0)
    assert r.value == pytest.approx(math.sqrt(math.pi / 2.0) * math.exp(-1.0), rel=1e-13)


def test_k_small_argument_power_asymptotics():
    x = 1e-3
    nu = 2.0
    lead = 0.5 * math.gamma(nu) * (x / 2.0) ** (-nu)
    assert bessel_k(nu, x).value / lead == pytest.approx(1.0, abs=1e-5)


def test_k_small_argument_log_asymptotics():
    x = 1e-3
    assert bessel_k(0.0, x).value / (-math.log(x)) == pytest.approx(1.0, abs=0.02)


def test_k_domain():
    with pytest.raises(PreconditionError):
        bessel_k(1.0, 0.0)
    with pytest.raises(PreconditionError):
        bessel_k(1.0, -2.0)


@pytest.mark.parametrize("nu,x", [(0.0, 0.5), (0.0, 40.0), (2.0, 1e-3), (3.0, 12.0), (10.0, 50.0), (40.0, 0.1)])
def test_k_against_high_precision(nu, x):
    r = bessel_k(nu, x)
    ref = float(mp.besselk(mp.mpf(nu), mp.mpf(x)))
    assert abs(r.value - ref) <= r.abs_error + 1e-14 * abs(ref)


@given(
    st.floats(min_value=0.0, max_value=5.0),
    st.floats(min_value=0.05, max_value=20.0),
    st.floats(min_value=0.05, max_value=5.0),
)
@settings(max_examples=60, deadline=None)
def test_k_strictly_decreasing(nu, x, step):
    assert bessel_k(nu, x).value > bessel_k(nu, x + step).value


# ---------------------------------------------------------------------------
# reflection cross-check
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("nu", [0.3, 1.7])
@pytest.mark.parametrize("x", [0.5, 2.0, 8.0])
def test_k_reflect_matches_quadrature_route(nu, x):
    a = bessel_k(nu, x)
    b = bessel_k_reflect(nu, x)
    assert abs(a.value - b.value) <= 1e-10
    assert abs(a.value - b.value) <= a.abs_error + b.abs_error


def test_k_reflect_refuses_near_integer_order():
    with pytest.raises(PreconditionError):
        bessel_k_reflect(1.0005, 1.0)


@given(
    st.floats(min_value=0.05, max_value=3.95),
    st.floats(min_value=0.2, max_value=6.0),
)
@settings(max_examples=60, deadline=None)
def test_k_two_routes_agree_within_reported_errors(nu, x):
    if abs(nu - round(nu)) < 2e-3:
        nu += 5e-3
    a = bessel_k(nu, x)
    b = bessel_k_reflect(nu, x)
    assert abs(a.value - b.value) <= a.abs_error + b.abs_error + 1e-15


# ---------------------------------------------------------------------------
# the two convergence inequalities
# ---------------------------------------------------------------------------


def test_moment_bound_examples():
    integ, bound = lemma1_check(0.0, 0.0)
    assert bound == 1.0
    assert integ.value <= bound + integ.abs_error
    assert integ.value == pytest.approx(math.pi / 4.0, abs=1e-10)

    integ, bound = lemma1_check(1.0, 2.0)
    assert bound == 6.0
    assert integ.value <= bound + integ.abs_error


def test_moment_integral_half_half_against_direct_quadrature():
    # oracle: the K-Bessel moment integral evaluated directly, no cosh swap
    oracle = float(mp.quad(lambda x: mp.besselk(0.5, 2 * x) * x, [0, mp.inf]))
    integ, bound = lemma1_check(0.5, 0.5)
    assert integ.value == pytest.approx(oracle, abs=1e-10)
    assert integ.value == pytest.approx(0.2776801836348978, abs=1e-10)
    assert integ.value <= bound


@pytest.mark.parametrize("p,q", [(2.0, 1.0), (1.0, 3.0), (3.3, 0.4)])
def test_moment_integral_against_direct_quadrature(p, q):
    oracle = float(mp.quad(lambda x: mp.besselk(p, 2 * x) * x ** mp.mpf(p + q), [0, mp.inf]))
    integ, _ = lemma1_check(p, q)
    assert integ.value == pytest.approx(oracle, rel=1e-9)


def test_moment_bound_on_grid():
    for p in np.linspace(0.0, 4.0, 10):
        for q in np.linspace(0.0, 4.0, 10):
            integ, bound = lemma1_check(p, q)
            assert integ.value <= bound + integ.abs_error, (p, q)


def test_binomial_ratio_values():
    assert lemma2_check(2.0, 3.0) == pytest.approx(0.3125, rel=1e-13)
    assert lemma2_check(1.0, 1.0) == pytest.approx(0.5, rel=1e-13)
    assert lemma2_check(1.5, 2.5) <= 1.1


@given(st.floats(min_value=1.0, max_value=40.0), st.floats(min_value=1.0, max_value=40.0))
def test_binomial_ratio_bounded(p, q):
    assert 0.0 < lemma2_check(p, q) <= 1.1


def test_lemma_domain_checks():
    with pytest.raises(PreconditionError):
        lemma1_check(-0.5, 1.0)
    with pytest.raises(PreconditionError):
        lemma2_check(0.5, 2.0)


# ---------------------------------------------------------------------------
# error reporting discipline
# ---------------------------------------------------------------------------


@given(st.floats(min_value=0.0, max_value=4.0), st.floats(min_value=0.0, max_value=15.0))
@settings(max_examples=40, deadline=None)
def test_reported_errors_are_nonnegative_and_finite(nu, x):
    for r in (bessel_j(nu, x), bessel_i(nu, x)):
        assert r.abs_error >= 0.0
        assert math.isfinite(r.value)
    if x > 1e-3:  # smaller x with nu > 0 can overflow legitimately
        r = bessel_k(nu, x)
        assert r.abs_error >= 0.0
        assert math.isfinite(r.value)
