"""Tests for the 4-metric construction from positive harmonic functions."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conekit import ConeParams, ConePoint, PreconditionError
from conekit.gibbons_hawking import (
    NEWTON_WEIGHT,
    ConeGreenField,
    FlatNewton,
    MultiPole,
    curvature_growth,
    flat_model_map,
    gh_connection,
    gh_connection_residual,
    gh_curvature,
    gh_curvature_fd_check,
    gh_frame,
    harmonic_residual,
    holo_pair,
    holo_potential_u,
    wedge_2forms,
)
from conekit.gibbons_hawking import _curvature_forms, _project_theta

P23 = ConeParams(beta=2.0 / 3.0, m=3)
TWO_POLE = MultiPole([(-1.0, 0.0, 0.0), (1.0, 0.0, 0.0)], [1.0, 1.0])


def cone_field(beta=2.0 / 3.0):
    return ConeGreenField(ConeParams(beta=beta, m=3), ConePoint(1.0, 0.0, (0.0,)))


def random_points(n, seed=0, keepout=0.35):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        x = rng.uniform(-2.0, 2.0, 3)
        if min(np.linalg.norm(x - p) for p in
               [np.zeros(3), np.array([-1.0, 0, 0]), np.array([1.0, 0, 0])]) > keepout:
            pts.append(x)
    return pts


# --------------------------------------------------------------------------
# harmonic source fields
# --------------------------------------------------------------------------

def test_flat_newton_values_and_pole():
    f = FlatNewton()
    assert f.eval(np.array([1.0, 0.0, 0.0])) == pytest.approx(NEWTON_WEIGHT, rel=1e-15)
    assert f.eval(np.array([0.0, 2.0, 0.0])) == pytest.approx(NEWTON_WEIGHT / 2.0, rel=1e-15)
    with pytest.raises(PreconditionError):
        f.eval(np.zeros(3))


def test_flat_newton_grad_hess_fd():
    f = FlatNewton(pole=(0.2, -0.1, 0.4), weight=1.3)
    x = np.array([1.1, 0.5, -0.6])
    h = 1e-5
    for a in range(3):
        step = np.zeros(3)
        step[a] = h
        fd = (f.eval(x + step) - f.eval(x - step)) / (2 * h)
        assert f.grad(x)[a] == pytest.approx(fd, rel=1e-8)
        fd_row = (f.grad(x + step) - f.grad(x - step)) / (2 * h)
        assert np.allclose(f.hess(x)[a], fd_row, rtol=1e-7, atol=1e-10)


def test_multi_pole_validation_and_constant():
    with pytest.raises(ValueError):
        MultiPole([(0, 0, 0)], [1.0, 2.0])
    c = MultiPole(constant=2.5)
    x = np.array([0.3, -0.8, 0.1])
    assert c.eval(x) == 2.5
    assert np.all(c.grad(x) == 0.0)
    assert np.all(c.hess(x) == 0.0)


def test_cone_field_guards():
    with pytest.raises(PreconditionError):
        ConeGreenField(ConeParams(beta=0.5, m=4), ConePoint(1.0, 0.0, (0.0, 0.0)))
    with pytest.raises(PreconditionError):
        ConeGreenField(P23, ConePoint(0.0, 0.0, (0.0,)))
    fld = cone_field()
    with pytest.raises(PreconditionError):
        fld.eval(np.array([0.1, 0.0, 0.0]))  # singular axis
    with pytest.raises(PreconditionError):
        fld.eval(np.array([0.0, -0.5, 1e-13]))  # chart seam


def test_cone_field_positive_and_fd_consistent():
    fld = cone_field()
    x = np.array([0.35, 0.42, 0.18])
    assert fld.eval(x) > 0.0
    h = 1e-5
    g = fld.grad(x)
    hess = fld.hess(x)
    for a in range(3):
        step = np.zeros(3)
        step[a] = h
        fd = (fld.eval(x + step) - fld.eval(x - step)) / (2 * h)
        assert g[a] == pytest.approx(fd, rel=1e-6, abs=1e-10)
        fd_row = (fld.grad(x + step) - fld.grad(x - step)) / (2 * h)
        assert np.allclose(hess[a], fd_row, rtol=1e-6, atol=1e-9)


def test_cone_field_hessian_is_harmonic_exactly():
    # the chart Laplacian is the trace of the analytic Hessian; the modal
    # construction makes it vanish to rounding, not just to stencil order
    fld = cone_field()
    for x in (np.array([0.35, 0.42, 0.18]), np.array([-0.2, 0.8, -0.35])):
        hess = fld.hess(x)
        assert abs(np.trace(hess)) <= 1e-12 * np.abs(hess).max()


# --------------------------------------------------------------------------
# finite-difference harmonicity residual
# --------------------------------------------------------------------------

def test_harmonic_residual_flat_example():
    assert harmonic_residual(FlatNewton(), np.array([1.0, 0.0, 0.0]), h=1e-3) <= 1e-6


def test_harmonic_residual_linear_stub():
    class Linear:
        def eval(self, x):
            return float(x[0])

    assert harmonic_residual(Linear(), np.array([0.3, 0.1, -0.2]), h=1e-3) <= 1e-12


def test_harmonic_residual_cone_second_order():
    fld = cone_field()
    x = np.array([0.35, 0.42, 0.18])
    r1 = harmonic_residual(fld, x, h=2e-3)
    r2 = harmonic_residual(fld, x, h=1e-3)
    assert r1 / r2 >= 3.5  # order ~ 2


def test_harmonic_residual_bad_step():
    with pytest.raises(PreconditionError):
        harmonic_residual(FlatNewton(), np.array([1.0, 0.0, 0.0]), h=0.0)


# --------------------------------------------------------------------------
# frame of 2-forms
# --------------------------------------------------------------------------

@given(st.floats(min_value=1e-3, max_value=1e3))
def test_frame_wedge_identities(fval):
    fr = gh_frame(fval)
    assert fr.volume == 2.0 * fval
    for i in range(3):
        for j in range(3):
            want = fr.volume if i == j else 0.0
            assert wedge_2forms(fr.omega[i], fr.omega[j]) == pytest.approx(want, abs=1e-12 * fr.volume)
            assert wedge_2forms(fr.theta[i], fr.theta[j]) == pytest.approx(-want, abs=1e-12 * fr.volume)
            assert wedge_2forms(fr.omega[i], fr.theta[j]) == 0.0


def test_frame_requires_positive_value():
    with pytest.raises(PreconditionError):
        gh_frame(0.0)
    with pytest.raises(PreconditionError):
        gh_frame(-1.0)


# --------------------------------------------------------------------------
# connection forms
# --------------------------------------------------------------------------

def test_connection_constant_field_vanishes():
    t = gh_connection(MultiPole(constant=2.5), np.array([0.4, 0.7, -0.3]))
    for p, q in t:
        assert p == 0.0
        assert np.all(q == 0.0)


def test_connection_requires_positive_field():
    with pytest.raises(PreconditionError):
        gh_connection(MultiPole(constant=-1.0), np.zeros(3))


def test_connection_residual_analytic():
    # the defining linear system is satisfied to rounding with analytic
    # gradients, for every field type
    pts = random_points(5, seed=2)
    for fld in (FlatNewton(), TWO_POLE):
        for x in pts:
            assert gh_connection_residual(fld, x) <= 1e-10
    fld = cone_field()
    assert gh_connection_residual(fld, np.array([0.35, 0.42, 0.18])) <= 1e-10


def test_connection_residual_fd_second_order():
    x = np.array([0.4, 0.7, -0.3])
    r1 = gh_connection_residual(TWO_POLE, x, fd_step=2e-3)
    r2 = gh_connection_residual(TWO_POLE, x, fd_step=1e-3)
    assert r1 / r2 >= 3.5


def test_connection_residual_fd_cone():
    # finite-difference gradients reproduce the analytic ones at O(h^2)
    fld = cone_field()
    assert gh_connection_residual(fld, np.array([0.35, 0.42, 0.18]), fd_step=1e-4) <= 1e-8


# --------------------------------------------------------------------------
# curvature matrix
# --------------------------------------------------------------------------

def test_curvature_flat_vanishes_100_points():
    fld = FlatNewton()
    for x in random_points(100, seed=5, keepout=0.25):
        assert np.abs(gh_curvature(fld, x)).max() <= 1e-8


def test_curvature_symmetric_trace_free():
    for x in random_points(20, seed=6):
        w = gh_curvature(TWO_POLE, x)
        assert np.abs(w - w.T).max() <= 1e-10
        assert abs(np.trace(w)) <= 1e-10 * max(1.0, np.abs(w).max())


def test_curvature_matches_scaled_hessian_identity():
    # alternative closed form: W = -(f/2) * trace-free Hessian of f^{-2}
    for x in random_points(10, seed=7):
        f = TWO_POLE.eval(x)
        g = TWO_POLE.grad(x)
        hess = TWO_POLE.hess(x)
        hinv2 = 6.0 * np.outer(g, g) / f ** 4 - 2.0 * hess / f ** 3
        cand = -(f / 2.0) * (hinv2 - np.trace(hinv2) / 3.0 * np.eye(3))
        w = gh_curvature(TWO_POLE, x)
        assert np.abs(cand - w).max() <= 1e-10 * max(1.0, np.abs(w).max())


def test_curvature_requires_positive_field():
    with pytest.raises(PreconditionError):
        gh_curvature(MultiPole(constant=-2.0), np.zeros(3))


def test_curvature_forms_match_closed_form_and_are_asd():
    # assembling F_i = dT_i - T_j ^ T_k from analytic Jacobians and
    # expanding in the anti-self-dual basis reproduces the closed form;
    # the self-dual components vanish
    for x in random_points(10, seed=8):
        w = gh_curvature(TWO_POLE, x)
        forms, f = _curvature_forms(TWO_POLE, x)
        w_forms, sd = _project_theta(forms, f)
        scale = max(1.0, np.abs(w).max())
        assert np.abs(w_forms - w).max() <= 1e-12 * scale
        assert sd <= 1e-12 * scale


def test_curvature_fd_check_flat_example():
    assert gh_curvature_fd_check(FlatNewton(), np.array([1.0, 0.2, -0.1]), h=1e-3) <= 1e-4


def test_curvature_fd_check_first_order_or_better():
    x = np.array([0.4, 0.7, -0.3])
    d1 = gh_curvature_fd_check(TWO_POLE, x, h=2e-3)
    d2 = gh_curvature_fd_check(TWO_POLE, x, h=1e-3)
    assert d1 / d2 >= 1.9  # observed order two


def test_curvature_fd_check_constant_field_exact_zero():
    assert gh_curvature_fd_check(MultiPole(constant=2.5), np.array([0.4, 0.7, -0.3]), h=1e-3) == 0.0


def test_curvature_fd_check_cone():
    fld = cone_field()
    assert gh_curvature_fd_check(fld, np.array([0.35, 0.42, 0.18]), h=1e-3) <= 1e-4


# --------------------------------------------------------------------------
# curvature growth toward the singular axis
# --------------------------------------------------------------------------

def test_growth_exponents_match_cone_angle():
    # the curvature norm grows like r^(1/beta - 2) along rays toward the
    # axis; beta = 1/2 is the bounded-curvature threshold
    radii = np.geomspace(0.004, 0.04, 6)
    for beta in (2.0 / 3.0, 3.0 / 5.0, 0.5):
        fit = curvature_growth(cone_field(beta), radii, x1=0.25, phi=0.0)
        assert not fit.zero_signal
        assert fit.exponent == pytest.approx(1.0 / beta - 2.0, abs=0.1)


def test_growth_flat_zero_signal():
    fit = curvature_growth(FlatNewton(), [0.05, 0.1, 0.2, 0.4], x1=0.0, phi=0.3)
    assert fit.zero_signal
    assert math.isnan(fit.exponent)


def test_growth_data_validation():
    with pytest.raises(ValueError):
        curvature_growth(FlatNewton(), [0.1, 0.2, 0.3])
    with pytest.raises(PreconditionError):
        curvature_growth(FlatNewton(), [-0.1, 0.1, 0.2, 0.3])


# --------------------------------------------------------------------------
# line-integral potential and the holomorphic pair
# --------------------------------------------------------------------------

def test_potential_flat_closed_form():
    # for f = 1/(2|x|) the integral has the closed form asinh(x1/rho)/2
    fld = FlatNewton(weight=0.5)
    x = np.array([0.8, 0.5, -0.3])
    u = holo_potential_u(fld, x)
    rho = math.hypot(x[1], x[2])
    assert u.value == pytest.approx(0.5 * math.asinh(x[0] / rho), abs=1e-13)
    assert abs(u.value - 0.5 * math.asinh(x[0] / rho)) <= u.abs_error + 1e-13


def test_potential_derivative_recovers_field():
    fld = FlatNewton(weight=0.5)
    x = np.array([0.8, 0.5, -0.3])
    h = 1e-5
    up = holo_potential_u(fld, x + np.array([h, 0, 0])).value
    um = holo_potential_u(fld, x - np.array([h, 0, 0])).value
    assert (up - um) / (2 * h) == pytest.approx(fld.eval(x), rel=1e-8)


def test_potential_zero_at_slice_and_pole_guard():
    fld = FlatNewton(pole=(0.5, 0.0, 0.0))
    assert holo_potential_u(fld, np.array([0.0, 0.4, 0.1])).value == 0.0
    with pytest.raises(PreconditionError):
        holo_potential_u(fld, np.array([1.0, 0.0, 0.0]))


def test_holo_pair_mirror_precondition():
    tilted = FlatNewton(pole=(0.3, 0.0, 0.0))
    with pytest.raises(PreconditionError):
        holo_pair(tilted, np.array([0.5, 0.4, 0.2]), 0.0, lambda z: 1.0)


def test_holo_pair_product_invariant_flat():
    fld = FlatNewton(weight=0.5)
    h0 = lambda z: cmath.sqrt(z)
    ref = h0(complex(0.5, -0.3)) ** 2
    for x1 in (-0.5, 0.0, 0.5):
        for psi in (0.0, math.pi / 2, math.pi):
            pr = holo_pair(fld, np.array([x1, 0.5, -0.3]), psi, h0)
            assert abs(pr.h * pr.h_tilde - ref) <= 1e-10


def test_holo_pair_weight_rotation():
    fld = FlatNewton(weight=0.5)
    h0 = lambda z: cmath.sqrt(z)
    x = np.array([0.3, 0.5, -0.3])
    pr0 = holo_pair(fld, x, 0.7, h0)
    pr1 = holo_pair(fld, x, 0.7 + 0.9, h0)
    assert abs(pr1.h - pr0.h * cmath.exp(1j * 0.9)) <= 1e-12
    assert abs(pr1.h_tilde - pr0.h_tilde * cmath.exp(-1j * 0.9)) <= 1e-12


def test_holo_pair_flat_model_moduli():
    # mapping (z, w) down to 3-space and lifting back through the pair
    # construction with seed sqrt(zeta) recovers |h| = |z|, |h~| = |w|;
    # this pins the weight 1/2 normalization of the flat model
    fld = FlatNewton(weight=0.5)
    h0 = lambda z: cmath.sqrt(z)
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 6:
        z = complex(*rng.uniform(-1, 1, 2))
        w = complex(*rng.uniform(-1, 1, 2))
        if abs(z) < 0.2 or abs(w) < 0.2 or abs(z * w) < 0.05:
            continue
        m = flat_model_map(z, w)
        pr = holo_pair(fld, np.array([m[2], m[0], m[1]]), 0.0, h0)
        assert abs(pr.h) == pytest.approx(abs(z), abs=1e-12)
        assert abs(pr.h_tilde) == pytest.approx(abs(w), abs=1e-12)
        checked += 1


def test_holo_pair_product_invariant_cone():
    fld = cone_field()
    c = fld.params.c
    h0 = lambda z: 1.0 - z ** c
    ref = None
    for x1 in (-0.5, 0.0, 0.5):
        for psi in (0.0, math.pi / 2, math.pi):
            pr = holo_pair(fld, np.array([x1, 0.45, 0.25]), psi, h0)
            prod = pr.h * pr.h_tilde
            if ref is None:
                ref = prod
                assert abs(ref - pr.h0_at_base ** 2) <= 1e-12
            assert abs(prod - ref) <= 1e-6 * abs(ref)


def test_cone_seed_vanishes_at_source():
    fld = cone_field()
    c = fld.params.c
    pc = fld.poles[0]
    assert abs(1.0 - complex(pc[1], pc[2]) ** c) <= 1e-14


# --------------------------------------------------------------------------
# quotient map of the flat model
# --------------------------------------------------------------------------

def test_flat_model_map_origin():
    assert np.all(flat_model_map(0.0, 0.0) == 0.0)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=50)
def test_flat_model_map_norm_identity(a, b, c, d):
    z = complex(a, b)
    w = complex(c, d)
    m = flat_model_map(z, w)
    want = 0.5 * (abs(z) ** 2 + abs(w) ** 2)
    assert np.linalg.norm(m) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_flat_model_map_circle_action_fixes_image():
    z, w = complex(0.7, -0.4), complex(0.5, 0.6)
    m0 = flat_model_map(z, w)
    for t in (0.3, 1.2, 2.9):
        lam = cmath.exp(1j * t)
        m1 = flat_model_map(lam * z, w / lam)
        assert np.allclose(m0, m1, atol=1e-14)
