import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conekit.cone_green import ConeParams, ConePoint, DerivSelector
from conekit.schauder import (
    BumpField,
    holder_seminorm,
    kernel_bound_report,
    schauder_probe,
)
from conekit.special_functions import PreconditionError

P23 = ConeParams(2.0 / 3.0, 3)
PFLAT = ConeParams(1.0, 3)
SS = DerivSelector.ss(1, 1)
RHO = BumpField(ConePoint(1.0, 0.5, (0.0,)), 0.35)


# ---------------------------------------------------------------------------
# bump fields
# ---------------------------------------------------------------------------


def test_bump_profile():
    b = BumpField(ConePoint(1.0, 0.5, (0.0,)), 0.35, amplitude=2.0)
    assert b.value(b.center) == 2.0
    assert b.value(ConePoint(2.0, 0.5, (0.0,))) == 0.0
    # halfway out: amplitude * exp(1 - 1/(1 - 1/4))
    mid = ConePoint(1.0 + 0.175 / 1.0, 0.5, (0.0,))  # radial offset 0.175
    off = np.linalg.norm(mid.embed() - b.center.embed())
    t2 = (off / b.width) ** 2
    assert b.value(mid) == pytest.approx(2.0 * math.exp(1.0 - 1.0 / (1.0 - t2)))


def test_bump_support_edge_is_continuous():
    b = BumpField(ConePoint(1.0, 0.0, (0.0,)), 0.5)
    just_in = ConePoint(1.499, 0.0, (0.0,))
    assert 0.0 < b.value(just_in) < 1e-100


def test_bump_dilate():
    d = RHO.dilate(1.7)
    assert d.center.r == pytest.approx(1.7)
    assert d.width == pytest.approx(1.7 * 0.35)
    # value transforms as a pullback: d(lam x) = rho(x)
    x = ConePoint(1.1, 0.6, (0.1,))
    assert d.value(x.scale(1.7)) == pytest.approx(RHO.value(x), rel=1e-12)


def test_bump_validation():
    with pytest.raises(PreconditionError):
        BumpField(ConePoint(1.0, 0.0, (0.0,)), 0.0)


# ---------------------------------------------------------------------------
# empirical Hoelder seminorm
# ---------------------------------------------------------------------------


def test_holder_seminorm_basic():
    pts = [((0.0, 0.0), 0.0), ((1.0, 0.0), 2.0), ((0.0, 1.0), 1.0)]
    assert holder_seminorm(pts, 1.0) == pytest.approx(2.0)
    assert holder_seminorm(pts, 0.5) == pytest.approx(2.0)
    assert holder_seminorm([((0.0, 0.0), 5.0)], 0.5) == 0.0


def test_holder_seminorm_duplicate_points():
    with pytest.raises(ValueError):
        holder_seminorm([((0.0, 0.0), 0.0), ((0.0, 0.0), 1.0)], 0.5)
    # duplicates with equal values are fine
    v = holder_seminorm([((0.0, 0.0), 1.0), ((0.0, 0.0), 1.0), ((1.0, 0.0), 2.0)], 1.0)
    assert v == pytest.approx(1.0)


@given(st.floats(0.1, 0.99))
def test_holder_seminorm_exponent_monotone(alpha):
    # for samples at distances <= 1, lowering the power can only shrink
    # the denominator, so the seminorm is monotone in alpha
    pts = [((0.0, 0.0), 0.3), ((0.4, 0.1), 1.0), ((0.2, 0.3), -0.5)]
    assert holder_seminorm(pts, alpha) <= holder_seminorm(pts, 0.99) + 1e-12


# ---------------------------------------------------------------------------
# kernel bound report
# ---------------------------------------------------------------------------


def test_kernel_report_finite_and_nested():
    small = kernel_bound_report(P23, SS, n_samples=8, seed=0)
    large = kernel_bound_report(P23, SS, n_samples=16, seed=0)
    for f in ("kappa1", "kappa2", "kappa3", "kappa4"):
        a, b = getattr(small, f), getattr(large, f)
        assert math.isfinite(a) and a > 0.0
        # nested samples: suprema can only grow, and the growth is mild
        assert a <= b * (1.0 + 1e-12)
        assert b <= 1.10 * a


def test_kernel_report_flat_cone():
    rep = kernel_bound_report(PFLAT, SS, n_samples=8, seed=1)
    # for the Newton kernel |K| |x-y|^3 = |3 n_i n_j - delta|/(4 pi) <= 2/(4 pi)
    assert rep.kappa3 <= 2.0 / (4.0 * math.pi) + 1e-6
    assert math.isfinite(rep.kappa2)


# ---------------------------------------------------------------------------
# the convolution probe
# ---------------------------------------------------------------------------


def test_probe_alpha_guards():
    with pytest.raises(PreconditionError):
        schauder_probe(P23, RHO, SS, alpha=P23.mu * 1.05)
    with pytest.raises(PreconditionError):
        schauder_probe(P23, RHO, SS, alpha=0.0)
    with pytest.raises(PreconditionError):
        schauder_probe(PFLAT, RHO, SS, alpha=1.0)
    with pytest.raises(PreconditionError):
        schauder_probe(P23, RHO, SS, alpha=0.2, kernel="flat-newton")
    with pytest.raises(PreconditionError):
        schauder_probe(P23, RHO, SS, alpha=0.2, kernel="nope")


def test_probe_flat_closed_form_all_kernels():
    # the closed-form Newton kernel route is cheap; exercises rs/thetas too
    for sel in (SS, DerivSelector.rs(1), DerivSelector.thetas(1)):
        r = schauder_probe(PFLAT, RHO, sel, alpha=0.5, kernel="flat-newton")
        assert math.isfinite(r) and r > 0.0


def test_probe_flat_pipeline_agreement():
    # the modal engine at beta = 1 must reproduce the closed-form kernel
    # through the whole quadrature + seminorm pipeline
    a = schauder_probe(PFLAT, RHO, SS, alpha=0.5, kernel="flat-newton")
    b = schauder_probe(PFLAT, RHO, SS, alpha=0.5, kernel="modal")
    assert b == pytest.approx(a, rel=1e-6)


def test_probe_cone_ratio_and_stability():
    mu = P23.mu
    base = schauder_probe(P23, RHO, SS, alpha=mu / 2)
    assert math.isfinite(base) and base > 0.0
    # a second admissible exponent reuses the cached field (fast)
    other = schauder_probe(P23, RHO, SS, alpha=0.9 * mu)
    assert math.isfinite(other) and other > 0.0
    # re-drawing the sampled seminorm pairs moves the ratio by < 20%
    for ps in (1, 2):
        again = schauder_probe(P23, RHO, SS, alpha=mu / 2, pair_seed=ps)
        assert abs(again - base) <= 0.20 * base
    # dilation sends every ingredient through the exact scaling covariance
    dil = schauder_probe(P23, RHO.dilate(1.7), SS, alpha=mu / 2)
    assert abs(dil - base) <= 0.05 * base
