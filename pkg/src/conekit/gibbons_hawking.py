"""Ricci-flat 4-metrics built from positive harmonic functions on 3-space.

A positive harmonic function f on a domain of flat 3-space determines a
circle-invariant Ricci-flat metric on a 4-dimensional total space carrying
a triple of parallel symplectic forms.  This module evaluates the
ingredients of that construction pointwise:

* harmonic source fields: a single Newton pole, superpositions of poles,
  and the Green's function of the 2-d cone times a line (worked in the
  developing chart of the cone, where the metric is literally flat);
* the standard frame of self-dual / anti-self-dual 2-forms and its wedge
  identities;
* the induced connection 1-forms on the anti-self-dual bundle and the
  residual of the defining linear system;
* the curvature matrix (the only surviving curvature component), both in
  closed form and by a finite-difference assembly from the connection;
* growth rates of the curvature norm along rays approaching the singular
  axis;
* the pair of circle-weighted holomorphic functions whose product cuts
  out a plane curve, together with the line-integral potential they need.

Differential forms are handled as coefficient arrays over the fixed
coframe (alpha, dx1, dx2, dx3), where alpha is the connection form of the
circle bundle, normalized by

    d(alpha) = -(f_1 dx2^dx3 + f_2 dx3^dx1 + f_3 dx1^dx2).

Representations used throughout:

* 1-form  = (p, q): p*alpha + q_k dx_k, p scalar, q shape (3,)
* 2-form  = (u, v): u_i alpha^dx_i + v_i e_i, where e_1 = dx2^dx3,
  e_2 = dx3^dx1, e_3 = dx1^dx2
* 3-form  = (w, m): w_i alpha^e_i + m dx1^dx2^dx3
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import panel_integrate
from .special_functions import EvalResult, PreconditionError
from .cone_green import ConePoint, _modal_sums, norm_constant

__all__ = [
    "NEWTON_WEIGHT",
    "FlatNewton",
    "MultiPole",
    "ConeGreenField",
    "FrameAtPoint",
    "GrowthFit",
    "HoloPair",
    "gh_frame",
    "wedge_2forms",
    "harmonic_residual",
    "gh_connection",
    "gh_connection_residual",
    "gh_curvature",
    "gh_curvature_fd_check",
    "curvature_growth",
    "holo_potential_u",
    "holo_pair",
    "flat_model_map",
]

# default strength of a Newton pole: the fundamental solution of the flat
# 3-d Laplacian, -Lap (1/(4 pi |x|)) = delta_0.
NEWTON_WEIGHT = 1.0 / (4.0 * math.pi)

_EPS3 = np.zeros((3, 3, 3))
_EPS3[0, 1, 2] = _EPS3[1, 2, 0] = _EPS3[2, 0, 1] = 1.0
_EPS3[0, 2, 1] = _EPS3[2, 1, 0] = _EPS3[1, 0, 2] = -1.0


# ----------------------------------------------------------------------
# harmonic source fields
# ----------------------------------------------------------------------

class FlatNewton:
    """weight / |x - pole| on flat 3-space.

    The default weight makes f the fundamental solution of the flat
    Laplacian.  All curvature statements downstream are insensitive to
    the weight (a single pole always produces a flat 4-metric); the
    weight only matters for normalization cross-checks.
    """

    def __init__(self, pole=(0.0, 0.0, 0.0), weight=NEWTON_WEIGHT):
        self.pole = np.asarray(pole, dtype=float)
        if self.pole.shape != (3,):
            raise ValueError("pole must be a 3-vector")
        self.weight = float(weight)
        self.poles = [self.pole]

    def _displacement(self, x):
        d = np.asarray(x, dtype=float) - self.pole
        dist = float(np.linalg.norm(d))
        if dist == 0.0:
            raise PreconditionError("evaluation at the pole of the field")
        return d, dist

    def eval(self, x):
        _, dist = self._displacement(x)
        return self.weight / dist

    def grad(self, x):
        d, dist = self._displacement(x)
        return -self.weight * d / dist ** 3

    def hess(self, x):
        d, dist = self._displacement(x)
        n = d / dist
        return self.weight * (3.0 * np.outer(n, n) - np.eye(3)) / dist ** 3


class MultiPole:
    """Superposition of Newton poles plus an optional constant.

    f(x) = constant + sum_i weights[i] / |x - poles[i]|.  An empty pole
    list gives a constant field (useful as the degenerate reference: all
    connection forms vanish identically for it).
    """

    def __init__(self, poles=(), weights=None, constant=0.0):
        self.poles = [np.asarray(p, dtype=float) for p in poles]
        for p in self.poles:
            if p.shape != (3,):
                raise ValueError("each pole must be a 3-vector")
        if weights is None:
            weights = [NEWTON_WEIGHT] * len(self.poles)
        self.weights = [float(w) for w in weights]
        if len(self.weights) != len(self.poles):
            raise ValueError("need one weight per pole")
        self.constant = float(constant)

    def _terms(self, x):
        x = np.asarray(x, dtype=float)
        for p, w in zip(self.poles, self.weights):
            d = x - p
            dist = float(np.linalg.norm(d))
            if dist == 0.0:
                raise PreconditionError("evaluation at a pole of the field")
            yield d, dist, w

    def eval(self, x):
        return self.constant + sum(w / dist for _, dist, w in self._terms(x))

    def grad(self, x):
        g = np.zeros(3)
        for d, dist, w in self._terms(x):
            g -= w * d / dist ** 3
        return g

    def hess(self, x):
        h = np.zeros((3, 3))
        for d, dist, w in self._terms(x):
            n = d / dist
            h += w * (3.0 * np.outer(n, n) - np.eye(3)) / dist ** 3
        return h


class ConeGreenField:
    """Green's function of the cone Laplacian as a field on the developing
    chart of the cone.

    The 2-d cone of total angle 2 pi beta times a line is locally
    isometric to flat 3-space: the chart (x1, x2, x3) =
    (s, r cos(beta*theta), r sin(beta*theta)) is an isometry on the wedge
    |beta*theta| < pi*beta cut along the back ray.  On that wedge the
    Green's function with a fixed source is a positive harmonic function
    of the flat coordinates, singular along the axis x2 = x3 = 0, and
    feeds directly into the 4-metric construction.

    eval/grad/hess work in the chart coordinates; evaluation on the axis
    or on the seam of the chart raises PreconditionError.
    """

    def __init__(self, params, pole, rel_tol=1e-9):
        if params.m != 3:
            raise PreconditionError(
                "the 4-metric construction needs a 3-dimensional base: m = 3"
            )
        if not isinstance(pole, ConePoint):
            pole = ConePoint(*pole)
        if len(pole.s) != 1:
            raise ValueError("pole must carry exactly one Euclidean coordinate")
        if pole.r <= 0.0:
            raise PreconditionError("pole must sit off the singular axis")
        self.params = params
        self.pole = pole
        self.rel_tol = float(rel_tol)
        self._c0 = norm_constant(params)
        self._cache = {}

    @property
    def poles(self):
        """Chart image of the source point (for segment guards)."""
        beta = self.params.beta
        th = self.pole.theta
        if th > math.pi:
            th -= 2.0 * math.pi
        phi = beta * th
        return [np.array([
            self.pole.s[0],
            self.pole.r * math.cos(phi),
            self.pole.r * math.sin(phi),
        ])]

    def _to_cone(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (3,):
            raise ValueError("chart points are 3-vectors")
        beta = self.params.beta
        rho = math.hypot(x[1], x[2])
        if rho == 0.0:
            raise PreconditionError("evaluation on the singular axis")
        phi = math.atan2(x[2], x[1])
        if abs(phi) >= math.pi * beta * (1.0 - 1e-12):
            raise PreconditionError(
                "point lies on the seam of the developing chart; "
                "rotate the source to keep the working wedge clear"
            )
        theta = phi / beta
        ds = x[0] - self.pole.s[0]
        sgn = math.copysign(1.0, ds) if ds != 0.0 else 0.0
        return rho, phi, theta - self.pole.theta, abs(ds), sgn

    def _sums(self, rho, dtheta, R, needs, trigs):
        key = (rho, dtheta, R, needs, trigs)
        hit = self._cache.get(key)
        if hit is None:
            hit = _modal_sums(
                self.params, rho, self.pole.r, R, dtheta, set(needs),
                rel_tol=self.rel_tol, trigs=trigs,
            )
            if len(self._cache) >= 4096:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def eval(self, x):
        rho, _, dtheta, R, _ = self._to_cone(x)
        s = self._sums(rho, dtheta, R, frozenset(("h",)), ("cos",))
        return self._c0 * s[("h", "cos")].value

    def grad(self, x):
        rho, phi, dtheta, R, sgn = self._to_cone(x)
        s = self._sums(
            rho, dtheta, R, frozenset(("h", "hr", "hR")), ("cos", "ksin")
        )
        c0 = self._c0
        beta = self.params.beta
        g_r = c0 * s[("hr", "cos")].value
        g_t = c0 * s[("h", "ksin")].value
        g_s = c0 * s[("hR", "cos")].value * sgn
        cp, sp = math.cos(phi), math.sin(phi)
        return np.array([
            g_s,
            cp * g_r - sp * g_t / (beta * rho),
            sp * g_r + cp * g_t / (beta * rho),
        ])

    def hess(self, x):
        rho, phi, dtheta, R, sgn = self._to_cone(x)
        needs = frozenset(("h", "hr", "hrr", "hR", "hRR", "hrR"))
        s = self._sums(rho, dtheta, R, needs, ("cos", "ksin", "k2cos"))
        c0 = self._c0
        beta = self.params.beta
        f_r = c0 * s[("hr", "cos")].value
        f_t = c0 * s[("h", "ksin")].value
        f_rr = c0 * s[("hrr", "cos")].value
        f_rt = c0 * s[("hr", "ksin")].value
        f_tt = c0 * s[("h", "k2cos")].value
        f_rs = c0 * s[("hrR", "cos")].value * sgn
        f_ts = c0 * s[("hR", "ksin")].value * sgn
        f_ss = c0 * s[("hRR", "cos")].value
        # polar second derivatives of the chart cross-section
        F_rho = f_r
        F_phi = f_t / beta
        F_rr = f_rr
        F_rp = f_rt / beta
        F_pp = f_tt / beta ** 2
        mixed = F_rp / rho - F_phi / rho ** 2
        angular = F_rho / rho + F_pp / rho ** 2
        cp, sp = math.cos(phi), math.sin(phi)
        h = np.empty((3, 3))
        h[0, 0] = f_ss
        h[1, 1] = cp * cp * F_rr - 2.0 * cp * sp * mixed + sp * sp * angular
        h[2, 2] = sp * sp * F_rr + 2.0 * cp * sp * mixed + cp * cp * angular
        h[1, 2] = h[2, 1] = cp * sp * (F_rr - angular) + (cp * cp - sp * sp) * mixed
        h[0, 1] = h[1, 0] = cp * f_rs - sp * f_ts / (beta * rho)
        h[0, 2] = h[2, 0] = sp * f_rs + cp * f_ts / (beta * rho)
        return h


def harmonic_residual(field, x, h=1e-3):
    """Absolute value of the 7-point finite-difference Laplacian of the field.

    Uses only field.eval, so it applies to test stubs as well as to the
    built-in fields; for a harmonic field the residual decays like h^2.
    Stencil points outside the field's domain raise the field's own error.
    """
    x = np.asarray(x, dtype=float)
    if h <= 0.0:
        raise PreconditionError("stencil width must be positive")
    center = field.eval(x)
    acc = 0.0
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        acc += field.eval(x + step) - 2.0 * center + field.eval(x - step)
    return abs(acc / (h * h))


# ----------------------------------------------------------------------
# coefficient algebra for forms over (alpha, dx1, dx2, dx3)
# ----------------------------------------------------------------------

def _wedge_11(p1, q1, p2, q2):
    """(1-form) ^ (1-form) -> 2-form (u, v)."""
    u = p1 * q2 - p2 * q1
    v = np.cross(q1, q2)
    return u, v


def _wedge_12(p, q, u, v):
    """(1-form) ^ (2-form) -> 3-form (w, m)."""
    w = p * v - np.cross(q, u)
    m = float(q @ v)
    return w, m


def _d_oneform(p, q, dp, dq, gradf):
    """Exterior derivative of p*alpha + q_k dx_k as a 2-form (u, v).

    dp[l] = d p / d x_l and dq[l, k] = d q_k / d x_l are the spatial
    Jacobians of the coefficients; gradf enters through d(alpha).
    """
    u = -np.asarray(dp, dtype=float)
    dq = np.asarray(dq, dtype=float)
    curl = np.array([
        dq[1, 2] - dq[2, 1],
        dq[2, 0] - dq[0, 2],
        dq[0, 1] - dq[1, 0],
    ])
    v = curl - p * np.asarray(gradf, dtype=float)
    return u, v


def wedge_2forms(a, b):
    """Coefficient of alpha^dx1^dx2^dx3 in the product of two 2-forms."""
    ua, va = a
    ub, vb = b
    return float(np.dot(ua, vb) + np.dot(va, ub))


@dataclass(frozen=True)
class FrameAtPoint:
    """Pointwise frame of self-dual (omega) and anti-self-dual (theta)
    2-forms, with the common wedge normalization `volume`:

        omega_i ^ omega_j =  volume * delta_ij,
        theta_i ^ theta_j = -volume * delta_ij,
        omega_i ^ theta_j =  0,

    all as multiples of alpha^dx1^dx2^dx3.  For a positive field value f
    the normalization works out to volume = 2 f.
    """

    omega: tuple
    theta: tuple
    volume: float


def gh_frame(f_value):
    """Frame of 2-forms attached to a positive field value."""
    f_value = float(f_value)
    if f_value <= 0.0:
        raise PreconditionError("frame requires a positive field value")
    omega = []
    theta = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        omega.append((e, f_value * e))
        theta.append((e, -f_value * e))
    return FrameAtPoint(tuple(omega), tuple(theta), 2.0 * f_value)


# ----------------------------------------------------------------------
# connection and curvature
# ----------------------------------------------------------------------

def _field_state(field, x):
    f = float(field.eval(x))
    if f <= 0.0:
        raise PreconditionError("harmonic field must be positive here")
    return f, np.asarray(field.grad(x), dtype=float)


def _connection_coeffs(f, g):
    """Connection 1-forms (p_i, q_i) from the field value and gradient."""
    forms = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        p = g[i] / f ** 2
        q = np.cross(g, e) / f
        forms.append((p, q))
    return forms


def gh_connection(field, x):
    """Connection 1-forms T_i on the anti-self-dual bundle at x.

    Returns three (p, q) pairs representing T_i = p*alpha + q_k dx_k.
    They solve the linear system

        d(theta_i) = T_j ^ theta_k - T_k ^ theta_j   ((ijk) cyclic)

    with d(theta_i) = -2 f_i dx1^dx2^dx3; see gh_connection_residual for
    the numerical check.  A constant field has vanishing gradient and
    hence T_i = 0.
    """
    f, g = _field_state(field, x)
    return _connection_coeffs(f, g)


def gh_connection_residual(field, x, fd_step=None):
    """Max-norm residual of the defining system of the connection forms.

    With fd_step=None both sides use the field's analytic gradient and
    the residual is pure rounding.  With a positive fd_step the exterior
    derivatives d(theta_i) are rebuilt from central finite differences of
    field.eval, so the residual measures the consistency of field.grad
    with field.eval at order fd_step^2.
    """
    f, g = _field_state(field, x)
    tforms = _connection_coeffs(f, g)
    frame = gh_frame(f)
    if fd_step is None:
        g_for_dtheta = g
    else:
        h = float(fd_step)
        if h <= 0.0:
            raise PreconditionError("fd_step must be positive")
        g_for_dtheta = np.zeros(3)
        for axis in range(3):
            step = np.zeros(3)
            step[axis] = h
            g_for_dtheta[axis] = (
                field.eval(np.asarray(x, dtype=float) + step)
                - field.eval(np.asarray(x, dtype=float) - step)
            ) / (2.0 * h)
    worst = 0.0
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        w1, m1 = _wedge_12(*tforms[j], *frame.theta[k])
        w2, m2 = _wedge_12(*tforms[k], *frame.theta[j])
        w = w1 - w2
        m = (m1 - m2) - (-2.0 * g_for_dtheta[i])
        worst = max(worst, float(np.max(np.abs(w))), abs(m))
    return worst


def gh_curvature(field, x):
    """Curvature matrix W of the 4-metric built from the field, at x.

    W is the trace-free part of (f_ij / f^2 - 3 f_i f_j / f^3); it is the
    only nonvanishing curvature component of the construction, symmetric
    and trace-free by design.  Requires a positive field value.
    """
    f, g = _field_state(field, x)
    hess = np.asarray(field.hess(x), dtype=float)
    w = hess / f ** 2 - 3.0 * np.outer(g, g) / f ** 3
    w = 0.5 * (w + w.T)
    return w - (np.trace(w) / 3.0) * np.eye(3)


def _curvature_forms(field, x, fd_step=None):
    """The three curvature 2-forms F_i = dT_i - T_j ^ T_k at x.

    The quadratic term enters with the sign that annihilates the flat
    single-pole model; this is also the unique sign for which the result
    is purely anti-self-dual (no omega components).  With fd_step set,
    the coefficient Jacobians of T_i are taken by central finite
    differences of the connection coefficients instead of analytically.
    """
    x = np.asarray(x, dtype=float)
    f, g = _field_state(field, x)
    tforms = _connection_coeffs(f, g)
    if fd_step is None:
        hess = np.asarray(field.hess(x), dtype=float)
        dps = []
        dqs = []
        for i in range(3):
            e = np.zeros(3)
            e[i] = 1.0
            dp = hess[i, :] / f ** 2 - 2.0 * g[i] * g / f ** 3
            dq = np.empty((3, 3))
            for l in range(3):
                dq[l, :] = (
                    np.cross(hess[l, :], e) / f
                    - np.cross(g, e) * g[l] / f ** 2
                )
            dps.append(dp)
            dqs.append(dq)
    else:
        h = float(fd_step)
        if h <= 0.0:
            raise PreconditionError("fd_step must be positive")
        plus = []
        minus = []
        for axis in range(3):
            step = np.zeros(3)
            step[axis] = h
            plus.append(_connection_coeffs(*_field_state(field, x + step)))
            minus.append(_connection_coeffs(*_field_state(field, x - step)))
        dps = []
        dqs = []
        for i in range(3):
            dp = np.array([
                (plus[l][i][0] - minus[l][i][0]) / (2.0 * h) for l in range(3)
            ])
            dq = np.array([
                (plus[l][i][1] - minus[l][i][1]) / (2.0 * h) for l in range(3)
            ])
            dps.append(dp)
            dqs.append(dq)
    forms = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        du, dv = _d_oneform(*tforms[i], dps[i], dqs[i], g)
        qu, qv = _wedge_11(*tforms[j], *tforms[k])
        forms.append((du - qu, dv - qv))
    return forms, f


def _project_theta(forms, f):
    """Expand curvature 2-forms in the theta basis.

    Returns (W, sd_residual): W[i, j] is the theta_j coefficient of F_i,
    in the orientation matching gh_curvature, and sd_residual is the
    max-norm of the self-dual (omega) components, which should vanish.
    """
    w = np.empty((3, 3))
    sd = 0.0
    for i, (u, v) in enumerate(forms):
        w[i, :] = -(u - v / f) / 2.0
        sd = max(sd, float(np.max(np.abs((u + v / f) / 2.0))))
    return w, sd


def gh_curvature_fd_check(field, x, h=1e-3):
    """Max-norm discrepancy between two routes to the curvature matrix.

    Route one is the closed form of gh_curvature; route two assembles the
    curvature 2-forms from finite differences of the connection
    coefficients and expands them in the anti-self-dual basis.  For a
    constant field both routes vanish identically; in general the
    discrepancy decays at least linearly in h.
    """
    w_alg = gh_curvature(field, x)
    forms, f = _curvature_forms(field, x, fd_step=h)
    w_fd, _ = _project_theta(forms, f)
    return float(np.max(np.abs(w_fd - w_alg)))


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares growth fit of the curvature norm along a ray.

    exponent: slope of log ||W|| against log r (nan when zero_signal);
    zero_signal: True when the curvature is numerically zero along the
    ray and no rate can be fitted; radii/norms: the data behind the fit.
    """

    exponent: float
    zero_signal: bool
    radii: tuple
    norms: tuple


def curvature_growth(field, radii, x1=0.0, phi=0.0, zero_tol=1e-9):
    """Fit the growth rate of ||W|| along a ray toward the singular axis.

    Sample points are (x1, r cos(phi), r sin(phi)) for r in radii.  At
    least four radii are required.  When every sampled norm is below
    zero_tol the fit is rejected with the zero_signal flag instead of
    producing a meaningless slope.
    """
    radii = sorted(float(r) for r in radii)
    if len(radii) < 4:
        raise ValueError("growth fit needs at least four radii")
    if radii[0] <= 0.0:
        raise PreconditionError("radii must be positive")
    norms = []
    for r in radii:
        x = np.array([x1, r * math.cos(phi), r * math.sin(phi)])
        w = gh_curvature(field, x)
        norms.append(float(np.linalg.norm(w)))
    if max(norms) <= zero_tol:
        return GrowthFit(float("nan"), True, tuple(radii), tuple(norms))
    slope = np.polyfit(np.log(radii), np.log(norms), 1)[0]
    return GrowthFit(float(slope), False, tuple(radii), tuple(norms))


# ----------------------------------------------------------------------
# circle-weighted holomorphic pair
# ----------------------------------------------------------------------

def _segment_pole_guard(field, x):
    """Reject the line integral when a pole sits on the segment."""
    poles = getattr(field, "poles", None)
    if not poles:
        return
    x = np.asarray(x, dtype=float)
    a = np.array([0.0, x[1], x[2]])
    seg = np.array([x[0], 0.0, 0.0])
    seg2 = float(seg @ seg)
    for p in poles:
        d = np.asarray(p, dtype=float) - a
        t = float(np.clip((d @ seg) / seg2, 0.0, 1.0)) if seg2 > 0.0 else 0.0
        gap = float(np.linalg.norm(d - t * seg))
        if gap < 1e-9 * (1.0 + abs(x[0])):
            raise PreconditionError("field pole lies on the integration segment")


def holo_potential_u(field, x, n_panels=8, order=12):
    """Line-integral potential u(x) = int_0^{x1} f(t, x2, x3) dt.

    Returns an EvalResult whose error field is the embedded quadrature
    estimate.  The integrand is sampled with composite Gauss panels; a
    field pole on the segment is rejected up front.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError("evaluation points are 3-vectors")
    if x[0] == 0.0:
        return EvalResult(0.0, 0.0)
    _segment_pole_guard(field, x)

    def integrand(ts):
        return np.array([
            field.eval(np.array([t, x[1], x[2]])) for t in np.asarray(ts)
        ])

    edges = np.linspace(0.0, x[0], n_panels + 1)
    val, err = panel_integrate(integrand, edges, n_hi=order, n_lo=order // 2)
    return EvalResult(val, abs(err) + 1e-15 * abs(val))


@dataclass(frozen=True)
class HoloPair:
    """Values at one point of the weight +1 / weight -1 holomorphic pair.

    h transforms with weight one under the circle action (rotating the
    fiber angle by phi multiplies h by e^{i phi}), h_tilde with weight
    minus one, and their product equals the squared seed value
    h0_at_base^2 wherever the field is mirror-symmetric across the
    x1 = 0 slice.
    """

    h: complex
    h_tilde: complex
    h0_at_base: complex


def holo_pair(field, x, psi, h0, mirror_tol=1e-8):
    """Evaluate the weighted holomorphic pair at chart point x, fiber psi.

    h0 is the holomorphic seed on the x1 = 0 slice, called with the
    complex coordinate x2 + i*x3.  The construction requires the field to
    be mirror-symmetric across x1 = 0; the x1-derivative of the field at
    the mirror slice is checked against mirror_tol before integrating.
    The weight -1 partner is anchored at the mirror image -x1, which
    coincides with the analytic continuation exactly when the symmetry
    holds, making the product invariance a genuine numerical check.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError("evaluation points are 3-vectors")
    base = np.array([0.0, x[1], x[2]])
    g = np.asarray(field.grad(base), dtype=float)
    scale = float(np.max(np.abs(g))) + abs(field.eval(base))
    if abs(g[0]) > mirror_tol * max(scale, 1e-300):
        raise PreconditionError(
            "field is not mirror-symmetric across the x1 = 0 slice; "
            "the holomorphic pair construction does not apply"
        )
    u_plus = holo_potential_u(field, x)
    u_minus = holo_potential_u(field, np.array([-x[0], x[1], x[2]]))
    seed = complex(h0(complex(x[1], x[2])))
    phase = cmath.exp(1j * float(psi))
    h = cmath.exp(u_plus.value) * seed * phase
    # the weight -1 partner carries e^{-u(x1)}; anchoring it at the mirror
    # image (+u(-x1)) is identical exactly when the field is even in x1,
    # which turns the product invariance into a real numerical check
    h_tilde = cmath.exp(u_minus.value) * seed / phase
    return HoloPair(h, h_tilde, seed)


def flat_model_map(z, w):
    """Quotient map of flat 4-space by the weighted circle action.

    Sends (z, w) in C^2 to (Re(zw), Im(zw), (|z|^2 - |w|^2)/2); the image
    point's distance to the origin is (|z|^2 + |w|^2)/2, the fixed point
    (0, 0) of the action maps to the origin, and the action
    (z, w) -> (lam z, lam^{-1} w) with |lam| = 1 fixes the image.
    """
    z = complex(z)
    w = complex(w)
    zw = z * w
    return np.array([zw.real, zw.imag, 0.5 * (abs(z) ** 2 - abs(w) ** 2)])
