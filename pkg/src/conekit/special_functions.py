"""Bessel functions and the generalized factorial, with error estimates.

The kernels J_nu, I_nu, K_nu drive every Green's-function formula in this
package.  This module evaluates them from scratch: power series where the
series is well conditioned, real integral representations elsewhere.  Every
result carries an estimated absolute error (series truncation + rounding,
or an embedded-rule quadrature estimate).  scipy is deliberately not used
here -- other modules use it as a fast vectorized backend, and the test
suite plays the two implementations off against each other.

Also provides numerical checks of two inequalities used to control the
convergence of the modal Green's-function series: a moment bound on K_p
against the generalized factorial, and a binomial-type ratio bound.
"""

import math
from typing import NamedTuple

import numpy as np

from ._quadrature import graded_edges, osc_edges, panel_integrate

__all__ = [
    "PreconditionError",
    "EvalResult",
    "gamma_fact",
    "bessel_j",
    "bessel_i",
    "bessel_k",
    "bessel_k_reflect",
    "lemma1_check",
    "lemma2_check",
]


class PreconditionError(ValueError):
    """Raised when an argument violates a documented precondition."""


class EvalResult(NamedTuple):
    """A numerical value together with an estimated absolute error."""

    value: float
    abs_error: float

    def __float__(self):
        return self.value


def gamma_fact(a):
    """Generalized factorial a! = Gamma(a+1), defined for a > -1.

    Relative accuracy is that of the C library Gamma (well below 1e-13
    throughout the double range); overflow past a ~ 170.6 raises.
    """
    a = float(a)
    if not a > -1.0:
        raise PreconditionError(f"gamma_fact requires a > -1, got {a}")
    value = math.gamma(a + 1.0)  # raises OverflowError beyond ~170.62
    return EvalResult(value, 1e-14 * abs(value))


# ---------------------------------------------------------------------------
# J_nu
# ---------------------------------------------------------------------------

# Above this argument the alternating power series loses too many digits to
# cancellation (roughly e^x of amplification), so we switch to the arc
# integral representation, whose integrand is bounded by 1.
_J_SERIES_CUTOFF = 16.0
_LOG_HALF = math.log(0.5)


def _j_series(nu, x):
    """Ascending series for J_nu(x); returns (value, abs_error)."""
    if x == 0.0:
        return (1.0 if nu == 0.0 else 0.0), 0.0
    # leading coefficient (x/2)^nu / nu!, built in log space; log(x) + log(1/2)
    # rather than log(x/2), which would hit 0 for subnormal x
    log_t0 = nu * (math.log(x) + _LOG_HALF) - math.lgamma(nu + 1.0)
    if log_t0 < -745.0:
        return 0.0, 1e-300
    t = math.exp(log_t0)
    q = 0.25 * x * x
    total = t
    peak = abs(t)
    for j in range(1, 500):
        t *= -q / (j * (nu + j))
        total += t
        if abs(t) > peak:
            peak = abs(t)
        # next term, used both for the stopping rule and the error report
        t_next = abs(t) * q / ((j + 1) * (nu + j + 1))
        if t_next < abs(t) and t_next < 1e-17 * max(abs(total), 1e-300):
            return total, t_next + 2e-16 * peak + 2e-15 * abs(log_t0) * abs(total)
    return total, abs(t) + 2e-16 * peak + 2e-15 * abs(log_t0) * abs(total)


def _j_integral(nu, x):
    """Arc integral for J_nu(x), plus the decaying correction that appears
    for non-integer order."""
    # phase nu*p - x*sin(p) varies at rate <= nu + x
    edges = osc_edges(0.0, math.pi, math.pi / max(nu + x, 4.0))
    val, err = panel_integrate(lambda p: np.cos(nu * p - x * np.sin(p)), edges)
    val /= math.pi
    err /= math.pi
    if abs(nu - round(nu)) > 1e-12:
        # integrand e^{-nu u - x sinh u} is below 1e-324 past this point
        upper = math.asinh(746.0 / x) + 1.0
        tail_val, tail_err = panel_integrate(
            lambda u: np.exp(-nu * u - x * np.sinh(u)),
            graded_edges(0.0, upper, levels=30),
        )
        s = math.sin(nu * math.pi) / math.pi
        val -= s * tail_val
        err += abs(s) * tail_err
    return val, err + 1e-15


def bessel_j(nu, x):
    """Bessel function of the first kind, J_nu(x), for nu >= 0, x >= 0."""
    nu = float(nu)
    x = float(x)
    if nu < 0.0:
        raise PreconditionError(f"bessel_j requires nu >= 0, got {nu}")
    if x < 0.0:
        raise PreconditionError(f"bessel_j requires x >= 0, got {x}")
    if x <= _J_SERIES_CUTOFF:
        value, err = _j_series(nu, x)
    else:
        value, err = _j_integral(nu, x)
    return EvalResult(value, err)


# ---------------------------------------------------------------------------
# I_nu
# ---------------------------------------------------------------------------


def bessel_i(nu, x):
    """Modified Bessel function I_nu(x) by its all-positive power series.

    With no sign changes the summation is stable for every x that fits in
    a double; growth ~ e^x / sqrt(2 pi x) makes x beyond ~709 overflow.
    """
    nu = float(nu)
    x = float(x)
    if nu < 0.0:
        raise PreconditionError(f"bessel_i requires nu >= 0, got {nu}")
    if x < 0.0:
        raise PreconditionError(f"bessel_i requires x >= 0, got {x}")
    if x == 0.0:
        return EvalResult(1.0 if nu == 0.0 else 0.0, 0.0)
    if x - 0.5 * math.log(2.0 * math.pi * x) > 708.5:
        raise OverflowError(f"bessel_i({nu}, {x}) exceeds the double range")
    log_t0 = nu * (math.log(x) + _LOG_HALF) - math.lgamma(nu + 1.0)
    if log_t0 < -745.0:
        return EvalResult(0.0, 1e-300)
    t = math.exp(log_t0)
    q = 0.25 * x * x
    total = t
    j_past_peak = 0.5 * x  # terms grow until roughly j ~ x/2
    terms = 1
    for j in range(1, 30000):
        t *= q / (j * (nu + j))
        total += t
        terms += 1
        if j > j_past_peak and t < 1e-17 * total:
            break
    # positive terms: no cancellation, but rounding drifts ~ sqrt(n) ulps;
    # the leading log-space coefficient adds rounding amplified by |log t0|
    return EvalResult(
        total,
        t + total * (1.2e-16 * math.sqrt(terms) + 2e-15 * abs(log_t0)),
    )


# ---------------------------------------------------------------------------
# K_nu
# ---------------------------------------------------------------------------


def _logcosh(z):
    z = np.abs(z)
    return z + np.log1p(np.exp(-2.0 * z)) - math.log(2.0)


def _k_truncation(nu, x):
    """Smallest U (within a margin) with x*cosh(U) - nu*U >= 785."""
    target = 785.0
    u = math.acosh(target / x + 1.0)
    for _ in range(80):
        u_new = math.acosh((target + nu * u) / x + 1.0)
        if abs(u_new - u) < 1e-9:
            break
        u = u_new
    return u + 0.25


def bessel_k(nu, x):
    """Macdonald function K_nu(x) = int_0^inf cosh(nu*u) e^{-x cosh u} du.

    The integrand decays doubly exponentially; we truncate where the
    exponent is below the double underflow threshold and apply composite
    Gauss panels.  Valid for every nu >= 0, integer orders included.
    """
    nu = float(nu)
    x = float(x)
    if not x > 0.0:
        raise PreconditionError(f"bessel_k requires x > 0, got {x} (K diverges at 0)")
    if nu < 0.0:
        raise PreconditionError(f"bessel_k requires nu >= 0, got {nu}")
    upper = _k_truncation(nu, x)
    # the integrand peaks at u* = asinh(nu/x); rescale so its magnitude is
    # O(1) on the grid, which keeps very large orders inside the exponent
    # range of doubles
    probe = np.linspace(0.0, upper, 257)
    shift = float(np.max(_logcosh(nu * probe) - x * np.cosh(probe)))

    def f(u):
        return np.exp(_logcosh(nu * u) - x * np.cosh(u) - shift)

    width = min(0.25, 0.5 / math.sqrt(x)) if x > 4.0 else 0.25
    n_panels = max(12, int(math.ceil(upper / width)))
    edges = np.linspace(0.0, upper, n_panels + 1)
    val, err = panel_integrate(f, edges)
    scale = math.exp(shift) if shift < 709.0 else None
    if scale is None:
        raise OverflowError(f"bessel_k({nu}, {x}) exceeds the double range")
    value = val * scale
    return EvalResult(value, err * scale + 1e-15 * abs(value))


def _i_series_signed(order, x):
    """Power series sum for I_order(x) where `order` may be any non-integer
    real > -inf; returns (value, peak_term) for cancellation accounting."""
    t = (x / 2.0) ** order / math.gamma(order + 1.0)
    q = 0.25 * x * x
    total = t
    peak = abs(t)
    j_past_peak = 0.5 * x + abs(order)
    for j in range(1, 30000):
        t *= q / (j * (order + j))  # (order + j) < 0 flips signs as required
        total += t
        if abs(t) > peak:
            peak = abs(t)
        if j > j_past_peak and abs(t) < 1e-17 * max(abs(total), 1e-300):
            break
    return total, peak


def bessel_k_reflect(nu, x):
    """K_nu via the reflection combination pi/(2 sin(pi nu)) (I_{-nu} - I_nu).

    Only sensible away from integer orders, where the prefactor blows up
    and the difference cancels; we refuse orders within 1e-3 of an integer.
    The reported error includes the cancellation amplification, which grows
    like e^{2x}: this route is a cross-check, not a production evaluator.
    """
    nu = float(nu)
    x = float(x)
    if not x > 0.0:
        raise PreconditionError(f"bessel_k_reflect requires x > 0, got {x}")
    if nu < 0.0:
        raise PreconditionError(f"bessel_k_reflect requires nu >= 0, got {nu}")
    if abs(nu - round(nu)) < 1e-3:
        raise PreconditionError(
            f"bessel_k_reflect: order {nu} is within 1e-3 of an integer; "
            "the reflection formula cancels catastrophically there"
        )
    minus, peak_m = _i_series_signed(-nu, x)
    plus, peak_p = _i_series_signed(nu, x)
    pref = math.pi / (2.0 * math.sin(math.pi * nu))
    value = pref * (minus - plus)
    # cancellation: both sums carry rounding noise at the scale of their
    # largest term, which the subtraction does not shrink.  Near an integer
    # order the I_{-nu} series additionally divides by (j - nu), a nearly
    # cancelled quantity that amplifies the rounding of nu itself, and the
    # Gamma factor in its leading term sits near a pole; both scale ~ nu/d.
    d = abs(nu - round(nu))
    inflate = 6e-16 + 2.5e-16 * nu / d
    err = abs(pref) * (peak_m + peak_p + abs(minus) + abs(plus)) * inflate
    return EvalResult(value, err + 1e-15 * abs(value))


# ---------------------------------------------------------------------------
# convergence lemmas
# ---------------------------------------------------------------------------


def lemma1_check(p, q):
    """Numerically verify int_0^inf K_p(2x) x^(p+q) dx <= (p+q)!.

    Returns (integral, bound) with integral an EvalResult.  The integral is
    computed by swapping in the cosh representation of K_p and integrating
    out x exactly, which leaves the one-dimensional integral
    (p+q)! * int_0^inf cosh(p u) (2 cosh u)^{-(p+q+1)} du, evaluated by
    composite Gauss panels with an explicit bound on the discarded tail.
    """
    p = float(p)
    q = float(q)
    if p < 0.0 or q < 0.0:
        raise PreconditionError("lemma1_check requires p, q >= 0")
    fact = gamma_fact(p + q)
    # integrand ~ 2^{-(p+q+1)} e^{-(q+1)u} for large u
    upper = 46.0 / (q + 1.0) + 6.0

    def f(u):
        return np.exp(_logcosh(p * u) - (p + q + 1.0) * (_logcosh(u) + math.log(2.0)))

    edges = np.linspace(0.0, upper, max(24, int(upper / 0.4)) + 1)
    val, err = panel_integrate(f, edges)
    tail = math.exp(-(q + 1.0) * upper) / (q + 1.0)
    integral = fact.value * val
    abs_err = fact.value * (err + tail) + fact.abs_error * val + 1e-15 * abs(integral)
    return EvalResult(integral, abs_err), fact.value


def lemma2_check(p, q):
    """Ratio (p+q)! / (p! q! 2^(p+q)) for p, q >= 1, computed in log space.

    For integer arguments this is a central-binomial-type quantity bounded
    by 1; over real arguments it stays below a universal constant barely
    above 1.
    """
    p = float(p)
    q = float(q)
    if p < 1.0 or q < 1.0:
        raise PreconditionError("lemma2_check requires p, q >= 1")
    return math.exp(
        math.lgamma(p + q + 1.0)
        - math.lgamma(p + 1.0)
        - math.lgamma(q + 1.0)
        - (p + q) * math.log(2.0)
    )
