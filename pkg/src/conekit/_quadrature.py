"""Composite Gauss-Legendre quadrature with embedded error estimates.

All integrals in this package reduce to 1-d quadratures of smooth (possibly
oscillatory, possibly endpoint-singular) integrands.  We use fixed-order
Gauss-Legendre panels: a 16-point rule per panel for the value and the
difference against the embedded 8-point rule as the (very conservative)
error estimate.  Endpoint singularities of power/log type are handled by
geometric panel grading toward the endpoint; oscillation is handled by
keeping panels at or below a half period.
"""

from functools import lru_cache

import numpy as np

__all__ = [
    "gauss_rule",
    "panel_nodes",
    "panel_integrate",
    "integrate",
    "graded_edges",
    "osc_edges",
    "split_wide_panels",
    "PanelRule",
]


@lru_cache(maxsize=None)
def gauss_rule(n):
    """Nodes and weights of n-point Gauss-Legendre on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def panel_nodes(edges, n=16):
    """All quadrature nodes for the given panel edges, plus weight matrix.

    Returns (nodes, weights) as flat arrays of length n*(len(edges)-1);
    sum(f(nodes)*weights) is the composite rule.
    """
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1]
    h = np.diff(edges)
    x, w = gauss_rule(n)
    nodes = (a[:, None] + h[:, None] * x[None, :]).ravel()
    weights = (h[:, None] * w[None, :]).ravel()
    return nodes, weights


def panel_integrate(f, edges, n_hi=16, n_lo=8):
    """Integrate a vectorized scalar integrand over consecutive panels.

    Returns (value, err) where err sums per-panel |hi - lo| differences.
    """
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1]
    h = np.diff(edges)
    xh, wh = gauss_rule(n_hi)
    xl, wl = gauss_rule(n_lo)
    pts_h = a[:, None] + h[:, None] * xh[None, :]
    pts_l = a[:, None] + h[:, None] * xl[None, :]
    vals = np.asarray(f(np.concatenate([pts_h.ravel(), pts_l.ravel()])), dtype=float)
    vh = vals[: pts_h.size].reshape(pts_h.shape)
    vl = vals[pts_h.size:].reshape(pts_l.shape)
    hi = (vh * wh).sum(axis=1) * h
    lo = (vl * wl).sum(axis=1) * h
    return float(hi.sum()), float(np.abs(hi - lo).sum())


def integrate(f, edges, rel_tol=1e-12, abs_floor=0.0, max_rounds=3):
    """panel_integrate with uniform bisection until the embedded estimate
    meets rel_tol (or abs_floor), at most max_rounds refinements."""
    edges = np.asarray(edges, dtype=float)
    val, err = panel_integrate(f, edges)
    rounds = 0
    while err > max(rel_tol * abs(val), abs_floor) and rounds < max_rounds:
        mids = (edges[:-1] + edges[1:]) / 2.0
        edges = np.sort(np.concatenate([edges, mids]))
        val, err = panel_integrate(f, edges)
        rounds += 1
    return val, err


def graded_edges(a, b, levels=40, ratio=2.0):
    """Panel edges on [a, b] graded geometrically toward a.

    The first panel has width (b-a)/ratio**levels; each following panel
    grows by `ratio`.  Suitable for integrable endpoint singularities
    (powers, logs) at a.
    """
    if not b > a:
        raise ValueError("graded_edges needs b > a")
    widths = (b - a) * (ratio ** np.arange(levels + 1, dtype=float)) / ratio**levels
    edges = a + np.concatenate([[0.0], np.cumsum(widths)])
    edges[-1] = b
    # normalize the accumulated sum so the last edge lands exactly on b
    scale = (b - a) / (edges[-1] - a)
    return a + (edges - a) * scale


def osc_edges(lo, hi, half_period, max_panels=4000):
    """Uniform panel edges on [lo, hi] of width <= half_period."""
    if not hi > lo:
        raise ValueError("osc_edges needs hi > lo")
    n = int(np.ceil((hi - lo) / half_period))
    n = min(max(n, 4), max_panels)
    return np.linspace(lo, hi, n + 1)


def split_wide_panels(edges, max_width, max_panels=6000):
    """Subdivide panels so none is wider than max_width (within a budget)."""
    edges = np.asarray(edges, dtype=float)
    widths = np.diff(edges)
    factor = np.maximum(1, np.ceil(widths / max_width).astype(int))
    total = int(factor.sum())
    if total > max_panels:  # scale back uniformly rather than refuse
        factor = np.maximum(1, (factor * (max_panels / total)).astype(int))
    pieces = [
        np.linspace(edges[i], edges[i + 1], factor[i] + 1)[:-1]
        for i in range(len(widths))
    ]
    return np.concatenate(pieces + [edges[-1:]])


class PanelRule:
    """Composite Gauss rule that integrates several integrands on one set of
    nodes, with the embedded lower-order rule supplying per-integrand error
    estimates.

    Evaluate the integrands on `.nodes` (shape: total node count) as rows of
    a matrix and pass it to `.integrate`.
    """

    def __init__(self, edges, n_hi=16, n_lo=8):
        edges = np.asarray(edges, dtype=float)
        a = edges[:-1]
        h = np.diff(edges)
        xh, wh = gauss_rule(n_hi)
        xl, wl = gauss_rule(n_lo)
        self._n_hi_total = len(a) * n_hi
        pts_h = a[:, None] + h[:, None] * xh[None, :]
        pts_l = a[:, None] + h[:, None] * xl[None, :]
        self.nodes = np.concatenate([pts_h.ravel(), pts_l.ravel()])
        self._w_hi = (h[:, None] * wh[None, :]).ravel()
        self._w_lo = (h[:, None] * wl[None, :]).ravel()
        self._panels = len(a)
        self._n_hi = n_hi
        self._n_lo = n_lo

    def integrate(self, values):
        """values: (..., len(nodes)) array -> (value, err) arrays of shape (...)."""
        values = np.asarray(values, dtype=float)
        vh = values[..., : self._n_hi_total]
        vl = values[..., self._n_hi_total:]
        hi_panels = (vh * self._w_hi).reshape(*values.shape[:-1], self._panels, self._n_hi).sum(axis=-1)
        lo_panels = (vl * self._w_lo).reshape(*values.shape[:-1], self._panels, self._n_lo).sum(axis=-1)
        value = hi_panels.sum(axis=-1)
        err = np.abs(hi_panels - lo_panels).sum(axis=-1)
        return value, err
