"""Exact rational stability numbers for toric surfaces.

Everything here runs in exact rational arithmetic (fractions.Fraction):
polygon areas and moments of affine Hamiltonians, lattice-boundary
integrals, the resulting obstruction functional, its pair version with a
divisor correction weighted by (1 - beta), and the critical cone angle
where the pair functional changes sign.

The obstruction functional of a lattice polygon P and affine H is

    fut(P, H) = int_{boundary P} H dsigma - (sigma(P) / area(P)) * int_P H,

where dsigma assigns each edge its lattice length (Euclidean length
divided by the length of the primitive integer direction) and sigma(P)
is the total boundary mass.  Adding a constant to H leaves the value
unchanged, so only the linear part of H matters.

Polygon/divisor fixtures ship as TOML files with exact [numerator,
denominator] entries; see load_fixture.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "LatticePolygon",
    "AffineHamiltonian",
    "InvariantCurve",
    "PairResult",
    "polygon_area",
    "polygon_moment",
    "boundary_integral",
    "toric_futaki",
    "divisor_volume",
    "divisor_moment",
    "pair_futaki",
    "critical_beta",
    "load_fixture",
    "fixture_path",
    "FIXTURE_NAMES",
]

_FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
FIXTURE_NAMES = ("x1", "x2", "p2")


def _frac(value):
    """Exact rational from an int, a Fraction, or a [num, den] pair."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rational data")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
    raise ValueError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class LatticePolygon:
    """Strictly convex polygon with rational vertices, counterclockwise."""

    vertices: tuple

    def __init__(self, vertices):
        verts = tuple((_frac(x), _frac(y)) for x, y in vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least three vertices")
        n = len(verts)
        for i in range(n):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % n]
            cx, cy = verts[(i + 2) % n]
            cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if cross <= 0:
                raise ValueError(
                    "vertices must be strictly convex in counterclockwise order"
                )
        object.__setattr__(self, "vertices", verts)

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n]


@dataclass(frozen=True)
class AffineHamiltonian:
    """H(x, y) = a*x + b*y + c with exact rational coefficients."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __init__(self, a, b, c):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))

    def __call__(self, x, y):
        return self.a * _frac(x) + self.b * _frac(y) + self.c

    def shifted(self, t):
        return AffineHamiltonian(self.a, self.b, self.c + _frac(t))


@dataclass(frozen=True)
class InvariantCurve:
    """Circle-invariant divisor component, encoded by its Hamiltonian data.

    h_lo/h_hi bound the Hamiltonian on the component.  When h_lo < h_hi
    the component is a weight-one invariant sphere and its volume is
    forced to h_hi - h_lo (validated); at a constant level the volume is
    an independent input.
    """

    h_lo: Fraction
    h_hi: Fraction
    vol: Fraction
    mult: int

    def __init__(self, h_lo, h_hi, vol, mult=1):
        h_lo, h_hi, vol = _frac(h_lo), _frac(h_hi), _frac(vol)
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise ValueError("mult must be a positive integer")
        if h_lo > h_hi:
            raise ValueError("h_lo must not exceed h_hi")
        if vol <= 0:
            raise ValueError("curve volume must be positive")
        if h_lo < h_hi and vol != h_hi - h_lo:
            raise ValueError(
                "a component sweeping a Hamiltonian interval must have "
                "vol = h_hi - h_lo"
            )
        object.__setattr__(self, "h_lo", h_lo)
        object.__setattr__(self, "h_hi", h_hi)
        object.__setattr__(self, "vol", vol)
        object.__setattr__(self, "mult", mult)


def polygon_area(polygon):
    """Exact shoelace area of the polygon."""
    total = Fraction(0)
    for (ax, ay), (bx, by) in polygon.edges():
        total += ax * by - bx * ay
    area = total / 2
    if area <= 0:
        raise ValueError("polygon area must be positive")
    return area


def polygon_moment(polygon, hamiltonian):
    """Exact integral of the affine Hamiltonian over the polygon.

    Triangulates from the first vertex; an affine integrand integrates
    over a triangle to its area times the value at the centroid.
    """
    verts = polygon.vertices
    x0, y0 = verts[0]
    total = Fraction(0)
    for i in range(1, len(verts) - 1):
        x1, y1 = verts[i]
        x2, y2 = verts[i + 1]
        darea = ((x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)) / 2
        cx = (x0 + x1 + x2) / 3
        cy = (y0 + y1 + y2) / 3
        total += darea * hamiltonian(cx, cy)
    return total


def _lattice_length(dx, dy):
    """Lattice length of an edge vector with rational components."""
    if dx == 0 and dy == 0:
        raise ValueError("degenerate (zero-length) edge")
    den = (dx.denominator * dy.denominator) // gcd(
        dx.denominator, dy.denominator
    )
    ax = int(dx * den)
    ay = int(dy * den)
    return Fraction(gcd(abs(ax), abs(ay)), den)


def boundary_integral(polygon, hamiltonian):
    """(integral of H over the boundary, total boundary mass), exactly.

    The boundary measure gives each edge its lattice length; an affine H
    integrates along an edge to lattice length times the mean of its
    endpoint values.
    """
    total = Fraction(0)
    perimeter = Fraction(0)
    for (ax, ay), (bx, by) in polygon.edges():
        length = _lattice_length(bx - ax, by - ay)
        perimeter += length
        total += length * (hamiltonian(ax, ay) + hamiltonian(bx, by)) / 2
    return total, perimeter


def toric_futaki(polygon, hamiltonian):
    """Obstruction functional: boundary integral minus scaled moment."""
    area = polygon_area(polygon)
    moment = polygon_moment(polygon, hamiltonian)
    boundary, perimeter = boundary_integral(polygon, hamiltonian)
    return boundary - (perimeter / area) * moment


def divisor_volume(curves):
    """Total volume of the divisor: sum of mult * vol."""
    return sum((Fraction(c.mult) * c.vol for c in curves), Fraction(0))


def divisor_moment(curves):
    """Exact integral of the Hamiltonian over the divisor.

    A component sweeping [h_lo, h_hi] with unit speed contributes
    (h_hi^2 - h_lo^2)/2; a component at a constant level contributes its
    level times its volume.
    """
    total = Fraction(0)
    for c in curves:
        if c.h_lo < c.h_hi:
            total += Fraction(c.mult) * (c.h_hi ** 2 - c.h_lo ** 2) / 2
        else:
            total += Fraction(c.mult) * c.h_lo * c.vol
    return total


@dataclass(frozen=True)
class PairResult:
    """Exact data of the pair obstruction polynomial.

    futaki_of_beta is the coefficient pair (c0, c1) of the polynomial
    c0 + c1*(1 - beta); c0 equals fut_Y and c1 equals -bracket.
    beta_critical is its root in (0, 1], or None.
    """

    fut_Y: Fraction
    vol_X: Fraction
    int_X_H: Fraction
    vol_Delta: Fraction
    int_Delta_H: Fraction
    bracket: Fraction
    futaki_of_beta: tuple
    beta_critical: object

    def futaki_at(self, beta):
        c0, c1 = self.futaki_of_beta
        return c0 + c1 * (1 - _frac(beta))


def pair_futaki(fut_Y, vol_X, int_X_H, vol_Delta, int_Delta_H):
    """Pair obstruction: fut_Y - (1-beta) * bracket, with its root.

    bracket = int_Delta_H - (vol_Delta / vol_X) * int_X_H.  The root in
    (0, 1] is reported when the bracket is nonzero and the root lands in
    that interval; otherwise beta_critical is None.
    """
    fut_Y, vol_X, int_X_H, vol_Delta, int_Delta_H = map(
        _frac, (fut_Y, vol_X, int_X_H, vol_Delta, int_Delta_H)
    )
    if vol_X <= 0:
        raise ValueError("vol_X must be positive")
    bracket = int_Delta_H - (vol_Delta / vol_X) * int_X_H
    beta_crit = None
    if bracket != 0:
        beta = 1 - fut_Y / bracket
        if 0 < beta <= 1:
            beta_crit = beta
    return PairResult(
        fut_Y=fut_Y,
        vol_X=vol_X,
        int_X_H=int_X_H,
        vol_Delta=vol_Delta,
        int_Delta_H=int_Delta_H,
        bracket=bracket,
        futaki_of_beta=(fut_Y, -bracket),
        beta_critical=beta_crit,
    )


def critical_beta(result):
    """Root of the pair polynomial in (0, 1], or None."""
    return result.beta_critical


def fixture_path(name):
    """Filesystem path of a named fixture shipped with the package."""
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}")
    return os.path.join(_FIXTURE_DIR, name + ".toml")


def load_fixture(name_or_path):
    """Load a polygon/Hamiltonian/divisor fixture from a TOML file.

    Accepts a shipped fixture name ('x1', 'x2', 'p2') or a path.  All
    numeric entries are exact [numerator, denominator] pairs; mult is a
    plain positive integer.  Returns a dict with keys 'polygon',
    'hamiltonian', and 'curves' (empty tuple when the file has none).
    """
    import tomli

    path = (
        fixture_path(name_or_path)
        if name_or_path in FIXTURE_NAMES
        else name_or_path
    )
    with open(path, "rb") as fh:
        raw = tomli.load(fh)
    polygon = LatticePolygon(raw["vertices"])
    ham = raw["hamiltonian"]
    hamiltonian = AffineHamiltonian(ham["a"], ham["b"], ham["c"])
    curves = tuple(
        InvariantCurve(c["h_lo"], c["h_hi"], c["vol"], c["mult"])
        for c in raw.get("curves", ())
    )
    return {"polygon": polygon, "hamiltonian": hamiltonian, "curves": curves}
