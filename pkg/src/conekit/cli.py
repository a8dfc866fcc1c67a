"""Command-line front end.

Subcommands
-----------
bessel                 tabulate J / I / K values with certified error bounds
green eval             two-point Green's function of the cone Laplacian
green modal            raw per-mode radial integrals (K- or I-route)
green expand           short-distance series against direct evaluation
green probe            Hoelder ratio of a second-derivative kernel
gh curvature           anti-self-dual curvature matrix of a 4-metric
gh growth              curvature growth exponent toward the cone axis
gh holo                paired sections of the twisted bundle and their product
futaki pair            exact invariants of a polygon/divisor fixture
futaki critical        critical cone angle of a fixture
verify                 run the bundled test suite (all, or one module)

Every table-producing command accepts ``--format {csv,json}`` and
``--output PATH`` (stdout when omitted).  Cells are rendered identically
in both formats: floats with 17 significant digits via ``%.17g`` (locale
independent), exact rationals as ``num/den``, so identical invocations
produce byte-identical files.

Exit status: 0 on success, 2 for an unknown command or invalid
parameter, 1 when a computation or file write fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cone_green import (
    ConeParams,
    ConePoint,
    DerivSelector,
    green_eval,
    modal_gk_I,
    modal_gk_K,
    polyhom_eval,
)
from .gibbons_hawking import (
    ConeGreenField,
    FlatNewton,
    MultiPole,
    curvature_growth,
    gh_curvature,
    holo_pair,
)
from .schauder import BumpField, schauder_probe
from .special_functions import PreconditionError, bessel_i, bessel_j, bessel_k
from .toric_futaki import (
    FIXTURE_NAMES,
    divisor_moment,
    divisor_volume,
    load_fixture,
    pair_futaki,
    polygon_area,
    polygon_moment,
    toric_futaki,
)

__all__ = ["emit_table", "parse_and_dispatch", "main"]


# ---------------------------------------------------------------------------
# table rendering
# ---------------------------------------------------------------------------


def _render_cell(value):
    """Locale-independent text for one cell; '' for None."""
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)  # "7/2", integral values collapse to "7"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def emit_table(rows, fmt="csv", path=None, columns=None):
    """Write homogeneous rows as CSV or JSON, to `path` or stdout.

    `rows` is a sequence of mappings sharing one key set; `columns` fixes
    the column order (defaults to the keys of the first row, so it is
    required when `rows` may be empty — an empty table still gets its
    header).  Floats render as %.17g, fractions as num/den, None as the
    empty cell; the JSON document carries the same rendered cells under
    {"columns": [...], "rows": [{...}]}.
    """
    rows = list(rows)
    if columns is None:
        if not rows:
            raise ValueError("empty tables need an explicit column list")
        columns = list(rows[0].keys())
    else:
        columns = list(columns)
    for row in rows:
        if set(row.keys()) != set(columns):
            raise ValueError("rows are not homogeneous with the column list")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_render_cell(row[c]) for c in columns])
        text = buf.getvalue()
    elif fmt == "json":
        doc = {
            "columns": columns,
            "rows": [{c: _render_cell(row[c]) for c in columns} for row in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        raise ValueError(f"unknown table format {fmt!r}; choose csv or json")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def _number(text):
    """A float, also accepting exact fraction syntax like '2/3'."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _number_list(text):
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated number list")
    return tuple(_number(t) for t in items)


def _deriv_selector(text):
    """Parse 'ss:i,j' / 'rs:i' / 'thetas:i' into a DerivSelector."""
    kind, _, rest = text.partition(":")
    try:
        idx = tuple(int(t) for t in rest.split(",")) if rest else ()
        if kind == "ss" and len(idx) == 2:
            return DerivSelector.ss(*idx)
        if kind == "rs" and len(idx) == 1:
            return DerivSelector.rs(idx[0])
        if kind == "thetas" and len(idx) == 1:
            return DerivSelector.thetas(idx[0])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(
        f"bad derivative selector {text!r}; use ss:i,j or rs:i or thetas:i"
    )


def _cone_point(values, params, flag):
    """Build a ConePoint from m numbers (r, theta, s_1..s_{m-2})."""
    if len(values) != params.m:
        raise ValueError(
            f"{flag} needs m = {params.m} numbers r,theta,s..., got {len(values)}"
        )
    return ConePoint(values[0], values[1], tuple(values[2:]))


def _resolve_fixture(text):
    """Shipped fixture name, with or without the .toml suffix, or a path."""
    base = text[:-5] if text.endswith(".toml") else text
    if base in FIXTURE_NAMES and not os.path.exists(text):
        return base
    return text


def _load_fixture_checked(text):
    spec = _resolve_fixture(text)
    try:
        return spec, load_fixture(spec)
    except FileNotFoundError:
        raise ValueError(
            f"fixture {text!r} is neither a shipped name "
            f"{'/'.join(FIXTURE_NAMES)} nor an existing file"
        )


def _gh_field(ns):
    """Harmonic source field selected by --field-kind."""
    kind = ns.field_kind
    if kind == "flat":
        return FlatNewton((0.0, 0.0, 0.0))
    if kind == "two-pole":
        return MultiPole([(-1.0, 0.0, 0.0), (1.0, 0.0, 0.0)], [1.0, 1.0])
    params = ConeParams(ns.beta, 3)
    pole = _cone_point(ns.pole, params, "--pole")
    return ConeGreenField(params, pole)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_bessel(ns):
    kinds = {"J": bessel_j, "I": bessel_i, "K": bessel_k}
    fn = kinds[ns.kind]
    rows = []
    for x in ns.x:
        res = fn(ns.nu, x)
        rows.append(
            {
                "kind": ns.kind,
                "nu": ns.nu,
                "x": x,
                "value": res.value,
                "abs_error": res.abs_error,
            }
        )
    emit_table(rows, ns.format, ns.output, columns=("kind", "nu", "x", "value", "abs_error"))
    return 0


def _cmd_green_eval(ns):
    params = ConeParams(ns.beta, ns.m)
    x = _cone_point(ns.field, params, "--field")
    y = _cone_point(ns.source, params, "--source")
    res = green_eval(
        params, x, y, k_max=ns.k_max, normalized=not ns.raw, rel_tol=ns.tol
    )
    rows = [
        {
            "beta": params.beta,
            "m": params.m,
            "value": res.value,
            "abs_error": res.abs_error,
        }
    ]
    emit_table(rows, ns.format, ns.output, columns=("beta", "m", "value", "abs_error"))
    return 0


def _cmd_green_modal(ns):
    params = ConeParams(ns.beta, ns.m)
    rep = ns.rep
    if rep == "auto":
        rep = "K" if ns.big_r > 0.0 else "I"
    rows = []
    for k in range(ns.k_max + 1):
        if rep == "K":
            res = modal_gk_K(params, k, ns.r, ns.rp, ns.big_r)
        else:
            res = modal_gk_I(params, k, ns.r, ns.rp, ns.big_r)
        rows.append(
            {
                "beta": params.beta,
                "m": params.m,
                "k": k,
                "rep": rep,
                "value": res.value,
                "abs_error": res.abs_error,
            }
        )
    emit_table(
        rows, ns.format, ns.output,
        columns=("beta", "m", "k", "rep", "value", "abs_error"),
    )
    return 0


def _cmd_green_expand(ns):
    params = ConeParams(ns.beta, ns.m)
    x = _cone_point(ns.field, params, "--field")
    y = _cone_point(ns.source, params, "--source")
    series = polyhom_eval(params, x, y, J_max=ns.j_max, k_max=ns.k_max)
    direct = green_eval(params, x, y, normalized=False, rel_tol=ns.tol)
    rows = [
        {
            "beta": params.beta,
            "m": params.m,
            "series": series.value,
            "series_abs_error": series.abs_error,
            "direct": direct.value,
            "direct_abs_error": direct.abs_error,
            "difference": series.value - direct.value,
        }
    ]
    emit_table(
        rows, ns.format, ns.output,
        columns=(
            "beta", "m", "series", "series_abs_error",
            "direct", "direct_abs_error", "difference",
        ),
    )
    return 0


def _cmd_green_probe(ns):
    params = ConeParams(ns.beta, ns.m)
    if len(ns.bump) != params.m + 1:
        raise ValueError(
            f"--bump needs m+1 = {params.m + 1} numbers r,theta,s...,width"
        )
    bump = BumpField(
        _cone_point(ns.bump[:-1], params, "--bump"), ns.bump[-1]
    )
    alphas = ns.alpha
    if alphas is None:
        alphas = (
            (0.5 * params.mu, 0.9 * params.mu)
            if params.beta < 1.0
            else (0.25, 0.5)
        )
    rows = []
    for alpha in alphas:
        ratio = schauder_probe(
            params,
            bump,
            ns.deriv,
            alpha=alpha,
            pair_budget=ns.pairs,
            seed=ns.seed,
            kernel=ns.kernel,
            rel_tol=ns.tol,
        )
        rows.append(
            {"beta": params.beta, "m": params.m, "alpha": alpha, "ratio": ratio}
        )
    emit_table(rows, ns.format, ns.output, columns=("beta", "m", "alpha", "ratio"))
    return 0


def _cmd_gh_curvature(ns):
    field = _gh_field(ns)
    x = np.asarray(ns.point, dtype=float)
    if x.shape != (3,):
        raise ValueError("--point needs exactly three numbers x1,x2,x3")
    W = gh_curvature(field, x)
    row = {
        "field": ns.field_kind,
        "beta": ns.beta if ns.field_kind == "cone" else None,
        "x1": x[0],
        "x2": x[1],
        "x3": x[2],
    }
    for i in range(3):
        for j in range(i, 3):
            row[f"w{i + 1}{j + 1}"] = W[i, j]
    row["frobenius"] = float(np.linalg.norm(W))
    emit_table([row], ns.format, ns.output, columns=tuple(row.keys()))
    return 0


def _cmd_gh_growth(ns):
    if ns.field_kind != "cone":
        raise ValueError("the growth exponent targets the cone axis; "
                         "use --field-kind cone")
    field = _gh_field(ns)
    radii = np.geomspace(ns.rmin, ns.rmax, ns.n_radii)
    fit = curvature_growth(field, radii, x1=ns.x1, phi=ns.phi)
    target = 1.0 / ns.beta - 2.0
    exponent = None if fit.zero_signal else fit.exponent
    rows = [
        {
            "beta": ns.beta,
            "radius": r,
            "w_norm": w,
            "exponent": exponent,
            "target": target,
        }
        for r, w in zip(fit.radii, fit.norms)
    ]
    emit_table(
        rows, ns.format, ns.output,
        columns=("beta", "radius", "w_norm", "exponent", "target"),
    )
    return 0


def _cmd_gh_holo(ns):
    if ns.field_kind == "two-pole":
        raise ValueError("the paired sections need a field even in x1 with "
                         "poles off the integration segment; use cone or flat")
    field = _gh_field(ns)
    x = np.asarray(ns.point, dtype=float)
    if x.shape != (3,):
        raise ValueError("--point needs exactly three numbers x1,x2,x3")
    pair = holo_pair(field, x, ns.psi, lambda z: 1.0)
    product = pair.h * pair.h_tilde
    reference = pair.h0_at_base**2
    rows = [
        {
            "field": ns.field_kind,
            "x1": x[0],
            "x2": x[1],
            "x3": x[2],
            "psi": ns.psi,
            "h_re": pair.h.real,
            "h_im": pair.h.imag,
            "htilde_re": pair.h_tilde.real,
            "htilde_im": pair.h_tilde.imag,
            "product_re": product.real,
            "product_im": product.imag,
            "reference_re": reference.real,
            "reference_im": reference.imag,
        }
    ]
    emit_table(rows, ns.format, ns.output, columns=tuple(rows[0].keys()))
    return 0


def _futaki_result(fixture):
    polygon = fixture["polygon"]
    ham = fixture["hamiltonian"]
    curves = fixture["curves"]
    return pair_futaki(
        toric_futaki(polygon, ham),
        polygon_area(polygon),
        polygon_moment(polygon, ham),
        divisor_volume(curves),
        divisor_moment(curves),
    )


def _cmd_futaki_pair(ns):
    name, fixture = _load_fixture_checked(ns.fixture)
    res = _futaki_result(fixture)
    if ns.beta_table:
        betas = {Fraction(j, 10) for j in range(1, 11)}
        if res.beta_critical is not None:
            betas.add(res.beta_critical)
        rows = [
            {"fixture": name, "beta": b, "futaki": res.futaki_at(b)}
            for b in sorted(betas)
        ]
        emit_table(rows, ns.format, ns.output, columns=("fixture", "beta", "futaki"))
        return 0
    c0, c1 = res.futaki_of_beta
    rows = [
        {
            "fixture": name,
            "futaki": res.fut_Y,
            "area": res.vol_X,
            "moment": res.int_X_H,
            "divisor_volume": res.vol_Delta,
            "divisor_moment": res.int_Delta_H,
            "bracket": res.bracket,
            "poly_const": c0,
            "poly_coeff": c1,
            "beta_critical": res.beta_critical,
        }
    ]
    emit_table(rows, ns.format, ns.output, columns=tuple(rows[0].keys()))
    return 0


def _cmd_futaki_critical(ns):
    name, fixture = _load_fixture_checked(ns.fixture)
    res = _futaki_result(fixture)
    crit = res.beta_critical
    rows = [
        {
            "fixture": name,
            "beta_critical": crit,
            "futaki_at_critical": None if crit is None else res.futaki_at(crit),
        }
    ]
    emit_table(
        rows, ns.format, ns.output,
        columns=("fixture", "beta_critical", "futaki_at_critical"),
    )
    return 0


def _tests_root():
    here = Path(__file__).resolve()
    for cand in (Path.cwd(), here.parents[2] if len(here.parents) > 2 else None):
        if cand is not None and (cand / "tests").is_dir():
            return cand
    return None


def _cmd_verify(ns):
    root = _tests_root()
    if root is None:
        print("error: cannot locate the tests directory", file=sys.stderr)
        return 2
    name = ns.target.replace("-", "_")
    if name == "all":
        target = root / "tests"
    else:
        target = root / "tests" / f"test_{name}.py"
        if not target.is_file():
            known = sorted(p.stem[5:] for p in (root / "tests").glob("test_*.py"))
            print(
                f"error: unknown module {ns.target!r}; choose from: "
                + ", ".join(["all"] + known),
                file=sys.stderr,
            )
            return 2
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", str(target)], cwd=root
    )
    return 0 if proc.returncode == 0 else 1


# ---------------------------------------------------------------------------
# parser assembly and dispatch
# ---------------------------------------------------------------------------


def _add_table_options(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="table format (default csv)")
    p.add_argument("--output", default=None, metavar="PATH",
                   help="write the table here instead of stdout")


def _add_cone_options(p, with_m=True):
    p.add_argument("--beta", type=_number, default=2.0 / 3.0,
                   help="cone angle parameter in (0, 1] (default 2/3)")
    if with_m:
        p.add_argument("--m", type=int, default=3,
                       help="ambient dimension >= 3 (default 3)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conekit",
        description="Green's functions on cones, 4-metric curvature, and "
                    "exact toric invariants.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    # bessel ----------------------------------------------------------------
    p = sub.add_parser("bessel", help="tabulate Bessel values with error bounds")
    p.add_argument("--kind", type=lambda s: s.upper(), choices=("J", "I", "K"),
                   default="J", help="Bessel family (default J)")
    p.add_argument("--nu", type=_number, default=1.5, help="order (default 1.5)")
    p.add_argument("--x", type=_number_list, default=(0.5, 1.0, 2.0),
                   metavar="X1,X2,...", help="evaluation points")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_bessel)

    # green -----------------------------------------------------------------
    green = sub.add_parser("green", help="Green's function of the cone Laplacian")
    gsub = green.add_subparsers(dest="action", metavar="action")

    p = gsub.add_parser("eval", help="two-point evaluation")
    _add_cone_options(p)
    p.add_argument("--field", type=_number_list, default=(1.0, 0.3, 0.0),
                   metavar="R,THETA,S...", help="field point (default 1,0.3,0)")
    p.add_argument("--source", type=_number_list, default=(1.4, 0.0, 0.2),
                   metavar="R,THETA,S...", help="source point (default 1.4,0,0.2)")
    p.add_argument("--k-max", type=int, default=None,
                   help="angular mode cutoff (default: automatic)")
    p.add_argument("--tol", type=_number, default=1e-8,
                   help="relative tolerance of the mode sums (default 1e-8)")
    p.add_argument("--raw", action="store_true",
                   help="skip the unit-flux normalization constant")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_green_eval)

    p = gsub.add_parser("modal", help="raw per-mode radial integrals")
    _add_cone_options(p)
    p.add_argument("--r", type=_number, default=0.8, help="first radius")
    p.add_argument("--rp", type=_number, default=1.2, help="second radius")
    p.add_argument("--R", dest="big_r", type=_number, default=0.5,
                   help="Euclidean offset between the cone slices")
    p.add_argument("--k-max", type=int, default=3,
                   help="largest mode index (default 3)")
    p.add_argument("--rep", choices=("auto", "K", "I"), default="auto",
                   help="integral representation (default: K when R > 0)")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_green_modal)

    p = gsub.add_parser("expand", help="short-distance series vs direct value")
    _add_cone_options(p)
    p.add_argument("--field", type=_number_list, default=(0.3, 0.4, 0.0),
                   metavar="R,THETA,S...", help="field point, r < r'/2")
    p.add_argument("--source", type=_number_list, default=(1.0, 0.0, 0.1),
                   metavar="R,THETA,S...", help="source point")
    p.add_argument("--j-max", type=int, default=8,
                   help="radial truncation order (default 8)")
    p.add_argument("--k-max", type=int, default=8,
                   help="angular truncation order (default 8)")
    p.add_argument("--tol", type=_number, default=1e-8,
                   help="tolerance of the direct evaluation (default 1e-8)")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_green_expand)

    p = gsub.add_parser("probe", help="Hoelder ratio of a derivative kernel")
    _add_cone_options(p)
    p.add_argument("--alpha", type=_number_list, default=None,
                   metavar="A1,A2,...",
                   help="Hoelder exponents (default: mu/2 and 0.9*mu)")
    p.add_argument("--deriv", type=_deriv_selector, default=DerivSelector.ss(1, 1),
                   help="second derivative: ss:i,j rs:i thetas:i (default ss:1,1)")
    p.add_argument("--bump", type=_number_list, default=(1.0, 0.5, 0.0, 0.35),
                   metavar="R,THETA,S...,WIDTH",
                   help="source bump: center then width")
    p.add_argument("--kernel", choices=("modal", "flat-newton"), default="modal",
                   help="kernel route (flat-newton needs beta = 1)")
    p.add_argument("--pairs", type=int, default=45,
                   help="sampled point pairs per seminorm (default 45)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--tol", type=_number, default=3e-6,
                   help="kernel quadrature tolerance (default 3e-6)")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_green_probe)

    # gh ----------------------------------------------------------------
    gh = sub.add_parser("gh", help="4-metrics from harmonic source fields")
    hsub = gh.add_subparsers(dest="action", metavar="action")

    def add_field_options(pp, kinds=("cone", "flat", "two-pole")):
        pp.add_argument("--field-kind", choices=kinds, default="cone",
                        help="harmonic source field (default cone)")
        _add_cone_options(pp, with_m=False)
        pp.add_argument("--pole", type=_number_list, default=(1.0, 0.0, 0.0),
                        metavar="R,THETA,S",
                        help="cone source point (default 1,0,0)")

    p = hsub.add_parser("curvature", help="anti-self-dual curvature matrix")
    add_field_options(p)
    p.add_argument("--point", type=_number_list, default=(0.25, 0.45, 0.15),
                   metavar="X1,X2,X3", help="chart point")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_gh_curvature)

    p = hsub.add_parser("growth", help="curvature growth toward the axis")
    add_field_options(p, kinds=("cone",))
    p.add_argument("--rmin", type=_number, default=0.004,
                   help="smallest radius (default 0.004)")
    p.add_argument("--rmax", type=_number, default=0.04,
                   help="largest radius (default 0.04)")
    p.add_argument("--n-radii", type=int, default=6,
                   help="number of radii, log-spaced (default 6)")
    p.add_argument("--x1", type=_number, default=0.25,
                   help="height along the axis (default 0.25)")
    p.add_argument("--phi", type=_number, default=0.0,
                   help="chart angle of the approach ray (default 0)")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_gh_growth)

    p = hsub.add_parser("holo", help="paired sections and their product")
    add_field_options(p, kinds=("cone", "flat"))
    p.add_argument("--point", type=_number_list, default=(0.3, 0.6, 0.2),
                   metavar="X1,X2,X3", help="chart point")
    p.add_argument("--psi", type=_number, default=0.0,
                   help="fiber phase (default 0)")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_gh_holo)

    # futaki ------------------------------------------------------------
    futaki = sub.add_parser("futaki", help="exact toric invariants")
    fsub = futaki.add_subparsers(dest="action", metavar="action")

    p = fsub.add_parser("pair", help="invariants of a polygon/divisor fixture")
    p.add_argument("--fixture", required=True,
                   help="shipped name (x1, x2, p2, with or without .toml) or a path")
    p.add_argument("--beta-table", action="store_true",
                   help="tabulate the invariant over beta instead")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_futaki_pair)

    p = fsub.add_parser("critical", help="critical cone angle of a fixture")
    p.add_argument("--fixture", required=True,
                   help="shipped name (x1, x2, p2, with or without .toml) or a path")
    _add_table_options(p)
    p.set_defaults(handler=_cmd_futaki_critical)

    # verify ------------------------------------------------------------
    p = sub.add_parser("verify", help="run the bundled test suite")
    p.add_argument("target", metavar="all|module",
                   help="'all' or a module name such as toric_futaki")
    p.set_defaults(handler=_cmd_verify)

    return parser


def parse_and_dispatch(argv):
    """Run one CLI invocation; returns the process exit code.

    0 on success, 2 for an unknown command or an invalid parameter, 1
    when the computation or the output write fails.
    """
    parser = build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse: --help exits 0, usage errors exit 2
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    handler = getattr(ns, "handler", None)
    if handler is None:
        parser.print_usage(sys.stderr)
        print("error: a command is required", file=sys.stderr)
        return 2
    try:
        return int(handler(ns))
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - unexpected numerical failure
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


def main():
    raise SystemExit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
