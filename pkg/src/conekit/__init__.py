"""conekit: Green's functions, Ricci-flat model metrics and exact toric
invariants for spaces with cone singularities."""

from .special_functions import (
    EvalResult,
    PreconditionError,
    bessel_i,
    bessel_j,
    bessel_k,
    bessel_k_reflect,
    gamma_fact,
    lemma1_check,
    lemma2_check,
)
from .cone_green import (
    ConeParams,
    ConePoint,
    DerivSelector,
    ExpansionTail,
    chart_iota,
    deriv_kernel,
    flux_calibrate,
    green_eval,
    green_via_heat,
    heat_modal,
    laplacian_cone,
    modal_gk_I,
    modal_gk_K,
    norm_constant,
    polyhom_coeff,
    polyhom_eval,
)
from .schauder import (
    BumpField,
    KernelBoundReport,
    holder_seminorm,
    kernel_bound_report,
    schauder_probe,
)
from .gibbons_hawking import (
    NEWTON_WEIGHT,
    ConeGreenField,
    FlatNewton,
    FrameAtPoint,
    GrowthFit,
    HoloPair,
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

from .toric_futaki import (
    AffineHamiltonian,
    InvariantCurve,
    LatticePolygon,
    PairResult,
    boundary_integral,
    critical_beta,
    divisor_moment,
    divisor_volume,
    fixture_path,
    load_fixture,
    pair_futaki,
    polygon_area,
    polygon_moment,
    toric_futaki,
)
from .cli import emit_table, parse_and_dispatch

__version__ = "0.1.0"
