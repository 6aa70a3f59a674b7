"""Numerical construction and verification of Riemannian boundary extensions.

Charts are open coordinate boxes with vectorized metric evaluators;
curvature comes from central finite differences.  On top of that sit
collar metrics with shape-operator analysis, explicit extension
constructions (convexifying, negatively curved, completeness-forcing,
curvature-decaying, Ricci-lowering), completeness classification of
radial length integrals, and word-growth obstructions for when no such
extension can exist.
"""

from .chart import (
    Box,
    ChartMetric,
    ScalarField,
    TangentVector,
    constant_metric,
    vectorize_components,
    vectorize_scalar,
)
from .collar import (
    CollarMetric,
    ConvexityVerdict,
    RiccatiPath,
    ShapeSpectrum,
    WarpedProfile,
    convexity_classify,
    fermi_reflection_norm,
    normal_tube_profile,
    riccati_evolve,
    shape_operator,
    shape_operator_batch,
    warped_reflection_norm,
)
from .comparison import (
    SvarcMilnorReport,
    anderson_bound,
    bg_comparison_volume,
    smg_threshold,
    svarc_milnor_check,
    tbg_N_threshold,
)
from .completeness import (
    DivergenceVerdict,
    EscapeProbe,
    SeriesVerdict,
    geodesic_escape_probe,
    radial_length,
    shell_series,
    stage_partials,
)
from .curvature import (
    bianchi_residuals,
    christoffel,
    christoffel_batch,
    conformal_metric,
    conformal_sectional,
    conformal_sectional_batch,
    hessian_batch,
    plane_weights,
    relative_eigenvalues,
    ricci,
    ricci_batch,
    ricci_eigenvalues_batch,
    riemann,
    riemann_batch,
    scalar,
    scalar_batch,
    scalar_field_jets,
    sectional,
    sectional_values,
    symmetry_residuals,
)
from .errors import (
    BudgetExceededError,
    ClearanceError,
    CollarExtError,
    ConfigError,
    DefinitenessError,
    DegeneratePlaneError,
    DomainMismatchError,
    SearchFailureError,
)
from .extensions import (
    BlendSpec,
    ConvexifyExtension,
    GreeneStretch,
    NegativeSectExtension,
    ShellCompletion,
    ShellPlan,
    convexify_extension,
    default_negative_phi,
    greene_stretch,
    negative_sect_extension,
    shell_completion,
)
from .geodesics import (
    ConnectionResult,
    GeodesicPath,
    connect_geodesic,
    curve_length,
    shoot_batch,
    shoot_geodesic,
)
from .groups import (
    EntropyEstimate,
    GrowthData,
    GrowthFit,
    GroupModel,
    ball_count,
    entropy_estimate,
    free_ball_recursion,
    free_group_entropy,
    growth_order_fit,
)
from .lohkamp import (
    LohkampBump,
    LohkampResult,
    LohkampRound,
    bump_profile,
    deformed_metric,
    lohkamp_bump,
    lohkamp_lower,
    lohkamp_lower_scalar,
)
from .models import (
    ModelEntry,
    build_collar,
    build_group,
    build_metric,
    build_profile,
    cosh_collar,
    flat_annulus,
    flat_box,
    flat_disk_collar,
    hyperbolic_collar,
    list_models,
    lohkamp_ball,
    round_collar,
    sphere,
)
from .reports import BoundSpec, CurvatureReport, grid_curvature_report
from .runner import RunReport, check_scenario, run_scenario
from .scenario import ScenarioConfig, load_scenario, parse_scenario
from .util import worker_count

__version__ = "0.1.0"

__all__ = [
    "BlendSpec",
    "BoundSpec",
    "Box",
    "BudgetExceededError",
    "ChartMetric",
    "ClearanceError",
    "CollarExtError",
    "CollarMetric",
    "ConfigError",
    "ConnectionResult",
    "ConvexifyExtension",
    "ConvexityVerdict",
    "CurvatureReport",
    "DefinitenessError",
    "DegeneratePlaneError",
    "DivergenceVerdict",
    "DomainMismatchError",
    "EntropyEstimate",
    "EscapeProbe",
    "GeodesicPath",
    "GreeneStretch",
    "GroupModel",
    "GrowthData",
    "GrowthFit",
    "LohkampBump",
    "LohkampResult",
    "LohkampRound",
    "ModelEntry",
    "NegativeSectExtension",
    "RiccatiPath",
    "RunReport",
    "ScalarField",
    "ScenarioConfig",
    "SearchFailureError",
    "SeriesVerdict",
    "ShapeSpectrum",
    "ShellCompletion",
    "ShellPlan",
    "SvarcMilnorReport",
    "TangentVector",
    "WarpedProfile",
    "anderson_bound",
    "ball_count",
    "bg_comparison_volume",
    "bianchi_residuals",
    "build_collar",
    "build_group",
    "build_metric",
    "build_profile",
    "bump_profile",
    "check_scenario",
    "christoffel",
    "christoffel_batch",
    "conformal_metric",
    "conformal_sectional",
    "conformal_sectional_batch",
    "connect_geodesic",
    "constant_metric",
    "convexify_extension",
    "convexity_classify",
    "cosh_collar",
    "curve_length",
    "default_negative_phi",
    "deformed_metric",
    "entropy_estimate",
    "fermi_reflection_norm",
    "flat_annulus",
    "flat_box",
    "flat_disk_collar",
    "free_ball_recursion",
    "free_group_entropy",
    "geodesic_escape_probe",
    "greene_stretch",
    "grid_curvature_report",
    "growth_order_fit",
    "hessian_batch",
    "hyperbolic_collar",
    "list_models",
    "load_scenario",
    "lohkamp_ball",
    "lohkamp_bump",
    "lohkamp_lower",
    "lohkamp_lower_scalar",
    "negative_sect_extension",
    "normal_tube_profile",
    "parse_scenario",
    "plane_weights",
    "radial_length",
    "relative_eigenvalues",
    "riccati_evolve",
    "ricci",
    "ricci_batch",
    "ricci_eigenvalues_batch",
    "riemann",
    "riemann_batch",
    "round_collar",
    "run_scenario",
    "scalar",
    "scalar_batch",
    "scalar_field_jets",
    "sectional",
    "sectional_values",
    "shape_operator",
    "shape_operator_batch",
    "shell_completion",
    "shell_series",
    "shoot_batch",
    "shoot_geodesic",
    "smg_threshold",
    "sphere",
    "stage_partials",
    "svarc_milnor_check",
    "symmetry_residuals",
    "tbg_N_threshold",
    "vectorize_components",
    "vectorize_scalar",
    "warped_reflection_norm",
    "worker_count",
]
