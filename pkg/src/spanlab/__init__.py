"""Numerical laboratory for span metrics of finitely connected planar domains.

The package computes the reduced Bergman kernel of a domain bounded by smooth
curves, the span metric ``s = pi K(z, z)`` and its higher-order curvatures,
and runs boundary-limit experiments: the metric against squared boundary
distance, curvature limits, localization, and the scaling principle that
blows a boundary point up to a half-plane.
"""

from .curvature import (
    CurvatureReport,
    burbea_bound,
    curvature_from_matrix,
    curvature_profile,
    curvature_report,
    gaussian_curvature,
    gaussian_curvature_fd_oracle,
    higher_order_curvature,
    metric_derivative_matrix,
)
from .dirichlet import (
    BasisBlock,
    GramFactorization,
    KernelModel,
    build_blocks,
    build_model,
    default_probes,
    dirichlet_inner,
    gram_area_circular,
    gram_dense,
    gram_diagonal,
    spot_check_offdiagonal,
    zero_period_residual,
)
from .domains import (
    AffineScalingMap,
    BoundaryCurve,
    DefiningFunctionPatch,
    Domain,
    HalfPlane,
    hausdorff_distance_local,
    inner_normal_sequence,
    limit_halfplane,
    outward_normal,
    rotation_center,
    scaled_domain,
    scaling_map,
    signed_distance,
    winding_number,
)
from .errors import (
    ConfigError,
    CurvatureError,
    DomainError,
    EmptyClipError,
    QuadratureError,
)
from .lab import (
    EXPERIMENTS,
    ExperimentConfig,
    ExperimentResult,
    default_schedule,
    run_experiment,
)
from .reference import (
    DiskAutomorphism,
    DiskMetric,
    HalfPlaneMetric,
    LensMetric,
    MobiusMap,
    cayley_map,
    disk_kernel,
    halfdisk_density,
    halfdisk_metric,
    halfplane_metric,
    inversion,
    inverted_domain,
)
from .shapes import annulus, disk, domain_from_dict, ellipse, load_domain

__version__ = "0.1.0"

__all__ = [
    "AffineScalingMap",
    "BasisBlock",
    "BoundaryCurve",
    "ConfigError",
    "CurvatureError",
    "CurvatureReport",
    "DefiningFunctionPatch",
    "DiskAutomorphism",
    "DiskMetric",
    "Domain",
    "DomainError",
    "EmptyClipError",
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentResult",
    "GramFactorization",
    "HalfPlane",
    "HalfPlaneMetric",
    "KernelModel",
    "LensMetric",
    "MobiusMap",
    "QuadratureError",
    "annulus",
    "build_blocks",
    "build_model",
    "burbea_bound",
    "cayley_map",
    "curvature_from_matrix",
    "curvature_profile",
    "curvature_report",
    "default_probes",
    "default_schedule",
    "dirichlet_inner",
    "disk",
    "disk_kernel",
    "domain_from_dict",
    "ellipse",
    "gaussian_curvature",
    "gaussian_curvature_fd_oracle",
    "gram_area_circular",
    "gram_dense",
    "gram_diagonal",
    "halfdisk_density",
    "halfdisk_metric",
    "halfplane_metric",
    "hausdorff_distance_local",
    "higher_order_curvature",
    "inner_normal_sequence",
    "inversion",
    "inverted_domain",
    "limit_halfplane",
    "load_domain",
    "metric_derivative_matrix",
    "outward_normal",
    "rotation_center",
    "run_experiment",
    "scaled_domain",
    "scaling_map",
    "signed_distance",
    "spot_check_offdiagonal",
    "winding_number",
    "zero_period_residual",
]
