"""Curvature tensors, Weyl projection and Jordan-structure probes for pseudo-Riemannian metrics."""

from .curvature import (
    CurvatureTensor,
    OrientedPlane,
    SymmetryReport,
    build_a_phi,
    build_constant_curvature,
    build_eq3c,
    jacobi,
    rescale_conformal,
    ricci,
    scalar_curv,
    skew_operator,
    validate,
    weyl_project,
)
from .geometry import MetricField, PointFrame, christoffel, riemann_at
from .jet import Jet2
from .linalg import (
    InnerProduct,
    JordanInvariants,
    Signature,
    causal_type,
    inner,
    jordan_equal,
    jordan_invariants,
    rank_tol,
)
from .probes import ProbeConfig, ProbeVerdict, conformal_probe, ip_probe, osserman_probe

__all__ = [
    "CurvatureTensor",
    "InnerProduct",
    "Jet2",
    "JordanInvariants",
    "MetricField",
    "OrientedPlane",
    "PointFrame",
    "ProbeConfig",
    "ProbeVerdict",
    "Signature",
    "SymmetryReport",
    "build_a_phi",
    "build_constant_curvature",
    "build_eq3c",
    "causal_type",
    "christoffel",
    "conformal_probe",
    "inner",
    "ip_probe",
    "jacobi",
    "jordan_equal",
    "jordan_invariants",
    "osserman_probe",
    "rank_tol",
    "rescale_conformal",
    "ricci",
    "riemann_at",
    "scalar_curv",
    "skew_operator",
    "validate",
    "weyl_project",
]
