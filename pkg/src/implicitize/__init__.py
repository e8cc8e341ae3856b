"""Approximate implicitization of rational Bezier curves and surface patches."""
from .basis import BasisFamily, Family, QuadratureRule, Scaling, eval_basis
from .curves import (
    CoefficientMatrix,
    ImplicitizationResult,
    Method,
    algebraic_error,
    algebraic_error_max,
    build_D,
    build_weak,
    error_bound,
    implicitize,
    kernel_dimension,
    min_eigen,
    min_singular,
    solve,
)
from .errors import DegreeError, DomainError, FrameError, ImplicitizeError, SolverError
from .geometry import (
    BarycentricFrame,
    ImplicitPolynomial,
    ParametricCurve,
    TensorPatch,
    TriangularPatch,
    eval_curve,
    eval_implicit,
    to_barycentric,
)
from .surfaces import build_D_tensor, build_D_triangular, build_surface, weak_matrix_surface

__version__ = "0.1.0"

__all__ = [
    "BarycentricFrame", "BasisFamily", "CoefficientMatrix", "DegreeError", "DomainError",
    "Family", "FrameError", "ImplicitPolynomial", "ImplicitizationResult", "ImplicitizeError",
    "Method", "ParametricCurve", "QuadratureRule", "Scaling", "SolverError", "TensorPatch",
    "TriangularPatch", "algebraic_error", "algebraic_error_max", "build_D", "build_D_tensor",
    "build_D_triangular", "build_surface", "build_weak", "error_bound", "eval_basis",
    "eval_curve", "eval_implicit", "implicitize", "kernel_dimension", "min_eigen",
    "min_singular", "solve", "to_barycentric", "weak_matrix_surface",
]
