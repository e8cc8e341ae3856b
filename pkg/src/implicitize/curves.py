"""
Approximate implicitization of rational Bezier curves.

``build_D`` expands every ``q_k(p(t))`` in a univariate basis and stacks the
coefficient vectors as columns; the right singular vector of the smallest
singular value is the approximate implicit polynomial. ``build_weak``
forms the Gram matrix of the ``q_k(p(t))`` under a weighted L2 inner
product and the smallest eigenvector plays the same role.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import (
    BasisFamily,
    Family,
    Scaling,
    bernstein_degree_elevate,
    bernstein_multiply,
    bernstein_to_monomial,
    chebyshev_points,
    dct1_chebyshev_coeffs,
    eval_basis,
    gauss_chebyshev_rule,
    gauss_legendre_rule,
    legendre_coeffs,
    uniform_points,
    MAX_GAUSS_POINTS,
    MAX_PRODUCT_DEGREE,
)
from .errors import DegreeError, DomainError, SolverError
from .geometry import (
    BarycentricFrame,
    ImplicitPolynomial,
    ParametricCurve,
    eval_curve,
    eval_implicit,
    implicit_basis_values,
    multi_indices,
    multinomials,
    to_barycentric,
)

MAX_ROWS = 400
ERROR_SAMPLES = 1001
BOUND_SAMPLES = 2001


class Method(str, enum.Enum):
    BERNSTEIN = "bernstein"
    LAGRANGE_UNIFORM = "lagrange-uniform"
    LAGRANGE_CHEBYSHEV = "lagrange-chebyshev"
    CHEBYSHEV = "chebyshev"
    LEGENDRE = "legendre"
    LEGENDRE_ORTHONORMAL = "legendre-orthonormal"
    MONOMIAL = "monomial"
    WEAK_UNIT = "weak-unit"
    WEAK_CHEBYSHEV = "weak-chebyshev"
    GRAM = "gram"

    # surface methods share the solver path
    TENSOR_BERNSTEIN = "tensor-bernstein"
    TENSOR_LAGRANGE_UNIFORM = "tensor-lagrange-uniform"
    TENSOR_CHEBYSHEV = "tensor-chebyshev"
    TENSOR_LEGENDRE_ORTHONORMAL = "tensor-legendre-orthonormal"
    TRI_BERNSTEIN = "tri-bernstein"
    TRI_LAGRANGE = "tri-lagrange"

    @property
    def is_weak(self) -> bool:
        return self in (Method.WEAK_UNIT, Method.WEAK_CHEBYSHEV, Method.GRAM)


CURVE_D_METHODS = (
    Method.BERNSTEIN, Method.LAGRANGE_UNIFORM, Method.LAGRANGE_CHEBYSHEV,
    Method.CHEBYSHEV, Method.LEGENDRE, Method.LEGENDRE_ORTHONORMAL, Method.MONOMIAL,
)

_FAMILY = {
    Method.BERNSTEIN: (Family.BERNSTEIN, Scaling.SUP),
    Method.LAGRANGE_UNIFORM: (Family.LAGRANGE_UNIFORM, Scaling.SUP),
    Method.LAGRANGE_CHEBYSHEV: (Family.LAGRANGE_CHEBYSHEV, Scaling.SUP),
    Method.CHEBYSHEV: (Family.CHEBYSHEV, Scaling.SUP),
    Method.LEGENDRE: (Family.LEGENDRE, Scaling.SUP),
    Method.LEGENDRE_ORTHONORMAL: (Family.LEGENDRE, Scaling.ORTHONORMAL),
    Method.MONOMIAL: (Family.MONOMIAL, Scaling.SUP),
}


@dataclass
class CoefficientMatrix:
    """An L x M expansion matrix, or an M x M weak (Gram) matrix.

    ``basis_norm_max`` is max over the parameter domain of the 2-norm of the
    row basis vector; it turns a singular value into an error bound.
    """

    entries: np.ndarray
    method: Method
    m: int
    frame: BarycentricFrame
    meta: dict = field(default_factory=dict)
    basis_norm_max: float | None = None

    @property
    def L(self) -> int:
        return self.entries.shape[0]

    @property
    def M(self) -> int:
        return self.entries.shape[1]


@dataclass
class ImplicitizationResult:
    """Solution vector plus the full spectrum it was picked from.

    ``sigma`` is descending and has length M (zero-padded when L < M).
    ``bound`` is None for weak-type matrices.
    """

    solution: ImplicitPolynomial
    sigma: np.ndarray
    selected_index: int
    bound: float | None
    method: Method

    @property
    def b(self) -> np.ndarray:
        return self.solution.b

    @property
    def sigma_selected(self) -> float:
        return float(self.sigma[self.selected_index])

    @property
    def relative_sigma(self) -> float:
        top = self.sigma[0]
        return float(self.sigma_selected / top) if top > 0 else 0.0


# ---------------------------------------------------------------------------
# helpers


def fix_sign(v: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude entry is positive.

    Entries within ``rtol`` of the maximum count as tied; the first one wins,
    which keeps the choice stable under roundoff.
    """
    a = np.abs(v)
    k = int(np.flatnonzero(a >= a.max() * (1.0 - rtol))[0])
    return -v if v[k] < 0 else v


def sign_changes(values) -> int:
    v = np.asarray(values, dtype=float)
    s = np.sign(v[v != 0.0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@lru_cache(maxsize=256)
def _univariate_norm_max(family: Family, scaling: Scaling, count: int) -> float:
    t = np.linspace(0.0, 1.0, BOUND_SAMPLES)
    vals = eval_basis(BasisFamily(family, count - 1, scaling), t)
    return float(np.max(np.linalg.norm(vals, axis=-1)))


def basis_norm_max(method: Method, count: int) -> float:
    family, scaling = _FAMILY[Method(method)]
    return _univariate_norm_max(family, scaling, count)


def _bary_samples(curve: ParametricCurve, frame: BarycentricFrame, t) -> np.ndarray:
    return to_barycentric(frame, eval_curve(curve, t))


def _check_sizes(n: int, m: int, rows: int):
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    if rows < m * n + 1:
        raise DomainError(f"need at least mn+1 = {m * n + 1} rows, got {rows}")
    if rows > MAX_ROWS:
        raise DegreeError(f"{rows} rows exceeds the supported {MAX_ROWS}")


# ---------------------------------------------------------------------------
# matrix builders


def _bernstein_columns(bary_coeffs: np.ndarray, m: int) -> np.ndarray:
    """Bernstein coefficients (degree mn) of every q_k(p(t)), as columns."""
    nvars = bary_coeffs.shape[0]
    powers = []
    for var in range(nvars):
        p = [np.ones(1)]
        for _ in range(m):
            p.append(bernstein_multiply(p[-1], bary_coeffs[var]))
        powers.append(p)
    cols = []
    for k in multi_indices(m, nvars):
        col = powers[0][k[0]]
        for var in range(1, nvars):
            col = bernstein_multiply(col, powers[var][k[var]])
        cols.append(col)
    return np.array(cols).T * multinomials(m, nvars)


def _monomial_columns(bary_coeffs: np.ndarray, m: int) -> np.ndarray:
    mono = bernstein_to_monomial(bary_coeffs)
    nvars = mono.shape[0]
    powers = []
    for var in range(nvars):
        p = [np.ones(1)]
        for _ in range(m):
            p.append(np.convolve(p[-1], mono[var]))
        powers.append(p)
    cols = []
    for k in multi_indices(m, nvars):
        col = powers[0][k[0]]
        for var in range(1, nvars):
            col = np.convolve(col, powers[var][k[var]])
        cols.append(col)
    return np.array(cols).T * multinomials(m, nvars)


def build_D(curve: ParametricCurve, m: int, frame: BarycentricFrame | None = None,
            method=Method.CHEBYSHEV, L: int | None = None) -> CoefficientMatrix:
    """Coefficients of each q_k(p(t)) in the basis selected by ``method``.

    ``L`` (rows) defaults to mn + 1 and may only be raised for the
    Bernstein and Lagrange methods.
    """
    method = Method(method)
    if method not in CURVE_D_METHODS:
        raise DomainError(f"{method.value} is not a curve D-matrix method")
    frame = frame or BarycentricFrame.default(2)
    if frame.dim != 2:
        raise DomainError("curves need a triangle frame")
    n = curve.degree
    N = m * n
    rows = N + 1 if L is None else int(L)
    _check_sizes(n, m, rows)
    oversample_ok = (Method.BERNSTEIN, Method.LAGRANGE_UNIFORM, Method.LAGRANGE_CHEBYSHEV)
    if rows != N + 1 and method not in oversample_ok:
        raise DomainError(f"{method.value} supports only L = mn + 1")

    if method is Method.BERNSTEIN:
        if N > MAX_PRODUCT_DEGREE:
            raise DegreeError(f"Bernstein products limited to degree {MAX_PRODUCT_DEGREE}")
        entries = _bernstein_columns(frame.inverse @ curve.coeffs, m)
        if rows > N + 1:
            entries = bernstein_degree_elevate(entries.T, rows - N - 1).T
    elif method is Method.MONOMIAL:
        entries = _monomial_columns(frame.inverse @ curve.coeffs, m)
    elif method in (Method.LAGRANGE_UNIFORM, Method.LAGRANGE_CHEBYSHEV):
        nodes = uniform_points(rows) if method is Method.LAGRANGE_UNIFORM else chebyshev_points(rows)
        entries = implicit_basis_values(_bary_samples(curve, frame, nodes), m)
    elif method is Method.CHEBYSHEV:
        samples = implicit_basis_values(_bary_samples(curve, frame, chebyshev_points(rows)), m)
        entries = dct1_chebyshev_coeffs(samples)
    else:
        scaling = Scaling.ORTHONORMAL if method is Method.LEGENDRE_ORTHONORMAL else Scaling.SUP
        rule = gauss_legendre_rule(math.ceil((N + rows) / 2) + 1)
        samples = implicit_basis_values(_bary_samples(curve, frame, rule.nodes), m)
        entries = legendre_coeffs(samples, rule, rows, scaling, f_degree=N)

    return CoefficientMatrix(np.ascontiguousarray(entries), method, m, frame,
                             meta={"n": n, "m": m, "kind": "curve"})


def build_weak(curve: ParametricCurve, m: int, frame: BarycentricFrame | None = None,
               weight: str = "unit") -> CoefficientMatrix:
    """Gram matrix of the q_k(p(t)) under w = 1 or the Chebyshev weight."""
    frame = frame or BarycentricFrame.default(2)
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    N = m * curve.degree
    npts = math.ceil((2 * N + 1) / 2) + 1
    if npts > MAX_GAUSS_POINTS:
        raise DegreeError(f"integrand degree {2 * N} needs too many quadrature points")
    if weight == "unit":
        rule, method = gauss_legendre_rule(npts), Method.WEAK_UNIT
    elif weight == "chebyshev":
        rule, method = gauss_chebyshev_rule(npts), Method.WEAK_CHEBYSHEV
    else:
        raise DomainError(f"unknown weight {weight!r}")
    F = implicit_basis_values(_bary_samples(curve, frame, rule.nodes), m)
    return CoefficientMatrix(weighted_gram(F, rule.weights), method, m, frame,
                             meta={"n": curve.degree, "m": m, "kind": "curve"})


def weighted_gram(F: np.ndarray, weights: np.ndarray) -> np.ndarray:
    G = F.T @ (weights[:, None] * F)
    return 0.5 * (G + G.T)


def gram_product(D: CoefficientMatrix) -> CoefficientMatrix:
    if D.method.is_weak:
        raise DomainError("gram_product needs a D-type matrix")
    G = D.entries.T @ D.entries
    return CoefficientMatrix(0.5 * (G + G.T), Method.GRAM, D.m, D.frame,
                             meta={**D.meta, "source": D.method.value})


# ---------------------------------------------------------------------------
# solvers


def _resolve_index(size: int, index: int) -> int:
    if not 0 <= index < size:
        raise DomainError(f"index must be in [0, {size}), got {index}")
    return size - 1 - index


def min_singular(D: CoefficientMatrix, index: int = 0) -> ImplicitizationResult:
    """Right singular vector for the ``index``-th smallest singular value (0 = smallest)."""
    if D.method.is_weak:
        raise DomainError("min_singular needs a D-type matrix; use min_eigen")
    try:
        _, s, vt = np.linalg.svd(D.entries, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"SVD did not converge: {exc}") from exc
    M = D.M
    sigma = np.zeros(M)
    sigma[:s.size] = s
    sel = _resolve_index(M, index)
    b = fix_sign(vt[sel])
    result = ImplicitizationResult(ImplicitPolynomial(D.m, D.frame, b), sigma, sel, None, D.method)
    result.bound = error_bound(D, result)
    return result


def min_eigen(Mw: CoefficientMatrix, index: int = 0) -> ImplicitizationResult:
    """Eigenvector for the ``index``-th smallest eigenvalue of a weak matrix."""
    if not Mw.method.is_weak:
        raise DomainError("min_eigen needs a weak-type matrix; use min_singular")
    try:
        lam, vecs = np.linalg.eigh(Mw.entries)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigendecomposition did not converge: {exc}") from exc
    lam, vecs = lam[::-1], vecs[:, ::-1]
    sel = _resolve_index(Mw.M, index)
    b = fix_sign(vecs[:, sel])
    return ImplicitizationResult(ImplicitPolynomial(Mw.m, Mw.frame, b),
                                 np.maximum(lam, 0.0), sel, None, Mw.method)


def solve(matrix: CoefficientMatrix, index: int = 0) -> ImplicitizationResult:
    return min_eigen(matrix, index) if matrix.method.is_weak else min_singular(matrix, index)


def implicitize(curve: ParametricCurve, m: int, method=Method.CHEBYSHEV,
                frame: BarycentricFrame | None = None, index: int = 0,
                L: int | None = None) -> tuple[CoefficientMatrix, ImplicitizationResult]:
    method = Method(method)
    if method is Method.WEAK_UNIT:
        mat = build_weak(curve, m, frame, "unit")
    elif method is Method.WEAK_CHEBYSHEV:
        mat = build_weak(curve, m, frame, "chebyshev")
    else:
        mat = build_D(curve, m, frame, method, L)
    return mat, solve(mat, index)


# ---------------------------------------------------------------------------
# diagnostics


def error_bound(D: CoefficientMatrix, result: ImplicitizationResult) -> float:
    """max_t ||alpha(t)||_2 * sigma_selected, the norm sampled on 2001 points."""
    if D.method.is_weak:
        raise DomainError("error bound is defined for D-type matrices only")
    if D.basis_norm_max is None:
        D.basis_norm_max = basis_norm_max(D.method, D.L)
    return float(D.basis_norm_max * result.sigma_selected)


def kernel_dimension(D: CoefficientMatrix, tol: float = 1e-10) -> int:
    """Number of singular values (eigenvalues for weak matrices) <= tol * max."""
    if not 0.0 < tol < 1.0:
        raise DomainError("tol must lie in (0, 1)")
    if D.method.is_weak:
        vals = np.maximum(np.linalg.eigvalsh(D.entries), 0.0)
    else:
        s = np.linalg.svd(D.entries, compute_uv=False)
        vals = np.zeros(D.M)
        vals[:s.size] = s
    return int(np.count_nonzero(vals <= tol * vals.max()))


def algebraic_error(curve: ParametricCurve, q: ImplicitPolynomial, t) -> np.ndarray:
    return eval_implicit(q, eval_curve(curve, t))


def algebraic_error_max(curve: ParametricCurve, q: ImplicitPolynomial,
                        nsamples: int = ERROR_SAMPLES) -> float:
    """max |q(p(t))| over ``nsamples`` uniform parameters."""
    if nsamples < 2:
        raise DomainError("need at least 2 samples")
    t = np.linspace(0.0, 1.0, nsamples)
    return float(np.max(np.abs(algebraic_error(curve, q, t))))


def relative_error(b, reference) -> float:
    """||b - ref||_inf / ||ref||_inf, with the sign of ``b`` aligned to ``ref``."""
    b = np.asarray(b, dtype=float)
    ref = np.asarray(reference, dtype=float)
    ref = ref / np.linalg.norm(ref)
    b = b / np.linalg.norm(b)
    if np.dot(b, ref) < 0:
        b = -b
    return float(np.max(np.abs(b - ref)) / np.max(np.abs(ref)))
