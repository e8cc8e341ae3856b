"""
Approximate implicitization of tensor-product and triangular Bezier patches.

The implicit polynomial is always of total degree m over a reference
tetrahedron. Rows of the tensor D-matrix use the ordering
j = j1 * L2 + j2 (s index outer); rows of the triangular D-matrix follow
``multi_indices(mn, 3)`` on the exponents of (s, t, 1 - s - t).
"""
from __future__ import annotations

import math

import numpy as np

from .basis import (
    Family,
    Scaling,
    binomial_row,
    chebyshev_points,
    dct1_chebyshev_coeffs,
    gauss_legendre_rule,
    legendre_coeffs,
    uniform_points,
)
from .curves import (
    CoefficientMatrix,
    Method,
    _univariate_norm_max,
    weighted_gram,
)
from .errors import DegreeError, DomainError
from .geometry import (
    BarycentricFrame,
    ImplicitPolynomial,
    TensorPatch,
    TriangularPatch,
    eval_implicit,
    implicit_basis_values,
    multi_indices,
    multinomials,
    to_barycentric,
)

MAX_TENSOR_DEGREE = 60
MAX_TRIANGLE_DEGREE = 30

SurfaceCoefficientMatrix = CoefficientMatrix

TENSOR_METHODS = (Method.TENSOR_BERNSTEIN, Method.TENSOR_LAGRANGE_UNIFORM,
                  Method.TENSOR_CHEBYSHEV, Method.TENSOR_LEGENDRE_ORTHONORMAL)
TRIANGLE_METHODS = (Method.TRI_BERNSTEIN, Method.TRI_LAGRANGE)

_TENSOR_FAMILY = {
    Method.TENSOR_BERNSTEIN: (Family.BERNSTEIN, Scaling.SUP),
    Method.TENSOR_LAGRANGE_UNIFORM: (Family.LAGRANGE_UNIFORM, Scaling.SUP),
    Method.TENSOR_CHEBYSHEV: (Family.CHEBYSHEV, Scaling.SUP),
    Method.TENSOR_LEGENDRE_ORTHONORMAL: (Family.LEGENDRE, Scaling.ORTHONORMAL),
}


def tensor_dimension(m: int, n1: int, n2: int) -> int:
    """Row count of the tensor D-matrix, (m n1 + 1)(m n2 + 1)."""
    return m * m * n1 * n2 + m * n1 + m * n2 + 1


def triangle_dimension(m: int, n: int) -> int:
    return math.comb(m * n + 2, 2)


def _frame(frame):
    frame = frame or BarycentricFrame.default(3)
    if frame.dim != 3:
        raise DomainError("surfaces need a tetrahedron frame")
    return frame


# ---------------------------------------------------------------------------
# Bernstein products on the two domains


def _conv2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0.0:
                out[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    return out


def tensor_bernstein_multiply(a, b) -> np.ndarray:
    """Product of two tensor-product Bernstein polynomials (coefficient grids)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    def scale(c):
        return np.outer(binomial_row(c.shape[0] - 1), binomial_row(c.shape[1] - 1))

    out = _conv2(a * scale(a), b * scale(b))
    return out / scale(out)


def _triangle_grid(c: np.ndarray, n: int) -> np.ndarray:
    """Scaled (multinomial-weighted) coefficients on an (n+1) x (n+1) grid indexed by (i, j)."""
    grid = np.zeros((n + 1, n + 1))
    idx = multi_indices(n, 3)
    grid[idx[:, 0], idx[:, 1]] = np.asarray(c, dtype=float) * multinomials(n, 3)
    return grid


def triangle_bernstein_multiply(a, b) -> np.ndarray:
    """Product of two Bernstein triangles; coefficient vectors in multi-index order."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = (math.isqrt(8 * a.size + 1) - 3) // 2
    nb = (math.isqrt(8 * b.size + 1) - 3) // 2
    prod = _conv2(_triangle_grid(a, na), _triangle_grid(b, nb))
    n = na + nb
    idx = multi_indices(n, 3)
    return prod[idx[:, 0], idx[:, 1]] / multinomials(n, 3)


def _product_columns(bary_coeffs, m: int, multiply, one) -> np.ndarray:
    powers = []
    for var in range(4):
        p = [one]
        for _ in range(m):
            p.append(multiply(p[-1], bary_coeffs[var]))
        powers.append(p)
    cols = []
    for k in multi_indices(m, 4):
        col = powers[0][k[0]]
        for var in range(1, 4):
            col = multiply(col, powers[var][k[var]])
        cols.append(np.ravel(col))
    return np.array(cols).T * multinomials(m, 4)


# ---------------------------------------------------------------------------
# tensor-product patches


def _tensor_samples(patch: TensorPatch, frame, s_nodes, t_nodes, m):
    S, T = np.meshgrid(s_nodes, t_nodes, indexing="ij")
    bary = to_barycentric(frame, patch.evaluate(S, T))
    return implicit_basis_values(bary, m)  # (L1, L2, M)


def build_D_tensor(patch: TensorPatch, m: int, frame: BarycentricFrame | None = None,
                   method=Method.TENSOR_CHEBYSHEV) -> CoefficientMatrix:
    method = Method(method)
    if method not in TENSOR_METHODS:
        raise DomainError(f"{method.value} is not a tensor-patch method")
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    frame = _frame(frame)
    n1, n2 = patch.bidegree
    if m * max(n1, n2) > MAX_TENSOR_DEGREE:
        raise DegreeError(f"m * max(n1, n2) must be <= {MAX_TENSOR_DEGREE}")
    N1, N2 = m * n1, m * n2
    L1, L2 = N1 + 1, N2 + 1

    if method is Method.TENSOR_BERNSTEIN:
        bary = np.tensordot(frame.inverse, patch.coeffs, axes=(1, 0))
        entries = _product_columns(bary, m, tensor_bernstein_multiply, np.ones((1, 1)))
    elif method is Method.TENSOR_LAGRANGE_UNIFORM:
        F = _tensor_samples(patch, frame, uniform_points(L1), uniform_points(L2), m)
        entries = F.reshape(L1 * L2, -1)
    elif method is Method.TENSOR_CHEBYSHEV:
        F = _tensor_samples(patch, frame, chebyshev_points(L1), chebyshev_points(L2), m)
        C = dct1_chebyshev_coeffs(F)
        C = np.moveaxis(dct1_chebyshev_coeffs(np.moveaxis(C, 1, 0)), 0, 1)
        entries = C.reshape(L1 * L2, -1)
    else:
        r1 = gauss_legendre_rule(math.ceil((N1 + L1) / 2) + 1)
        r2 = gauss_legendre_rule(math.ceil((N2 + L2) / 2) + 1)
        F = _tensor_samples(patch, frame, r1.nodes, r2.nodes, m)
        C = legendre_coeffs(F, r1, L1, Scaling.ORTHONORMAL, f_degree=N1)
        C = np.moveaxis(C, 1, 0)
        C = legendre_coeffs(C, r2, L2, Scaling.ORTHONORMAL, f_degree=N2)
        entries = np.moveaxis(C, 0, 1).reshape(L1 * L2, -1)

    family, scaling = _TENSOR_FAMILY[method]
    norm = _univariate_norm_max(family, scaling, L1) * _univariate_norm_max(family, scaling, L2)
    return CoefficientMatrix(np.ascontiguousarray(entries), method, m, frame,
                             meta={"kind": "tensor", "bidegree": [n1, n2], "m": m},
                             basis_norm_max=norm)


# ---------------------------------------------------------------------------
# triangular patches


def triangle_nodes(d: int) -> np.ndarray:
    """Uniform grid (i/d, j/d), i + j <= d, in multi-index order."""
    if d == 0:
        return np.array([[1.0 / 3.0, 1.0 / 3.0]])
    idx = multi_indices(d, 3)
    return idx[:, :2] / d


def triangle_lagrange_matrix(d: int) -> np.ndarray:
    """Bernstein-triangle collocation matrix on the degree-d uniform grid."""
    nodes = triangle_nodes(d)
    bary = np.column_stack([nodes, 1.0 - nodes.sum(axis=1)])
    return implicit_basis_values(bary, d)


def _tri_lagrange_norm_max(d: int, density: int = 60) -> float:
    V = triangle_lagrange_matrix(d)
    pts = triangle_nodes(max(density, d))
    bary = np.column_stack([pts, 1.0 - pts.sum(axis=1)])
    # Lagrange values alpha(x) solve V^T alpha = beta(x)
    alpha = np.linalg.solve(V.T, implicit_basis_values(bary, d).T)
    return float(np.max(np.linalg.norm(alpha, axis=0)))


def build_D_triangular(patch: TriangularPatch, m: int, frame: BarycentricFrame | None = None,
                       method=Method.TRI_BERNSTEIN) -> CoefficientMatrix:
    method = Method(method)
    if method not in TRIANGLE_METHODS:
        raise DomainError(f"{method.value} is not a triangular-patch method")
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    frame = _frame(frame)
    n = patch.degree
    d = m * n
    if d > MAX_TRIANGLE_DEGREE:
        raise DegreeError(f"m * n must be <= {MAX_TRIANGLE_DEGREE}")

    if method is Method.TRI_BERNSTEIN:
        bary = frame.inverse @ patch.coeffs
        entries = _product_columns(bary, m, triangle_bernstein_multiply, np.ones(1))
        norm = 1.0
    else:
        nodes = triangle_nodes(d)
        bary = to_barycentric(frame, patch.evaluate(nodes[:, 0], nodes[:, 1]))
        entries = implicit_basis_values(bary, m)
        norm = _tri_lagrange_norm_max(d)
    return CoefficientMatrix(np.ascontiguousarray(entries), method, m, frame,
                             meta={"kind": "triangular", "degree": n, "m": m},
                             basis_norm_max=norm)


# ---------------------------------------------------------------------------
# weak matrices and errors


def weak_matrix_surface(patch, m: int, frame: BarycentricFrame | None = None) -> CoefficientMatrix:
    """Gram matrix of the q_k(p(s, t)) over the parameter domain, w = 1.

    Triangles are integrated by collapsing the square: s = u, t = v (1 - u),
    with Jacobian (1 - u).
    """
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    frame = _frame(frame)
    if isinstance(patch, TensorPatch):
        n1, n2 = patch.bidegree
        if m * max(n1, n2) > MAX_TENSOR_DEGREE:
            raise DegreeError(f"m * max(n1, n2) must be <= {MAX_TENSOR_DEGREE}")
        r1 = gauss_legendre_rule(m * n1 + 2)
        r2 = gauss_legendre_rule(m * n2 + 2)
        F = _tensor_samples(patch, frame, r1.nodes, r2.nodes, m).reshape(-1, implicit_size(m))
        w = np.outer(r1.weights, r2.weights).ravel()
        meta = {"kind": "tensor", "bidegree": [n1, n2], "m": m}
    elif isinstance(patch, TriangularPatch):
        d = m * patch.degree
        if d > MAX_TRIANGLE_DEGREE:
            raise DegreeError(f"m * n must be <= {MAX_TRIANGLE_DEGREE}")
        ru = gauss_legendre_rule(d + 2)
        rv = gauss_legendre_rule(d + 2)
        U, V = np.meshgrid(ru.nodes, rv.nodes, indexing="ij")
        S, T = U, V * (1.0 - U)
        bary = to_barycentric(frame, patch.evaluate(S, T))
        F = implicit_basis_values(bary, m).reshape(-1, implicit_size(m))
        w = (np.outer(ru.weights * (1.0 - ru.nodes), rv.weights)).ravel()
        meta = {"kind": "triangular", "degree": patch.degree, "m": m}
    else:
        raise DomainError("expected a TensorPatch or TriangularPatch")
    return CoefficientMatrix(weighted_gram(F, w), Method.WEAK_UNIT, m, frame, meta=meta)


def implicit_size(m: int) -> int:
    return math.comb(m + 3, 3)


def build_surface(patch, m: int, method, frame: BarycentricFrame | None = None) -> CoefficientMatrix:
    method = Method(method)
    if method is Method.WEAK_UNIT:
        return weak_matrix_surface(patch, m, frame)
    if isinstance(patch, TensorPatch):
        return build_D_tensor(patch, m, frame, method)
    return build_D_triangular(patch, m, frame, method)


def surface_samples(patch, grid: int) -> np.ndarray:
    """Homogeneous sample points: grid x grid (tensor) or the triangular grid."""
    if grid < 2:
        raise DomainError("grid must be >= 2")
    if isinstance(patch, TensorPatch):
        u = np.linspace(0.0, 1.0, grid)
        S, T = np.meshgrid(u, u, indexing="ij")
        return patch.evaluate(S, T).reshape(-1, 4)
    nodes = triangle_nodes(grid - 1)
    return patch.evaluate(nodes[:, 0], nodes[:, 1])


def algebraic_error_max_surface(patch, q: ImplicitPolynomial, grid: int = 101) -> float:
    return float(np.max(np.abs(eval_implicit(q, surface_samples(patch, grid)))))
