"""
Parametric curves and patches, barycentric frames and implicit polynomials.

Curves and patches are stored homogeneously: a rational curve
(g1/h, g2/h) is the triple (g1, g2, h) of Bernstein polynomials on [0, 1].
Implicit polynomials use the homogeneous Bernstein basis over a reference
triangle (curves) or tetrahedron (surfaces),

    q_k(u) = C(m; k) u_1^k_1 ... u_{d+1}^k_{d+1},

ordered lexicographically on the multi-index with k_1 running fastest
downwards, i.e. for m = 2, d = 2: u^2, 2uv, 2uw, v^2, 2vw, w^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import bernstein_subdivide_left, de_casteljau, monomial_to_bernstein
from .errors import DomainError, FrameError


@lru_cache(maxsize=None)
def _multi_indices(m: int, nvars: int) -> tuple:
    if nvars == 1:
        return ((m,),)
    out = []
    for first in range(m, -1, -1):
        for rest in _multi_indices(m - first, nvars - 1):
            out.append((first,) + rest)
    return tuple(out)


def multi_indices(m: int, nvars: int) -> np.ndarray:
    """All multi-indices of length ``nvars`` summing to ``m``, in basis order."""
    return np.array(_multi_indices(m, nvars), dtype=int)


def multinomials(m: int, nvars: int) -> np.ndarray:
    idx = multi_indices(m, nvars)
    return np.array([math.factorial(m) // math.prod(math.factorial(k) for k in row)
                     for row in idx], dtype=float)


def implicit_basis_size(m: int, dim: int) -> int:
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    if dim not in (2, 3):
        raise DomainError(f"dim must be 2 or 3, got {dim}")
    return math.comb(m + dim, dim)


def convergence_rate(m: int, dim: int) -> int:
    """Tabulated convergence order of degree-m approximate implicitization."""
    if m < 1:
        raise DomainError(f"implicit degree must be >= 1, got {m}")
    if dim == 2:
        return (m + 1) * (m + 2) // 2 - 1
    if dim == 3:
        # floor(sqrt(X)/6 - 1/2) == (isqrt(X) - 3) // 6 for integer X
        x = 9 + 12 * m ** 3 + 72 * m ** 2 + 132 * m
        return (math.isqrt(x) - 3) // 6
    raise DomainError(f"dim must be 2 or 3, got {dim}")


def implicit_basis_values(bary, m: int) -> np.ndarray:
    """All q_k evaluated at barycentric points (last axis = coordinates)."""
    bary = np.asarray(bary, dtype=float)
    nvars = bary.shape[-1]
    idx = multi_indices(m, nvars)
    powers = np.ones(bary.shape[:-1] + (m + 1, nvars))
    for e in range(1, m + 1):
        powers[..., e, :] = powers[..., e - 1, :] * bary
    vals = np.ones(bary.shape[:-1] + (idx.shape[0],))
    for var in range(nvars):
        vals = vals * powers[..., idx[:, var], var]
    return vals * multinomials(m, nvars)


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class BarycentricFrame:
    """Reference simplex for the implicit Bernstein basis.

    ``matrix`` has the homogeneous vertex coordinates as columns, so a
    homogeneous point X has barycentric coordinates ``inv(matrix) @ X``.
    Affine vertices get weight 1; the identity matrix reproduces the
    homogeneous coordinates themselves.
    """

    matrix: np.ndarray
    inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (3, 4):
            raise FrameError(f"frame matrix must be 3x3 or 4x4, got {a.shape}")
        norms = np.linalg.norm(a, axis=0)
        if np.any(norms == 0.0) or abs(np.linalg.det(a / norms)) <= 1e-12:
            raise FrameError("frame vertices are degenerate")
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "inverse", np.linalg.inv(a))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] - 1

    @classmethod
    def from_vertices(cls, vertices) -> "BarycentricFrame":
        """Vertices as rows: affine (dim coordinates) or homogeneous (dim + 1)."""
        v = np.asarray(vertices, dtype=float)
        nv = v.shape[0]
        if v.ndim != 2 or nv not in (3, 4):
            raise FrameError("need 3 vertices (curves) or 4 vertices (surfaces)")
        if v.shape[1] == nv - 1:
            v = np.hstack([v, np.ones((nv, 1))])
        elif v.shape[1] != nv:
            raise FrameError(f"vertex coordinates have wrong length {v.shape[1]}")
        return cls(v.T)

    @classmethod
    def default(cls, dim: int = 2) -> "BarycentricFrame":
        if dim == 2:
            return cls.from_vertices([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        if dim == 3:
            return cls.from_vertices([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                                      [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        raise FrameError(f"dim must be 2 or 3, got {dim}")

    @classmethod
    def homogeneous(cls, dim: int = 2) -> "BarycentricFrame":
        return cls(np.eye(dim + 1))

    @classmethod
    def auto(cls, points, inflate: float = 0.1) -> "BarycentricFrame":
        """Right-corner simplex around the bounding box of affine ``points``."""
        pts = np.asarray(points, dtype=float)
        dim = pts.shape[1]
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        size = np.maximum(hi - lo, 1e-3 * max(1.0, float(np.max(np.abs(pts)))))
        lo = lo - inflate * size
        size = size * (1.0 + 2.0 * inflate)
        corners = [lo + dim * size[i] * np.eye(dim)[i] for i in range(dim)]
        if dim == 2:
            verts = [corners[0], lo, corners[1]]
        else:
            verts = [lo] + corners
        return cls.from_vertices(verts)

    def vertices(self) -> np.ndarray:
        """Vertices as rows, affine when every weight is nonzero."""
        a = self.matrix.T
        w = a[:, -1]
        if np.all(w != 0.0):
            return a[:, :-1] / w[:, None]
        return a.copy()


def _homogenize(point, dim: int) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    if p.shape[-1] == dim:
        return np.concatenate([p, np.ones(p.shape[:-1] + (1,))], axis=-1)
    if p.shape[-1] == dim + 1:
        return p
    raise DomainError(f"point must have {dim} or {dim + 1} coordinates")


def to_barycentric(frame: BarycentricFrame, point) -> np.ndarray:
    """Barycentric coordinates of an affine or homogeneous point (or array of them)."""
    x = _homogenize(point, frame.dim)
    bary = x @ frame.inverse.T
    # one refinement step with an extended-precision residual, so that
    # ill-conditioned frames still map their vertices to unit vectors
    ext = np.longdouble
    resid = x.astype(ext) - bary.astype(ext) @ frame.matrix.astype(ext).T
    return bary + resid.astype(float) @ frame.inverse.T


# ---------------------------------------------------------------------------
# parametric objects


@dataclass(frozen=True)
class ParametricCurve:
    """Rational Bezier curve; ``coeffs`` rows are (g1, g2, h) on [0, 1]."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != 3 or c.shape[1] < 2:
            raise DomainError(f"curve coefficients must be 3 x (n+1), n >= 1; got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise DomainError("curve coefficients must be finite")
        if not np.any(c[2] != 0.0):
            raise DomainError("h is identically zero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @classmethod
    def from_control_points(cls, points, weights=None) -> "ParametricCurve":
        pts = np.asarray(points, dtype=float)
        w = np.ones(len(pts)) if weights is None else np.asarray(weights, dtype=float)
        return cls(np.vstack([w * pts[:, 0], w * pts[:, 1], w]))

    @classmethod
    def from_monomial(cls, coeffs) -> "ParametricCurve":
        return cls(monomial_to_bernstein(coeffs))

    def control_points(self) -> np.ndarray:
        h = self.coeffs[2]
        if np.any(h == 0.0):
            raise DomainError("control point at infinity (zero weight)")
        return (self.coeffs[:2] / h).T


@dataclass(frozen=True)
class TensorPatch:
    """Rational tensor-product Bezier patch; ``coeffs`` is 4 x (n1+1) x (n2+1)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 3 or c.shape[0] != 4:
            raise DomainError(f"tensor patch coefficients must be 4 x (n1+1) x (n2+1); got {c.shape}")
        if not np.any(c[3] != 0.0):
            raise DomainError("h is identically zero")
        object.__setattr__(self, "coeffs", c)

    @property
    def bidegree(self) -> tuple:
        return self.coeffs.shape[1] - 1, self.coeffs.shape[2] - 1

    def evaluate(self, s, t) -> np.ndarray:
        """Homogeneous points at parameter arrays s, t (broadcast together)."""
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        c = self.coeffs
        # de Casteljau along t for each s-row, then along s
        rows = de_casteljau(c, t)  # (4, n1+1, *shape)
        rows = np.moveaxis(rows, 1, -1)  # (4, *shape, n1+1)
        work = rows
        ss = s[..., None]
        while work.shape[-1] > 1:
            work = (1.0 - ss) * work[..., :-1] + ss * work[..., 1:]
        return np.moveaxis(work[..., 0], 0, -1)


@dataclass(frozen=True)
class TriangularPatch:
    """Rational Bezier triangle of total degree n.

    ``coeffs`` is 4 x N, N = C(n+2, 2); column order follows
    ``multi_indices(n, 3)`` on the exponents of (s, t, 1 - s - t).
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != 4:
            raise DomainError(f"triangular patch coefficients must be 4 x N; got {c.shape}")
        n = (math.isqrt(8 * c.shape[1] + 1) - 3) // 2
        if math.comb(n + 2, 2) != c.shape[1]:
            raise DomainError(f"{c.shape[1]} is not a triangular number C(n+2, 2)")
        if not np.any(c[3] != 0.0):
            raise DomainError("h is identically zero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return (math.isqrt(8 * self.coeffs.shape[1] + 1) - 3) // 2

    def evaluate(self, s, t) -> np.ndarray:
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        bary = np.stack([s, t, 1.0 - s - t], axis=-1)
        basis = implicit_basis_values(bary, self.degree)  # Bernstein triangle basis
        return basis @ self.coeffs.T


# ---------------------------------------------------------------------------
# implicit polynomials


@dataclass(frozen=True)
class ImplicitPolynomial:
    """Total-degree-m polynomial in the Bernstein basis of ``frame``.

    ``b`` is normalized to unit 2-norm on construction.
    """

    degree: int
    frame: BarycentricFrame
    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=float).reshape(-1)
        size = implicit_basis_size(self.degree, self.frame.dim)
        if b.size != size:
            raise DomainError(f"expected {size} coefficients, got {b.size}")
        norm = np.linalg.norm(b)
        if norm == 0.0:
            raise DomainError("zero coefficient vector")
        object.__setattr__(self, "b", b / norm)

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def size(self) -> int:
        return self.b.size


def eval_implicit(q: ImplicitPolynomial, point) -> np.ndarray:
    """q at affine or homogeneous point(s)."""
    bary = to_barycentric(q.frame, point)
    return implicit_basis_values(bary, q.degree) @ q.b


def eval_curve(curve: ParametricCurve, t) -> np.ndarray:
    """Homogeneous (g1, g2, h) at t by de Casteljau; trailing axis = components."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainError("parameter must lie in [0, 1]")
    return np.moveaxis(de_casteljau(curve.coeffs, t), 0, -1)


def curve_segment(curve: ParametricCurve, h: float) -> ParametricCurve:
    """The piece of ``curve`` over [0, h], reparametrized to [0, 1]."""
    return ParametricCurve(bernstein_subdivide_left(curve.coeffs, h))
