"""
Univariate polynomial bases on [0, 1].

Evaluation of the basis families used to expand ``q(p(t))``, the
transforms that produce expansion coefficients from samples, Bernstein
arithmetic (products, degree elevation, subdivision) and the quadrature
rules consumed by the weak method and the Legendre projection.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeError, DomainError

MAX_PRODUCT_DEGREE = 120
MAX_GAUSS_POINTS = 512


class Family(str, enum.Enum):
    BERNSTEIN = "bernstein"
    LAGRANGE_UNIFORM = "lagrange-uniform"
    LAGRANGE_CHEBYSHEV = "lagrange-chebyshev"
    CHEBYSHEV = "chebyshev"
    LEGENDRE = "legendre"
    MONOMIAL = "monomial"


class Scaling(str, enum.Enum):
    SUP = "sup"
    ORTHONORMAL = "orthonormal"


@dataclass(frozen=True)
class BasisFamily:
    """A univariate basis of ``degree + 1`` functions on [0, 1].

    ``scaling`` only matters for Legendre: ``SUP`` gives ``P_j(1) = 1``,
    ``ORTHONORMAL`` gives unit L2 norm on [0, 1].
    """

    tag: Family
    degree: int
    scaling: Scaling = Scaling.SUP

    def __post_init__(self):
        object.__setattr__(self, "tag", Family(self.tag))
        object.__setattr__(self, "scaling", Scaling(self.scaling))
        if self.degree < 0:
            raise DomainError(f"basis degree must be non-negative, got {self.degree}")

    @property
    def size(self) -> int:
        return self.degree + 1

    def nodes(self) -> np.ndarray:
        """Interpolation nodes of the Lagrange families."""
        if self.tag is Family.LAGRANGE_UNIFORM:
            return uniform_points(self.size)
        if self.tag is Family.LAGRANGE_CHEBYSHEV:
            return chebyshev_points(self.size)
        raise ValueError(f"{self.tag.value} basis has no interpolation nodes")


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [0, 1].

    ``weight`` names the weight function the rule integrates against:
    ``"unit"`` for w = 1, ``"chebyshev"`` for w = 1/sqrt(t(1-t)).
    """

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    weight: str = "unit"

    def integrate(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(self.weights, values, axes=(0, 0))


# ---------------------------------------------------------------------------
# binomials


def binomial_row(n: int) -> np.ndarray:
    """C(n, 0..n) in floating point by the multiplicative recurrence."""
    row = np.empty(n + 1)
    row[0] = 1.0
    for k in range(n):
        row[k + 1] = row[k] * (n - k) / (k + 1)
    return np.rint(row) if n <= 50 else row


def _check_unit_interval(t):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainError("parameter must lie in [0, 1]")
    return t


# ---------------------------------------------------------------------------
# node sets


def uniform_points(count: int) -> np.ndarray:
    if count < 1:
        raise DomainError("need at least one node")
    if count == 1:
        return np.array([0.5])
    return np.arange(count) / (count - 1)


def chebyshev_points(count: int) -> np.ndarray:
    """Chebyshev extreme points mapped to [0, 1], ascending.

    >>> chebyshev_points(3)
    array([0. , 0.5, 1. ])
    """
    if count < 2:
        raise DomainError(f"need at least 2 Chebyshev points, got {count}")
    j = np.arange(count)
    t = 0.5 * (1.0 - np.cos(j * np.pi / (count - 1)))
    # pin the symmetric values so that t_j + t_{L-1-j} == 1 exactly
    half = count // 2
    t[count - half:] = 1.0 - t[:half][::-1]
    if count % 2:
        t[half] = 0.5
    return t


def _barycentric_weights(family: Family, count: int) -> np.ndarray:
    if count == 1:
        return np.ones(1)
    sign = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
    if family is Family.LAGRANGE_UNIFORM:
        return sign * binomial_row(count - 1)
    w = sign.copy()
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


# ---------------------------------------------------------------------------
# evaluation


def _bernstein_values(n: int, t: np.ndarray) -> np.ndarray:
    # triangular scheme, stable for any degree
    out = np.zeros(t.shape + (n + 1,))
    out[..., 0] = 1.0
    s = 1.0 - t
    for d in range(1, n + 1):
        prev = out[..., :d].copy()
        out[..., :d] = prev * s[..., None]
        out[..., 1:d + 1] += prev * t[..., None]
    return out


def _chebyshev_values(n: int, t: np.ndarray) -> np.ndarray:
    x = 2.0 * t - 1.0
    out = np.empty(t.shape + (n + 1,))
    out[..., 0] = 1.0
    if n >= 1:
        out[..., 1] = x
    for j in range(2, n + 1):
        out[..., j] = 2.0 * x * out[..., j - 1] - out[..., j - 2]
    return out


def legendre_values(n: int, t, scaling=Scaling.SUP) -> np.ndarray:
    """Shifted Legendre polynomials P_0..P_n at t (last axis indexes j)."""
    t = np.asarray(t, dtype=float)
    x = 2.0 * t - 1.0
    out = np.empty(t.shape + (n + 1,))
    out[..., 0] = 1.0
    if n >= 1:
        out[..., 1] = x
    for j in range(2, n + 1):
        out[..., j] = ((2 * j - 1) * x * out[..., j - 1] - (j - 1) * out[..., j - 2]) / j
    if Scaling(scaling) is Scaling.ORTHONORMAL:
        out *= np.sqrt(2.0 * np.arange(n + 1) + 1.0)
    return out


def _lagrange_values(family: Family, n: int, t: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.ones(t.shape + (1,))
    nodes = BasisFamily(family, n).nodes()
    w = _barycentric_weights(family, n + 1)
    flat = t.reshape(-1)
    out = np.empty((flat.size, n + 1))
    for i, ti in enumerate(flat):
        diff = ti - nodes
        hit = np.flatnonzero(diff == 0.0)
        if hit.size:
            out[i] = 0.0
            out[i, hit[0]] = 1.0
            continue
        terms = w / diff
        out[i] = terms / math.fsum(terms)
    return out.reshape(t.shape + (n + 1,))


def eval_basis(family: BasisFamily, t) -> np.ndarray:
    """Values of all basis functions of ``family`` at ``t``.

    A scalar ``t`` gives a vector of length ``family.size``; an array of
    parameters gives an array with one extra trailing axis.
    """
    t = _check_unit_interval(t)
    n = family.degree
    tag = family.tag
    if tag is Family.BERNSTEIN:
        return _bernstein_values(n, t)
    if tag is Family.CHEBYSHEV:
        return _chebyshev_values(n, t)
    if tag is Family.LEGENDRE:
        return legendre_values(n, t, family.scaling)
    if tag is Family.MONOMIAL:
        return t[..., None] ** np.arange(n + 1)
    return _lagrange_values(tag, n, t)


def chebyshev_series(coeffs, t) -> np.ndarray:
    """Evaluate sum_j c_j T_j(2t - 1) along axis 0 of ``coeffs``."""
    coeffs = np.asarray(coeffs, dtype=float)
    vals = _chebyshev_values(coeffs.shape[0] - 1, np.asarray(t, dtype=float))
    return np.tensordot(vals, coeffs, axes=(-1, 0))


# ---------------------------------------------------------------------------
# transforms


def _dct1_matrix(count: int) -> np.ndarray:
    n = count - 1
    jk = np.outer(np.arange(count), np.arange(count))
    # reduce the angle index mod 2n so the cosines stay exact-ish for big L
    c = np.cos(np.pi * (jk % (2 * n)) / n)
    c[:, 0] *= 0.5
    c[:, -1] *= 0.5
    c *= 2.0 / n
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def dct1_chebyshev_coeffs(samples) -> np.ndarray:
    """Chebyshev coefficients interpolating ``samples`` at Chebyshev points.

    ``samples`` holds values at ``chebyshev_points(L)`` in ascending order,
    along axis 0 (extra axes are transformed independently). A direct
    O(L^2) DCT-I is used.
    """
    samples = np.asarray(samples, dtype=float)
    count = samples.shape[0]
    if count < 2:
        raise DomainError(f"need at least 2 samples, got {count}")
    # ascending t_j corresponds to x = 2t - 1 = -cos(j pi / n); flip to the
    # descending cos(j pi / n) ordering the DCT-I expects.
    return np.tensordot(_dct1_matrix(count), samples[::-1], axes=(1, 0))


def legendre_coeffs(samples, rule: QuadratureRule, count: int,
                    scaling=Scaling.SUP, f_degree: int | None = None) -> np.ndarray:
    """Project samples taken at ``rule.nodes`` onto shifted Legendre P_0..P_{count-1}.

    Exact to roundoff when the integrand degree ``count - 1 + f_degree``
    is within the rule's exactness. Pass ``f_degree`` to have that checked.
    """
    if rule.weight != "unit":
        raise DomainError("Legendre projection needs a unit-weight rule")
    if f_degree is not None and rule.exact_degree < count - 1 + f_degree:
        raise DegreeError(
            f"rule exact to degree {rule.exact_degree}, need {count - 1 + f_degree}")
    samples = np.asarray(samples, dtype=float)
    basis = legendre_values(count - 1, rule.nodes, scaling)  # (npts, count)
    proj = (basis * rule.weights[:, None]).T  # (count, npts)
    coeffs = np.tensordot(proj, samples, axes=(1, 0))
    if Scaling(scaling) is Scaling.SUP:
        norm = 2.0 * np.arange(count) + 1.0
        coeffs = coeffs * norm.reshape((-1,) + (1,) * (coeffs.ndim - 1))
    return coeffs


def bernstein_to_monomial(c) -> np.ndarray:
    """Monomial coefficients (ascending powers) of a Bernstein polynomial."""
    c = np.asarray(c, dtype=float)
    n = c.shape[-1] - 1
    out = np.zeros_like(c)
    bn = binomial_row(n)
    for i in range(n + 1):
        bi = binomial_row(i)
        sign = np.where((i - np.arange(i + 1)) % 2 == 0, 1.0, -1.0)
        out[..., i] = bn[i] * np.sum(sign * bi * c[..., :i + 1], axis=-1)
    return out


def monomial_to_bernstein(a) -> np.ndarray:
    """Bernstein coefficients of a polynomial given by ascending monomial coefficients."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1] - 1
    out = np.zeros_like(a)
    bn = binomial_row(n)
    for j in range(n + 1):
        bj = binomial_row(j)
        out[..., j] = np.sum(bj / bn[:j + 1] * a[..., :j + 1], axis=-1)
    return out


# ---------------------------------------------------------------------------
# Bernstein arithmetic


def bernstein_multiply(a, b) -> np.ndarray:
    """Bernstein coefficients of the product of two Bernstein polynomials.

    c_k = sum_i C(d1, i) C(d2, k-i) / C(d1+d2, k) * a_i * b_{k-i}
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d1, d2 = a.size - 1, b.size - 1
    if d1 + d2 > MAX_PRODUCT_DEGREE:
        raise DegreeError(
            f"product degree {d1 + d2} exceeds supported {MAX_PRODUCT_DEGREE}")
    scaled = np.convolve(a * binomial_row(d1), b * binomial_row(d2))
    return scaled / binomial_row(d1 + d2)


def bernstein_degree_elevate(c, r: int) -> np.ndarray:
    """Raise the degree of Bernstein coefficients (last axis) by ``r``."""
    if r < 0:
        raise DomainError("elevation amount must be non-negative")
    c = np.asarray(c, dtype=float)
    for _ in range(r):
        d = c.shape[-1] - 1
        lam = np.arange(d + 2) / (d + 1)
        out = np.zeros(c.shape[:-1] + (d + 2,))
        out[..., 1:] += lam[1:] * c
        out[..., :-1] += (1.0 - lam[:-1]) * c
        c = out
    return c


def bernstein_subdivide_left(c, h: float) -> np.ndarray:
    """Coefficients of the piece on [0, h], reparametrized to [0, 1].

    Works along the last axis, so a 3 x (n+1) curve is split at once.
    """
    if not 0.0 < h <= 1.0:
        raise DomainError(f"split point must lie in (0, 1], got {h}")
    work = np.array(c, dtype=float)
    n = work.shape[-1] - 1
    left = np.empty_like(work)
    left[..., 0] = work[..., 0]
    for level in range(1, n + 1):
        work = (1.0 - h) * work[..., :-1] + h * work[..., 1:]
        left[..., level] = work[..., 0]
    return left


def de_casteljau(c, t) -> np.ndarray:
    """Evaluate Bernstein coefficients (last axis) at parameters t."""
    c = np.asarray(c, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = c.shape[:-1] + (1,) * t.ndim + c.shape[-1:]
    work = np.broadcast_to(c.reshape(shape), c.shape[:-1] + t.shape + c.shape[-1:]).copy()
    tt = t[..., None]
    while work.shape[-1] > 1:
        work = (1.0 - tt) * work[..., :-1] + tt * work[..., 1:]
    return work[..., 0]


# ---------------------------------------------------------------------------
# quadrature


def gauss_legendre_rule(npoints: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1] from Newton iteration on P_n."""
    if not 1 <= npoints <= MAX_GAUSS_POINTS:
        raise DomainError(f"npoints must be in [1, {MAX_GAUSS_POINTS}], got {npoints}")
    n = npoints
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p0, p1 = np.ones_like(x), x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    nodes = 0.5 * (1.0 + x[order])
    weights = 0.5 * w[order]
    return QuadratureRule(nodes, weights, 2 * n - 1, "unit")


def gauss_chebyshev_rule(npoints: int) -> QuadratureRule:
    """Rule for the integral of f(t) / sqrt(t (1 - t)) over [0, 1]."""
    if npoints < 1:
        raise DomainError(f"npoints must be positive, got {npoints}")
    i = np.arange(1, npoints + 1)
    nodes = 0.5 * (1.0 - np.cos((2 * i - 1) * np.pi / (2 * npoints)))
    weights = np.full(npoints, np.pi / npoints)
    return QuadratureRule(nodes, weights, 2 * npoints - 1, "chebyshev")
