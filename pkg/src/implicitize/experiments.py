"""Method comparison and convergence-rate experiments."""
from __future__ import annotations

import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curves import Method, algebraic_error_max, implicitize
from .geometry import BarycentricFrame, ParametricCurve, curve_segment

log = logging.getLogger(__name__)

COMPARE_METHODS = (Method.MONOMIAL, Method.BERNSTEIN, Method.LAGRANGE_UNIFORM, Method.CHEBYSHEV)
ERROR_FLOOR = 1e-14
FLOOR_FACTOR = 100.0


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("IMPLICITIZE_THREADS", "1")))
    except ValueError:
        return 1


def random_triangle_points(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points in the triangle (1,0), (0,0), (0,1)."""
    u = rng.random((count, 2))
    flip = u.sum(axis=1) > 1.0
    u[flip] = 1.0 - u[flip]
    return u


def random_curves(seed: int, count: int, degree: int) -> list[ParametricCurve]:
    rng = np.random.default_rng(seed)
    return [ParametricCurve.from_control_points(random_triangle_points(rng, degree + 1))
            for _ in range(count)]


def run_compare(seed: int, count: int = 100, degree: int = 10, degrees=range(1, 11),
                methods=COMPARE_METHODS, samples: int = 1001,
                frame: BarycentricFrame | None = None) -> list[dict]:
    """Mean of max |q(p(t))| over ``count`` random curves per (method, m).

    Rows come back ordered by method, then m, whatever the thread count.
    """
    curves = random_curves(seed, count, degree)
    tasks = [(Method(meth), int(m)) for meth in methods for m in degrees]

    def one(task):
        meth, m = task
        errs = [algebraic_error_max(c, implicitize(c, m, meth, frame)[1].solution, samples)
                for c in curves]
        return float(np.mean(errs))

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            means = list(pool.map(one, tasks))
    else:
        means = [one(t) for t in tasks]
    return [{"method": meth.value, "m": m, "mean_max_error": e}
            for (meth, m), e in zip(tasks, means)]


@dataclass
class ConvergenceResult:
    h: np.ndarray
    max_error: np.ndarray
    used: np.ndarray
    slope: float | None


def fit_slope(h, err, floor: float = ERROR_FLOOR, factor: float = FLOOR_FACTOR):
    """Least-squares slope of log(err) against log(h), ignoring floor-level errors."""
    h = np.asarray(h, dtype=float)
    err = np.asarray(err, dtype=float)
    used = err > factor * floor
    if np.count_nonzero(used) < 2:
        return None, used
    slope = np.polyfit(np.log(h[used]), np.log(err[used]), 1)[0]
    return float(slope), used


def run_convergence(curve: ParametricCurve, m: int, method=Method.CHEBYSHEV,
                    levels: int = 8, samples: int = 1001,
                    frame: BarycentricFrame | None = None) -> ConvergenceResult:
    """Implicitize the pieces over [0, h], h = 2^-1 ... 2^-levels, and fit the rate."""
    hs = 2.0 ** -np.arange(1, levels + 1)
    errs = np.empty(levels)
    for i, h in enumerate(hs):
        seg = curve_segment(curve, float(h))
        _, res = implicitize(seg, m, method, frame)
        errs[i] = algebraic_error_max(seg, res.solution, samples)
    slope, used = fit_slope(hs, errs)
    if not np.all(used):
        warnings.warn(f"{np.count_nonzero(~used)} of {levels} errors at the "
                      f"{ERROR_FLOOR:g} floor; excluded from the fit", RuntimeWarning,
                      stacklevel=2)
    return ConvergenceResult(hs, errs, used, slope)
