import numpy as np
import pytest
from hypothesis import settings

from implicitize.geometry import BarycentricFrame, ParametricCurve

# fixed example sequence so repeated runs print the same results
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

SQ3 = 1.0 / np.sqrt(3.0)
CIRCLE_B = np.array([SQ3, 0.0, 0.0, SQ3, 0.0, -SQ3])

SEVEN_POINTS = [(1 / 5, 1 / 10), (1 / 2, 3 / 10), (1 / 2, 1 / 2), (3 / 10, 1 / 2),
                (0.0, 0.0), (0.0, 4 / 5), (4 / 5, 0.0), (1 / 5, 1 / 5)]


def circle_curve() -> ParametricCurve:
    # (2t, 1 - t^2, 1 + t^2) in power form
    return ParametricCurve.from_monomial([[0, 2, 0], [1, 0, -1], [1, 0, 1]])


def seven_curve() -> ParametricCurve:
    return ParametricCurve.from_control_points(np.array(SEVEN_POINTS))


def random_polynomial_curve(rng, degree) -> ParametricCurve:
    """Control points inside the default triangle, unit weights."""
    u = rng.random((degree + 1, 2))
    flip = u.sum(axis=1) > 1
    u[flip] = 1 - u[flip]
    return ParametricCurve.from_control_points(u)


def random_rational_curve(rng, degree) -> ParametricCurve:
    pts = 0.1 + 0.4 * rng.random((degree + 1, 2))
    w = 0.5 + rng.random(degree + 1)
    return ParametricCurve.from_control_points(pts, w)


@pytest.fixture
def circle():
    return circle_curve()


@pytest.fixture
def homogeneous():
    return BarycentricFrame.homogeneous(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
