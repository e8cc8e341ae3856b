"""JSON readers and writers for curves, patches and implicit polynomials.

Curve::

    {"type": "curve", "degree": n, "coeffs": [[g1...], [g2...], [h...]],
     "basis": "bernstein" | "monomial"}          # basis optional

Tensor patch::

    {"type": "tensor", "bidegree": [n1, n2], "coeffs": [G1, G2, G3, H]}

with each grid (n1+1) x (n2+1), first index along s.

Triangular patch::

    {"type": "triangular", "degree": n, "coeffs": [g1, g2, g3, h]}

with each list of length C(n+2, 2) in the order of ``multi_indices(n, 3)``
on the exponents of (s, t, 1 - s - t): (n,0,0), (n-1,1,0), (n-1,0,1), ...

Implicit polynomial::

    {"dim": 2, "degree": m, "frame": [[x, y], ...], "b": [...],
     "ordering": "lex-desc"}

Frame vertices are affine (dim entries) or homogeneous (dim + 1 entries).
``b`` follows the same descending lexicographic multi-index order, e.g.
u^2, 2uv, 2uw, v^2, 2vw, w^2 for m = 2 on a triangle.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ImplicitizeError
from .geometry import (
    BarycentricFrame,
    ImplicitPolynomial,
    ParametricCurve,
    TensorPatch,
    TriangularPatch,
)

ORDERING = "lex-desc"


class InputError(ImplicitizeError, ValueError):
    """Malformed input file."""


def _load(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _array(value, what: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what}: not a numeric array") from exc
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what}: non-finite values")
    return arr


def curve_from_dict(data: dict) -> ParametricCurve:
    if data.get("type") != "curve":
        raise InputError("expected \"type\": \"curve\"")
    coeffs = _array(data.get("coeffs"), "coeffs")
    if coeffs.ndim != 2 or coeffs.shape[0] != 3:
        raise InputError(f"curve coeffs must be 3 rows, got shape {coeffs.shape}")
    if "degree" in data and int(data["degree"]) != coeffs.shape[1] - 1:
        raise InputError(f"degree {data['degree']} does not match {coeffs.shape[1]} coefficients")
    basis = data.get("basis", "bernstein")
    try:
        if basis == "monomial":
            return ParametricCurve.from_monomial(coeffs)
        if basis == "bernstein":
            return ParametricCurve(coeffs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown basis {basis!r}")


def patch_from_dict(data: dict):
    kind = data.get("type")
    coeffs = _array(data.get("coeffs"), "coeffs")
    try:
        if kind == "tensor":
            patch = TensorPatch(coeffs)
            if "bidegree" in data and list(map(int, data["bidegree"])) != list(patch.bidegree):
                raise InputError(f"bidegree {data['bidegree']} does not match coefficients")
            return patch
        if kind == "triangular":
            patch = TriangularPatch(coeffs)
            if "degree" in data and int(data["degree"]) != patch.degree:
                raise InputError(f"degree {data['degree']} does not match coefficients")
            return patch
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"expected \"type\" tensor or triangular, got {kind!r}")


def load_curve(path) -> ParametricCurve:
    return curve_from_dict(_load(path))


def load_patch(path):
    return patch_from_dict(_load(path))


def curve_to_dict(curve: ParametricCurve) -> dict:
    return {"type": "curve", "degree": curve.degree, "coeffs": curve.coeffs.tolist()}


def patch_to_dict(patch) -> dict:
    if isinstance(patch, TensorPatch):
        return {"type": "tensor", "bidegree": list(patch.bidegree), "coeffs": patch.coeffs.tolist()}
    return {"type": "triangular", "degree": patch.degree, "coeffs": patch.coeffs.tolist()}


def frame_to_list(frame: BarycentricFrame) -> list:
    return frame.vertices().tolist()


def frame_from_list(vertices) -> BarycentricFrame:
    try:
        return BarycentricFrame.from_vertices(_array(vertices, "frame"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def implicit_to_dict(q: ImplicitPolynomial) -> dict:
    return {
        "dim": q.dim,
        "degree": q.degree,
        "frame": frame_to_list(q.frame),
        "b": q.b.tolist(),
        "ordering": ORDERING,
    }


def implicit_from_dict(data: dict) -> ImplicitPolynomial:
    try:
        dim, degree = int(data["dim"]), int(data["degree"])
        frame = frame_from_list(data["frame"])
        b = _array(data["b"], "b")
    except (KeyError, TypeError) as exc:
        raise InputError(f"implicit polynomial missing field: {exc}") from exc
    if frame.dim != dim:
        raise InputError(f"frame has dimension {frame.dim}, header says {dim}")
    if data.get("ordering", ORDERING) != ORDERING:
        raise InputError(f"unsupported ordering {data['ordering']!r}")
    try:
        return ImplicitPolynomial(degree, frame, b)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_implicit(path) -> ImplicitPolynomial:
    return implicit_from_dict(_load(path))


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def fmt(x) -> str:
    """Float with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")
