"""Command-line interface: ``implicitize <command> ...``.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import formats
from .curves import (
    CURVE_D_METHODS,
    Method,
    algebraic_error,
    algebraic_error_max,
    implicitize,
    kernel_dimension,
    sign_changes,
    solve,
)
from .errors import DegreeError, DomainError, FrameError, SolverError
from .experiments import COMPARE_METHODS, run_compare, run_convergence
from .geometry import BarycentricFrame, TensorPatch
from .surfaces import TENSOR_METHODS, TRIANGLE_METHODS, algebraic_error_max_surface, build_surface

log = logging.getLogger("implicitize")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
KERNEL_TOL = 1e-10

CURVE_METHODS = [m.value for m in CURVE_D_METHODS] + [Method.WEAK_UNIT.value, Method.WEAK_CHEBYSHEV.value]
SURFACE_METHODS = [m.value for m in TENSOR_METHODS + TRIANGLE_METHODS] + [Method.WEAK_UNIT.value]


def parse_range(text: str) -> list[int]:
    """'A..B' (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def resolve_frame(choice: str | None, dim: int, points=None) -> BarycentricFrame:
    if choice in (None, "default"):
        return BarycentricFrame.default(dim)
    if choice == "homogeneous":
        return BarycentricFrame.homogeneous(dim)
    if choice == "auto":
        if points is None:
            raise formats.InputError("auto frame needs finite control points")
        return BarycentricFrame.auto(points)
    data = formats._load(choice) if Path(choice).exists() else None
    if data is None:
        raise formats.InputError(f"frame must be default, auto, homogeneous or a file; got {choice!r}")
    frame = formats.frame_from_list(data.get("frame", data.get("vertices")))
    if frame.dim != dim:
        raise formats.InputError(f"frame file has dimension {frame.dim}, need {dim}")
    return frame


def _write_text(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else formats.fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _diagnostics(matrix, result, extra: dict) -> dict:
    sigma = result.sigma
    return {
        "method": result.method.value,
        "rows": matrix.L,
        "columns": matrix.M,
        "selected_index": result.selected_index,
        "sigma": sigma.tolist(),
        "sigma_selected": result.sigma_selected,
        "sigma_ratio": result.relative_sigma,
        "error_bound": result.bound,
        "kernel_dimension": kernel_dimension(matrix, KERNEL_TOL),
        "kernel_tol": KERNEL_TOL,
        **extra,
    }


def _emit_solution(args, q, diag: dict) -> None:
    implicit = formats.implicit_to_dict(q)
    if args.out:
        formats.dump_json(implicit, args.out)
        diag_path = args.diagnostics or str(Path(args.out).with_suffix("")) + ".diagnostics.json"
        formats.dump_json(diag, diag_path)
    else:
        sys.stdout.write(formats.dump_json({"implicit": implicit, "diagnostics": diag}))
        if args.diagnostics:
            formats.dump_json(diag, args.diagnostics)


# ---------------------------------------------------------------------------
# commands


def cmd_implicitize(args) -> int:
    curve = formats.load_curve(args.input)
    frame = resolve_frame(args.frame, 2, _safe_points(curve))
    matrix, result = implicitize(curve, args.degree, args.method, frame, args.index, args.rows)
    err = algebraic_error_max(curve, result.solution, args.samples)
    profile = algebraic_error(curve, result.solution, np.linspace(0.0, 1.0, args.samples))
    diag = _diagnostics(matrix, result, {
        "curve_degree": curve.degree,
        "implicit_degree": args.degree,
        "max_algebraic_error": err,
        "error_samples": args.samples,
        "sign_changes": sign_changes(profile),
    })
    _emit_solution(args, result.solution, diag)
    return EXIT_OK


def cmd_surface(args) -> int:
    patch = formats.load_patch(args.input)
    pts = None
    if args.frame == "auto":
        c = patch.coeffs.reshape(4, -1)
        if np.all(c[3] != 0.0):
            pts = (c[:3] / c[3]).T
    frame = resolve_frame(args.frame, 3, pts)
    method = args.method
    if method is None:
        method = "tensor-chebyshev" if isinstance(patch, TensorPatch) else "tri-bernstein"
    allowed = TENSOR_METHODS if isinstance(patch, TensorPatch) else TRIANGLE_METHODS
    if Method(method) not in allowed + (Method.WEAK_UNIT,):
        raise formats.InputError(f"method {method} does not apply to a {type(patch).__name__}")
    matrix = build_surface(patch, args.degree, method, frame)
    result = solve(matrix, args.index)
    diag = _diagnostics(matrix, result, {
        "patch_type": "tensor" if isinstance(patch, TensorPatch) else "triangular",
        "implicit_degree": args.degree,
        "max_algebraic_error": algebraic_error_max_surface(patch, result.solution, args.grid),
        "error_grid": args.grid,
    })
    _emit_solution(args, result.solution, diag)
    return EXIT_OK


def cmd_error_profile(args) -> int:
    curve = formats.load_curve(args.input)
    if args.implicit:
        q = formats.load_implicit(args.implicit)
        if q.dim != 2:
            raise formats.InputError("implicit polynomial is not a planar curve")
        if args.frame is not None:
            frame = resolve_frame(args.frame, 2, _safe_points(curve))
            if not np.allclose(frame.matrix, q.frame.matrix, rtol=0, atol=1e-12):
                raise formats.InputError("implicit polynomial frame differs from --frame")
    else:
        if args.degree is None:
            raise formats.InputError("give --implicit or --degree")
        frame = resolve_frame(args.frame, 2, _safe_points(curve))
        _, res = implicitize(curve, args.degree, args.method, frame, args.index)
        q = res.solution
    t = np.linspace(0.0, 1.0, args.samples)
    err = algebraic_error(curve, q, t)
    if args.format == "json":
        text = formats.dump_json({"t": t.tolist(), "error": err.tolist(),
                                  "sign_changes": sign_changes(err)})
    else:
        text = _csv(["t", "error"], zip(t, err))
    _write_text(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    frame = resolve_frame(args.frame, 2) if args.frame not in (None, "auto") else None
    rows = run_compare(args.seed, args.count, args.curve_degree, args.degrees,
                       args.methods, args.samples, frame)
    if args.format == "json":
        text = formats.dump_json({"seed": args.seed, "count": args.count,
                                  "curve_degree": args.curve_degree, "rows": rows})
    else:
        text = _csv(["method", "m", "mean_max_error"],
                     ((r["method"], str(r["m"]), r["mean_max_error"]) for r in rows))
    _write_text(text, args.out)
    return EXIT_OK


def cmd_convergence(args) -> int:
    curve = formats.load_curve(args.input)
    frame = resolve_frame(args.frame, 2, _safe_points(curve))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = run_convergence(curve, args.degree, args.method, args.levels, args.samples, frame)
    for w in caught:
        log.warning("%s", w.message)
    if args.format == "json":
        text = formats.dump_json({
            "h": res.h.tolist(), "max_error": res.max_error.tolist(),
            "used_in_fit": res.used.tolist(), "slope": res.slope,
        })
    else:
        text = _csv(["h", "max_error", "used_in_fit"],
                    ((h, e, str(int(u))) for h, e, u in zip(res.h, res.max_error, res.used)))
    _write_text(text, args.out)
    slope = "none" if res.slope is None else formats.fmt(res.slope)
    print(f"slope={slope}", file=sys.stderr)
    return EXIT_OK


def _safe_points(curve):
    h = curve.coeffs[2]
    return curve.control_points() if np.all(h != 0.0) else None


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="implicitize",
                                description="Approximate implicitization of rational Bezier curves and patches.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, methods, default_method):
        sp.add_argument("--method", choices=methods, default=default_method)
        sp.add_argument("--frame", default=None,
                        help="default, auto, homogeneous, or a JSON file of vertices")
        sp.add_argument("--index", type=int, default=0,
                        help="singular/eigen vector to use, 0 = smallest")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("implicitize", help="implicitize a curve")
    sp.add_argument("input")
    sp.add_argument("--degree", type=int, required=True)
    common(sp, CURVE_METHODS, "chebyshev")
    sp.add_argument("--rows", type=int, default=None,
                    help="rows L of the D-matrix (Bernstein/Lagrange only)")
    sp.add_argument("--samples", type=int, default=1001)
    sp.add_argument("--diagnostics", default=None)
    sp.set_defaults(func=cmd_implicitize)

    sp = sub.add_parser("surface", help="implicitize a tensor or triangular patch")
    sp.add_argument("input")
    sp.add_argument("--degree", type=int, required=True)
    common(sp, SURFACE_METHODS, None)
    sp.add_argument("--grid", type=int, default=51)
    sp.add_argument("--diagnostics", default=None)
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("error-profile", help="sample q(p(t)) on a uniform grid")
    sp.add_argument("input")
    sp.add_argument("--implicit", default=None)
    sp.add_argument("--degree", type=int, default=None)
    common(sp, CURVE_METHODS, "chebyshev")
    sp.add_argument("--samples", type=int, default=1001)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_error_profile)

    sp = sub.add_parser("compare", help="mean max error over random curves per method and degree")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--curve-degree", type=int, default=10)
    sp.add_argument("--degrees", type=parse_range, default=list(range(1, 11)))
    sp.add_argument("--methods", type=lambda s: s.split(","),
                    default=[m.value for m in COMPARE_METHODS])
    sp.add_argument("--samples", type=int, default=1001)
    sp.add_argument("--frame", default=None)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("convergence", help="error against segment width, with fitted rate")
    sp.add_argument("input")
    sp.add_argument("--degree", type=int, required=True)
    common(sp, CURVE_METHODS, "chebyshev")
    sp.add_argument("--levels", type=int, default=8)
    sp.add_argument("--samples", type=int, default=1001)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_convergence)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if getattr(args, "methods", None):
            args.methods = [Method(m) for m in args.methods]
        return args.func(args)
    except (formats.InputError, DomainError, FrameError, DegreeError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except ValueError as exc:  # unknown enum values and similar
        log.error("%s", exc)
        return EXIT_INPUT
    except (SolverError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
