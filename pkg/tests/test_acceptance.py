"""Acceptance criteria, one test per criterion (5 and 9 are split in parts).

Each test prints a single ``PASS``/``FAIL`` line with the measured value and
the tolerance it is judged against.  Run with ``pytest tests/test_acceptance.py -v``
or directly with ``python3 tests/test_acceptance.py``.
"""
import math
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from conftest import CIRCLE_B, SEVEN_POINTS, circle_curve, random_polynomial_curve, random_rational_curve, seven_curve
from implicitize import cli
from implicitize.curves import (
    Method,
    build_D,
    build_weak,
    implicitize,
    kernel_dimension,
    relative_error,
)
from implicitize.geometry import BarycentricFrame, TensorPatch, multi_indices, multinomials
from implicitize.surfaces import build_D_tensor, weak_matrix_surface

FRAME = BarycentricFrame.default(2)
HOMOGENEOUS = BarycentricFrame.homogeneous(2)
TESTS = Path(__file__).parent


def report(label, ok, detail, capsys=None):
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


# -- 1, 2: circle

def _circle(method):
    start = time.perf_counter()
    _, res = implicitize(circle_curve(), 2, method, HOMOGENEOUS)
    return relative_error(res.b, CIRCLE_B), time.perf_counter() - start


def test_c01_circle_exactness(capsys):
    err, secs = _circle(Method.LEGENDRE_ORTHONORMAL)
    report("C1 circle, legendre-orthonormal", err <= 1e-13 and secs < 0.1,
           f"rel err {err:.3g} (<= 1e-13), {secs:.3f} s (< 0.1 s)", capsys)


def test_c02_weak_gap(capsys):
    strong, _ = _circle(Method.LEGENDRE_ORTHONORMAL)
    weak, _ = _circle(Method.WEAK_UNIT)
    ok = 1e-13 <= weak <= 1e-8 and weak >= 100 * strong
    report("C2 circle, weak-unit", ok,
           f"rel err {weak:.3g} in [1e-13, 1e-8], ratio to C1 {weak / max(strong, 1e-300):.3g} (>= 100)",
           capsys)


# -- 3, 4: Gram identity and column sums

def test_c03_gram_identity(capsys):
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    worst = 0.0
    for i in range(20):
        n, m = 1 + i % 4, 1 + i % 3
        curve = random_rational_curve(rng, n)
        D = build_D(curve, m, FRAME, Method.LEGENDRE_ORTHONORMAL).entries
        Mw = build_weak(curve, m, FRAME, "unit").entries
        worst = max(worst, np.max(np.abs(D.T @ D - Mw)) / np.max(np.abs(Mw)))
    secs = time.perf_counter() - start
    report("C3 D^T D = M_w", worst <= 1e-10 and secs < 5,
           f"max rel gap {worst:.3g} (<= 1e-10), {secs:.2f} s (< 5 s)", capsys)


def test_c04_column_sums(capsys):
    rng = np.random.default_rng(4)
    worst = 0.0
    for i in range(20):
        curve = random_polynomial_curve(rng, 1 + i % 8)
        m = 1 + i % 5
        for method in (Method.CHEBYSHEV, Method.LEGENDRE):
            sums = build_D(curve, m, FRAME, method).entries.sum(axis=1)
            target = np.zeros_like(sums)
            target[0] = 1.0
            worst = max(worst, np.max(np.abs(sums - target)))
    report("C4 column sums (1, 0, ..., 0)", worst <= 1e-10, f"max deviation {worst:.3g} (<= 1e-10)",
           capsys)


# -- 5, 6: sampling limits

LADDER = (25, 50, 100, 200)


def _c05_curve():
    return random_rational_curve(np.random.default_rng(5), 3)


def _converging(gaps, slack=0.05):
    """Monotone within ``slack`` per step, and actually shrinking over the ladder."""
    monotone = all(b <= (1 + slack) * a for a, b in zip(gaps, gaps[1:]))
    return monotone and gaps[-1] <= 0.5 * gaps[0]


def test_c05a_uniform_lagrange_limit(capsys):
    curve = _c05_curve()
    M1 = build_weak(curve, 2, FRAME, "unit").entries
    gaps = []
    for L in LADDER:
        D = build_D(curve, 2, FRAME, Method.LAGRANGE_UNIFORM, L=L).entries
        gaps.append(np.max(np.abs(D.T @ D / (L - 1) - M1)))
    report("C5a h_L D^T D -> M_1 (uniform nodes)", _converging(gaps),
           "gaps " + ", ".join(f"{g:.3g}" for g in gaps) + " (decreasing, 5% slack, last <= first / 2)", capsys)


def test_c05b_chebyshev_lagrange_limit(capsys):
    curve = _c05_curve()
    Mc = build_weak(curve, 2, FRAME, "chebyshev").entries
    gaps = []
    for L in LADDER:
        D = build_D(curve, 2, FRAME, Method.LAGRANGE_CHEBYSHEV, L=L).entries
        gaps.append(np.max(np.abs(D.T @ D / (L - 1) - (np.pi / 2) * Mc)))
    report("C5b (1/(L-1)) D^T D -> (pi/2) M_w (Chebyshev nodes)", _converging(gaps),
           "gaps " + ", ".join(f"{g:.3g}" for g in gaps) + " (decreasing, 5% slack, last <= first / 2)", capsys)


def test_c06_bernstein_lagrange_limit(capsys):
    curve = _c05_curve()
    gap = {}
    for L in (100, 200):
        B = build_D(curve, 2, FRAME, Method.BERNSTEIN, L=L).entries
        U = build_D(curve, 2, FRAME, Method.LAGRANGE_UNIFORM, L=L).entries
        gap[L] = np.max(np.abs(B - U))
    ratio = gap[200] / gap[100]
    report("C6 elevated Bernstein -> uniform Lagrange", ratio <= 0.55,
           f"gap(200)/gap(100) = {ratio:.3f} (<= 0.55)", capsys)


# -- 7, 8: CLI experiments

CUBIC = {"type": "curve", "degree": 3,
         "coeffs": [[0.1, 0.4, 0.7, 0.9], [0.1, 0.8, 0.2, 0.6], [1, 1, 1, 1]]}
QUINTIC = {"type": "curve", "degree": 5, "basis": "monomial",
           "coeffs": [[0.2, 0.5, 0, 0, 0, 0], [0.2, 0.3, 0.4, -0.2, 0.1, 0.05], [1, 0, 0, 0, 0, 0]]}


def _slope(tmp_path, capsys, curve, m):
    import json
    src = tmp_path / f"curve{m}.json"
    src.write_text(json.dumps(curve))
    capsys.readouterr()
    assert cli.main(["convergence", str(src), "--degree", str(m), "--levels", "8",
                     "--out", str(tmp_path / f"conv{m}.csv")]) == 0
    text = capsys.readouterr().err.strip().splitlines()[-1]
    return float(text.split("=")[1])


def test_c07_convergence_rates(tmp_path, capsys):
    start = time.perf_counter()
    s1 = _slope(tmp_path, capsys, CUBIC, 1)
    s2 = _slope(tmp_path, capsys, QUINTIC, 2)
    secs = time.perf_counter() - start
    ok = abs(s1 - 2) <= 0.5 and abs(s2 - 5) <= 1.0 and secs < 30
    report("C7 convergence slopes", ok,
           f"m=1 cubic {s1:.3f} (2 +- 0.5), m=2 quintic {s2:.3f} (5 +- 1), {secs:.2f} s (< 30 s)", capsys)


def test_c08_exact_degree_floors(tmp_path, capsys):
    out = tmp_path / "compare.csv"
    start = time.perf_counter()
    assert cli.main(["compare", "--seed", "0", "--count", "20", "--curve-degree", "10",
                     "--degrees", "1..10", "--out", str(out)]) == 0
    secs = time.perf_counter() - start
    table = {}
    for line in out.read_text().splitlines()[1:]:
        meth, m, err = line.split(",")
        table[(meth, int(m))] = float(err)
    cheb = [table[("chebyshev", m)] for m in range(1, 11)]
    floor = 1e-12
    monotone = all(b <= a or (a <= floor and b <= floor) for a, b in zip(cheb, cheb[1:]))
    ordered = all(table[("monomial", m)] >= table[("chebyshev", m)] for m in range(1, 9))
    ok = cheb[-1] <= 1e-9 and monotone and ordered and secs < 300
    report("C8 compare floors and ordering", ok,
           f"chebyshev m=10 mean {cheb[-1]:.3g} (<= 1e-9), non-increasing {monotone}, "
           f"monomial >= chebyshev {ordered}, {secs:.1f} s (< 300 s)", capsys)


# -- 9: degree-7 curve

def _exact_seven_kernel():
    """Nullspace of the 50 x 36 sample matrix in rational arithmetic."""
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    P = [(Fraction(x).limit_denominator(100), Fraction(y).limit_denominator(100)) for x, y in SEVEN_POINTS]
    n = m = 7
    idx = multi_indices(m, 3)
    coef = multinomials(m, 3)
    rows = []
    for j in range(n * n + 1):
        t = Fraction(j, n * n)
        x = sum(math.comb(n, i) * t ** i * (1 - t) ** (n - i) * p[0] for i, p in enumerate(P))
        y = sum(math.comb(n, i) * t ** i * (1 - t) ** (n - i) * p[1] for i, p in enumerate(P))
        u, v, w = x, 1 - x - y, y  # default triangle frame
        rows.append([QQ(int(c)) * QQ(u) ** int(k[0]) * QQ(v) ** int(k[1]) * QQ(w) ** int(k[2])
                     for c, k in zip(coef, idx)])
    ns = DomainMatrix(rows, (len(rows), len(idx)), QQ).nullspace().to_Matrix()
    vec = [Fraction(int(a.p), int(a.q)) for a in ns.row(0)]
    top = max(abs(a) for a in vec)
    b = np.array([float(a / top) for a in vec])
    return ns.shape[0], b / np.linalg.norm(b)


@pytest.fixture(scope="module")
def seven_exact():
    return _exact_seven_kernel()


def test_c09a_seven_kernel_dimension(capsys, seven_exact):
    D = build_D(seven_curve(), 7, FRAME, Method.LAGRANGE_UNIFORM, L=50)
    k = kernel_dimension(D, 1e-8)
    report("C9a degree-7 Lagrange L=50 kernel dimension", k == 1,
           f"floating kernel_dimension {k} at tol 1e-8 (== 1); exact rational nullspace "
           f"dimension {seven_exact[0]}", capsys)


def test_c09b_seven_bernstein_error(capsys, seven_exact):
    _, ref = seven_exact
    errs = {}
    for name, method in (("monomial", Method.MONOMIAL), ("bernstein", Method.BERNSTEIN),
                         ("lagrange", Method.LAGRANGE_UNIFORM), ("chebyshev", Method.CHEBYSHEV)):
        errs[name] = relative_error(implicitize(seven_curve(), 7, method, FRAME)[1].b, ref)
    others = [v for k, v in errs.items() if k != "bernstein"]
    ok = errs["bernstein"] <= 1e-8 and errs["bernstein"] < min(others)
    report("C9b degree-7 relative errors", ok,
           ", ".join(f"{k} {v:.3g}" for k, v in errs.items()) + " (bernstein <= 1e-8 and smallest)",
           capsys)


# -- 10, 11: reducibility and surfaces

def test_c10_kernel_reducibility(capsys):
    circle = circle_curve()
    k3 = kernel_dimension(build_D(circle, 3, HOMOGENEOUS, Method.CHEBYSHEV), 1e-10)
    k2 = kernel_dimension(build_D(circle, 2, HOMOGENEOUS, Method.CHEBYSHEV), 1e-10)
    report("C10 circle kernel dimensions", k3 >= 2 and k2 == 1, f"m=3: {k3} (>= 2), m=2: {k2} (== 1)",
           capsys)


def test_c11_surfaces(capsys):
    frame = BarycentricFrame.default(3)
    s, t = [[0, 0], [1, 1]], [[0, 1], [0, 1]]
    plane = TensorPatch([s, t, np.zeros((2, 2)), np.ones((2, 2))])
    bilinear = TensorPatch([s, t, [[0, 0], [0, 1]], np.ones((2, 2))])
    ratios = []
    for patch, m in ((plane, 1), (bilinear, 2)):
        for method in (Method.TENSOR_CHEBYSHEV, Method.TENSOR_LEGENDRE_ORTHONORMAL):
            sv = np.linalg.svd(build_D_tensor(patch, m, frame, method).entries, compute_uv=False)
            full = np.zeros(math.comb(m + 3, 3))
            full[:sv.size] = sv
            ratios.append(full[-1] / full[0])
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(5):
        c = 0.1 + 0.3 * rng.random((4, 3, 3))
        c[3] = 0.8 + 0.4 * rng.random((3, 3))
        patch = TensorPatch(c)
        D = build_D_tensor(patch, 2, frame, Method.TENSOR_LEGENDRE_ORTHONORMAL).entries
        Mw = weak_matrix_surface(patch, 2, frame).entries
        worst = max(worst, np.max(np.abs(D.T @ D - Mw)) / np.max(np.abs(Mw)))
    ok = max(ratios) <= 1e-10 and worst <= 1e-10
    report("C11 surface exactness and Gram identity", ok,
           f"max sigma_min/sigma_max {max(ratios):.3g} (<= 1e-10), Gram gap {worst:.3g} (<= 1e-10)",
           capsys)


# -- 12: property suite

def test_c12_property_suite(capsys):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(TESTS),
         "--ignore", str(TESTS / "test_acceptance.py")],
        capture_output=True, text=True, cwd=TESTS.parent)
    secs = time.perf_counter() - start
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    failed = [l.split(" - ")[0].replace("FAILED ", "") for l in proc.stdout.splitlines()
              if l.startswith("FAILED")]
    detail = f"{summary}; {secs:.1f} s (< 600 s)"
    if failed:
        detail += "; failing: " + ", ".join(failed)
    report("C12 property suite", proc.returncode == 0 and secs < 600, detail, capsys)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
