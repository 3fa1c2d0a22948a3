"""Acceptance suite: one check per criterion, each reporting a PASS/FAIL line.

Run with pytest, or directly as ``python3 tests/test_acceptance.py``.
"""

import functools
import os
import random
import sys
import time
from math import comb

sys.path.insert(0, os.path.dirname(__file__))

from oracles import oracle_hilbert  # noqa: E402

from twisted_segre.clifford import clifford_algebra, evaluate_t_elements, stabilize, t_element_assignment  # noqa: E402
from twisted_segre.family import GENS, RHO, T_TABLE, DiagonalInstance, random_instance  # noqa: E402
from twisted_segre.findim import center, radical, verify_explicit_iso, wedderburn_type  # noqa: E402
from twisted_segre.linalg import Fraction, Matrix, Subspace  # noqa: E402
from twisted_segre.normality import extend_automorphism, left_action, regularity_window, verify_normal  # noqa: E402
from twisted_segre.quadratic import (  # noqa: E402
    QuadraticPresentation,
    add_relation,
    hilbert,
    koszul_series_check,
    multiply,
    polynomial_ring,
    presentations_equal,
    quadratic_dual,
)
from twisted_segre.segre import density_window_check, segre_presentation, smash_truncation, zhang_twist_check  # noqa: E402
from twisted_segre.twisting import Twist2x2, TwistData, validate_2x2, validate_descent  # noqa: E402

RESULTS: list[str] = []

UNIPOTENT = DiagonalInstance(1, 1, 1, 1, 1, 1)
DIAGONAL = DiagonalInstance(1, 0, 2, 3, 0, 1)
BOTH = (UNIPOTENT, DIAGONAL)


def criterion(number, title, limit=None):
    """Record a PASS/FAIL line for the wrapped check and enforce its runtime limit."""

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            try:
                fn()
                elapsed = time.perf_counter() - start
                if limit is not None:
                    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
            except Exception as exc:
                line = f"FAIL criterion {number}: {title} ({exc.__class__.__name__}: {exc})"
                RESULTS.append(line)
                print(line)
                raise
            line = f"PASS criterion {number}: {title} ({time.perf_counter() - start:.2f}s)"
            RESULTS.append(line)
            print(line)

        return run

    return wrap


@criterion(1, "Segre presentation equals span{f1..f7}", limit=1.0)
def test_criterion_01_segre_presentation():
    for inst in BOTH:
        pres = segre_presentation(inst.twist()).underlying
        expected = Subspace.from_sparse(16, [f.vector(4) for f in inst.segre_relations()])
        assert pres.gens.names == GENS.names
        assert pres.relations == expected and expected.dim == 7


@criterion(2, "Hilbert functions (n+1)^2 and C(n+3,3) for n <= 6", limit=5.0)
def test_criterion_02_hilbert():
    for inst in BOTH:
        segre = segre_presentation(inst.twist()).underlying
        assert [hilbert(segre, n) for n in range(7)] == [(n + 1) ** 2 for n in range(7)]
        S = inst.regular_base()
        assert [hilbert(S, n) for n in range(7)] == [comb(n + 3, 3) for n in range(7)]


@criterion(3, "Koszul dual relations equal span{g1..g9}")
def test_criterion_03_koszul_dual():
    for inst in BOTH:
        dual = quadratic_dual(segre_presentation(inst.twist()).underlying, star=False)
        expected = Subspace.from_sparse(16, [g.vector(4) for g in inst.dual_relations()])
        assert dual.relations.dim == 9
        assert dual.relations == expected


@criterion(4, "f7 is a regular normal element of S with the displayed commutation rules")
def test_criterion_04_f7_normal():
    for inst in BOTH:
        S = inst.regular_base()
        cert = verify_normal(S, inst.f7(), N=6)
        a11, a21, a22, b11, b21, b22 = inst.a11, inst.a21, inst.a22, inst.b11, inst.b21, inst.b22
        k = a11 * b21 + a21 * b22
        X, Y, Z, W = (S.element({g: 1}) for g in "XYZW")
        mu = [
            X.scale(b11 / a22),
            (X.scale(k) + Y.scale(a22 * b22)).scale(1 / (a11 * a22)),
            Z.scale(a11 / b22),
            (Z.scale(k) + W.scale(a22 * b22)).scale(1 / (b11 * b22)),
        ]
        f7 = inst.f7()
        for g, image in zip((X, Y, Z, W), mu):
            assert multiply(S, f7, g) == multiply(S, image, f7)
        expected = Matrix([[mu[j].vector(4).get(i, 0) for j in range(4)] for i in range(4)])
        assert left_action(cert) == expected
        assert regularity_window(S, f7, N=6)["regular"]


@criterion(5, "normal element w of the dual, its automorphism, and the quotient by w")
def test_criterion_05_dual_normal():
    for inst in BOTH:
        D = inst.dual()
        w = inst.w()
        cert = verify_normal(D, w, N=6)
        a11, a21, a22, b11, b21, b22 = inst.a11, inst.a21, inst.a22, inst.b11, inst.b21, inst.b22
        k = a11 * b21 + a21 * b22
        nu = Matrix([
            [a11 * b11 / (a11 * a22), 0, 0, 0],
            [k / (a11 * a22), b22 / a11, 0, 0],
            [0, 0, a11 * b11 / (b11 * b22), 0],
            [0, 0, k / (b11 * b22), a22 / b11],
        ])
        assert cert.nu1 == nu
        assert extend_automorphism(D, cert.nu1)
        assert presentations_equal(add_relation(D, w), quadratic_dual(inst.regular_base(), star=False))


@criterion(6, "C(A) is M2 x M2 with the displayed multiplication table", limit=10.0)
def test_criterion_06_clifford():
    for inst in BOTH:
        D = inst.dual()
        cert = verify_normal(D, inst.w())
        stab = stabilize(D, cert)
        assert stab.i0 == 2 and stab.dims == (1, 7, 8, 8)
        C = clifford_algebra(D, cert, stab)
        A = C.base
        assert A.dim == 8 and A.is_associative() and A.is_unital()
        coeffs = (inst.a11, inst.a21, inst.a22, inst.b11, inst.b21, inst.b22)
        table = evaluate_t_elements(C, *coeffs)
        assert table == [[tuple(Fraction(x) for x in cell) for cell in row] for row in T_TABLE]
        assert table[1][1] == (0,) * 8
        assert table[1][6] == (0, 0, 0, -1, 0, 0, 0, -1)
        assert table[2][4] == (0, 0, -1, 0, 0, 0, 0, 0)
        assert radical(A).dim == 0
        assert center(A).dim == 2
        assert sorted(wedderburn_type(A).blocks) == [2, 2]
        assert verify_explicit_iso(A, list(zip(t_element_assignment(C, inst), RHO)))


@criterion(7, "Zhang twist dichotomy")
def test_criterion_07_zhang():
    def twist(C, Q):
        t = Twist2x2.diagonal(C, Q)
        return TwistData(t.seed(), polynomial_ring("uv"), polynomial_ring("xy"), blocks=t)

    assert zhang_twist_check(twist([[2, 0], [0, 1]], [[2, 0], [0, 1]])) is True
    assert zhang_twist_check(twist([[1, 0], [0, 2]], [[3, 0], [0, 1]])) is False


@criterion(8, "density window for i=1, s=-1 and S1 S1 = S2")
def test_criterion_08_density():
    report = density_window_check(smash_truncation(UNIPOTENT.twist(), 1, 4), 1, -1)
    assert report["covered"] == [1, 2, 3, 4]
    assert [d["T"] for d in report["defects"]] == [0] and not report["uncovered"]
    square = density_window_check(smash_truncation(UNIPOTENT.twist(), 2, 4), 1, 1)
    assert square["full_coverage"] and square["defect_dim"] == 0


@criterion(9, "twisting-map validators agree on random commuting and non-commuting pairs", limit=30.0)
def test_criterion_09_validators():
    rng = random.Random(20240901)
    for _ in range(50):
        t = random_instance(rng).blocks()
        a = validate_2x2(t)["passed"]
        b = validate_descent(TwistData(t.seed(), polynomial_ring("uv"), polynomial_ring("xy"))).passed
        assert a and b
    count = 0
    while count < 50:
        C = Matrix([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)])
        Q = Matrix([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)])
        if not (C.is_invertible() and Q.is_invertible()) or C @ Q == Q @ C:
            continue
        t = Twist2x2.diagonal(C, Q)
        a = validate_2x2(t)["passed"]
        b = validate_descent(TwistData(t.seed(), polynomial_ring("uv"), polynomial_ring("xy"))).passed
        assert not a and not b
        count += 1


@criterion(10, "Koszul numeric identity for the Segre product and S")
def test_criterion_10_koszul_numeric():
    for inst in BOTH:
        assert koszul_series_check(segre_presentation(inst.twist()).underlying, 6)
        assert koszul_series_check(inst.regular_base(), 6)


@criterion(11, "hilbert agrees with the word-enumeration oracle on 20 random presentations")
def test_criterion_11_oracle():
    rng = random.Random(11)
    for _ in range(20):
        rels = []
        for _ in range(rng.randint(1, 3)):
            rels.append({(a, b): rng.randint(-2, 2) for a in range(2) for b in range(2)})
        vecs = [{a * 2 + b: Fraction(c) for (a, b), c in r.items() if c} for r in rels]
        pres = QuadraticPresentation(["x", "y"], Subspace.from_sparse(4, [v for v in vecs if v]))
        for d in range(5):
            assert hilbert(pres, d) == oracle_hilbert(2, rels, d)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:
                failed += 1
    print(f"{11 - failed}/11 criteria passed")
    sys.exit(1 if failed else 0)
