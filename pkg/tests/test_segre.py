import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_segre.family import GENS, DiagonalInstance, random_instance
from twisted_segre.linalg import ONE, Fraction, Subspace
from twisted_segre.quadratic import FreeElement, QuadraticPresentation, element, hilbert, polynomial_ring
from twisted_segre.segre import (
    cross_validate,
    density_window_check,
    segre_component_model,
    segre_presentation,
    smash_truncation,
    zhang_twist_check,
)
from twisted_segre.twisting import Twist2x2, TwistData, TwistError, flip_seed


def flip_twist(n=2, m=2):
    return TwistData(flip_seed(n, m), polynomial_ring("uvw"[:n]), polynomial_ring("xyz"[:m]))


def commutative_segre_oracle(n, m):
    """Degree-two kernel of g_ij -> u_i x_j in the commutative polynomial ring, via sympy."""
    us = sympy.symbols(f"u0:{n}")
    xs = sympy.symbols(f"x0:{m}")
    gens = [(i, j) for j in range(m) for i in range(n)]
    monos = []
    cols = []
    for a, b in itertools.product(range(n * m), repeat=2):
        (i, j), (k, l) = gens[a], gens[b]
        mono = us[i] * us[k] * xs[j] * xs[l]
        if mono not in monos:
            monos.append(mono)
        cols.append(monos.index(mono))
    M = sympy.zeros(len(monos), (n * m) ** 2)
    for c, r in enumerate(cols):
        M[r, c] = 1
    basis = [[Fraction(int(x)) for x in v] for v in M.nullspace()]
    return Subspace((n * m) ** 2, basis)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_flip_gives_commutative_segre(n, m):
    pres = segre_presentation(flip_twist(n, m)).underlying
    assert pres.relations == commutative_segre_oracle(n, m)


def test_flip_quadric():
    pres = segre_presentation(flip_twist()).underlying
    comm = [{a + b: 1, b + a: -1} for a, b in itertools.combinations("XYZW", 2)]
    expected = QuadraticPresentation.from_strings("XYZW", comm + [{"XW": 1, "YZ": -1}])
    assert pres.relations == expected.relations
    assert [hilbert(pres, d) for d in range(5)] == [1, 4, 9, 16, 25]


def test_presentation_matches_listed_relations(instance):
    pres = segre_presentation(instance.twist()).underlying
    assert pres.gens.names == ("X", "Y", "Z", "W")
    assert pres.relations == instance.segre().relations
    assert pres.relations.dim == 7


def test_unipotent_coefficients(unipotent):
    R = segre_presentation(unipotent.twist()).underlying.relations
    for rel in ({"XY": 1, "YX": -1, "XX": -1}, {"ZX": 1, "XZ": -1}, {"XW": 1, "YZ": -1, "XZ": -1}):
        assert R.contains(element(GENS, rel).vector(4))


def test_invalid_twist_rejected():
    bad = Twist2x2.diagonal([[1, 0], [1, 1]], [[1, 0], [0, 2]])
    with pytest.raises(TwistError):
        segre_presentation(TwistData(bad.seed(), polynomial_ring("uv"), polynomial_ring("xy")))


def test_relation_dimension_count(generic):
    # R_A (x) U(x)U and V(x)V (x) R_B each have dimension 4 and overlap in one dimension
    pres = segre_presentation(generic.twist()).underlying
    assert pres.relations.dim == 1 * 4 + 4 * 1 - 1


def test_component_model_example(generic):
    model = segre_component_model(generic.twist(), 2)
    A = model.cacheA
    prod = model.multiply(1, model.generator(0, 0), 1, model.generator(1, 0))
    xx = model.cacheB.reduce(FreeElement.word((0, 0)))
    expected = {}
    for word, c in (((0, 0), generic.a21), ((0, 1), generic.a22)):
        for ia, x in A.reduce(FreeElement.word(word)).items():
            for ib, y in xx.items():
                expected[(ia, ib)] = expected.get((ia, ib), 0) + c * x * y
    assert prod == {k: v for k, v in expected.items() if v}


def test_component_model_flip_is_plain():
    model = segre_component_model(flip_twist(), 2)
    prod = model.multiply(1, model.generator(1, 0), 1, model.generator(0, 1))
    other = model.multiply(1, model.generator(0, 1), 1, model.generator(1, 0))
    assert prod == other


@pytest.mark.parametrize("name", ["flip", "unipotent", "generic"])
def test_cross_validate(name, unipotent, generic):
    twist = {"flip": flip_twist(), "unipotent": unipotent.twist(), "generic": generic.twist()}[name]
    report = cross_validate(twist, 6)
    assert report["passed"]
    assert [r["model"] for r in report["degrees"]] == [(n + 1) ** 2 for n in range(7)]


def test_cross_validate_detects_dropped_relation(unipotent):
    corrupt = QuadraticPresentation(GENS, unipotent.segre_relations()[:6])
    report = cross_validate(unipotent.twist(), 4, presentation=corrupt)
    assert not report["passed"]
    ce = report["counterexample"]
    assert ce["degree"] == 2 and ce["presentation"] == 10 and ce["model"] == 9


def test_cross_validate_detects_wrong_relation(unipotent):
    rels = unipotent.segre_relations()[:6] + [element(GENS, {"XW": 1, "YZ": -1})]
    report = cross_validate(unipotent.twist(), 3, presentation=QuadraticPresentation(GENS, rels))
    assert not report["passed"]
    assert report["counterexample"]["reason"] == "relation not killed"


def test_cross_validate_random_twists():
    rng = random.Random(2)
    for _ in range(5):
        assert cross_validate(random_instance(rng).twist(), 4)["passed"]


def test_smash_dims(generic):
    trunc = smash_truncation(generic.twist(), 2, 2)
    for i in range(-2, 3):
        for j in range(3):
            expected = (i + j + 1) * (j + 1) if i + j >= 0 else 0
            assert trunc.component_dim(i, j) == expected
    with pytest.raises(ValueError):
        smash_truncation(generic.twist(), -1, 2)


def test_smash_mixed_product(generic):
    trunc = smash_truncation(generic.twist(), 2, 2)
    A = trunc.cacheA

    def lift(terms, ib):
        out = {}
        for word, c in terms:
            for ia, x in A.reduce(FreeElement.word(word)).items():
                out[(ia, ib)] = out.get((ia, ib), 0) + c * x
        return {k: v for k, v in out.items() if v}

    S = generic.C.transpose()
    for c in range(2):
        # the unit of B passes over c untouched: (u (x) 1)(c (x) y) = uc (x) y
        prod = trunc.multiply((1, 0), {(0, 0): ONE}, (0, 1), {(c, 1): ONE})
        assert prod == lift([((0, c), ONE)], 1)
        # x passes over c through sigma_11: (u (x) x)(c (x) 1) = u sigma_11(c) (x) x
        prod = trunc.multiply((0, 1), {(0, 0): ONE}, (1, 0), {(c, 0): ONE})
        assert prod == lift([((0, k), S[k, c]) for k in range(2)], 0)


def _random_component(trunc, rng, i, j):
    return {b: Fraction(rng.randint(-2, 2)) for b in trunc.component_basis(i, j) if rng.random() < 0.7}


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_smash_associative(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    trunc = smash_truncation(inst.twist(), 2, 2)
    bis = [(rng.randint(-1, 1), rng.randint(0, 1)) for _ in range(3)]
    bis = [(max(i, -j), j) for i, j in bis]
    x, y, z = (_random_component(trunc, rng, *b) for b in bis)
    (a, b), (c, d), (e, f) = bis
    left = trunc.multiply((a + c, b + d), trunc.multiply(bis[0], x, bis[1], y), bis[2], z)
    right = trunc.multiply(bis[0], x, (c + e, d + f), trunc.multiply(bis[1], y, bis[2], z))
    assert left == right


def test_smash_zero_row_matches_segre_model(generic):
    trunc = smash_truncation(generic.twist(), 1, 2)
    model = segre_component_model(generic.twist(), 2)
    rng = random.Random(1)
    for _ in range(5):
        x = _random_component(trunc, rng, 0, 1)
        y = _random_component(trunc, rng, 0, 1)
        assert trunc.multiply((0, 1), x, (0, 1), y) == model.multiply(1, x, 1, y)


@pytest.mark.parametrize("which", ["flip", "unipotent"])
def test_density_window(which, unipotent):
    twist = flip_twist() if which == "flip" else unipotent.twist()
    report = density_window_check(smash_truncation(twist, 1, 4), 1, -1)
    assert report["covered"] == [1, 2, 3, 4]
    assert report["defects"] == [{"T": 0, "dim": 1}]
    assert report["finite_defect"] and not report["full_coverage"]


def test_density_positive_degrees(unipotent):
    report = density_window_check(smash_truncation(unipotent.twist(), 2, 3), 1, 1)
    assert report["full_coverage"] and report["defect_dim"] == 0
    with pytest.raises(ValueError):
        density_window_check(smash_truncation(unipotent.twist(), 1, 1), 1, -2)


def test_segre_square_of_degree_one(unipotent):
    # S_1 S_1 = S_2 in the twisted Segre product itself
    model = segre_component_model(unipotent.twist(), 2)
    vecs = []
    for a in range(4):
        for b in range(4):
            ga = model.generator(a % 2, a // 2)
            gb = model.generator(b % 2, b // 2)
            prod = model.multiply(1, ga, 1, gb)
            vecs.append({ia * 3 + ib: v for (ia, ib), v in prod.items()})
    assert Subspace.from_sparse(9, vecs).dim == model.dim(2) == 9


def test_zhang_examples():
    def check(C, Q):
        t = Twist2x2.diagonal(C, Q)
        return zhang_twist_check(TwistData(t.seed(), polynomial_ring("uv"), polynomial_ring("xy"), blocks=t))

    assert check([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    assert check([[2, 0], [0, 1]], [[2, 0], [0, 1]])
    assert not check([[1, 0], [0, 2]], [[3, 0], [0, 1]])
    with pytest.raises(TwistError):
        check([[1, 0], [1, 1]], [[1, 0], [1, 1]])


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_zhang_dichotomy(a11, a22, b11, b22):
    inst = DiagonalInstance(Fraction(a11), Fraction(0), Fraction(a22), Fraction(b11), Fraction(0), Fraction(b22))
    assert zhang_twist_check(inst.twist()) == (a11 * b22 == a22 * b11)
