import random
import warnings
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import oracle_hilbert, rewrite_hilbert

from twisted_segre.linalg import Fraction, Subspace
from twisted_segre.quadratic import (
    DegenerateRelationWarning,
    DegreeOverflowError,
    FreeElement,
    QuadraticPresentation,
    add_relation,
    free_algebra,
    hilbert,
    koszul_series_check,
    multiply,
    normal_form,
    polynomial_ring,
    presentations_equal,
    quadratic_dual,
    reduce_element,
    relation_space,
)

coef = st.integers(-3, 3)


def random_presentation(n, rng, max_rels=3):
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        rels.append({(a, b): rng.randint(-2, 2) for a in range(n) for b in range(n)})
    return rels


def build(n, rels):
    names = "xyzw"[:n]
    vecs = [{a * n + b: Fraction(c) for (a, b), c in r.items() if c} for r in rels]
    return QuadraticPresentation(list(names), Subspace.from_sparse(n * n, [v for v in vecs if v]))


def test_relation_space_examples():
    P = polynomial_ring("xy")
    assert relation_space(P, 2).dim == 1
    assert relation_space(P, 3).dim == 4
    assert relation_space(free_algebra("xy"), 4).dim == 0
    with pytest.raises(ValueError):
        relation_space(P, 1)


def test_hilbert_examples():
    assert [hilbert(polynomial_ring("xy"), d) for d in range(5)] == [1, 2, 3, 4, 5]
    assert [hilbert(polynomial_ring("xyz"), d) for d in range(5)] == [comb(d + 2, 2) for d in range(5)]
    assert [hilbert(free_algebra("xy"), d) for d in range(5)] == [1, 2, 4, 8, 16]


def test_hilbert_matches_relation_space():
    P = polynomial_ring("xyz")
    for d in range(2, 5):
        assert hilbert(P, d) + relation_space(P, d).dim == 3**d


def test_rewriting_oracle_on_polynomial_rings():
    for n in (2, 3):
        rules = {(j, i) for i in range(n) for j in range(i + 1, n)}
        for d in range(5):
            assert hilbert(polynomial_ring("xyz"[:n]), d) == rewrite_hilbert(n, rules, d)


def test_normal_form_examples():
    P = polynomial_ring("xy")
    cache = P.degree_cache(3)
    assert normal_form(P, cache, P.element({"xy": 1, "yx": -1})) == {}
    assert reduce_element(P, P.element({"yx": 1})) == P.element({"xy": 1})
    F = free_algebra("xy")
    fc = F.degree_cache(3)
    images = {tuple(sorted(normal_form(F, fc, FreeElement.word(w)).items())) for w in fc.normal_words(3)}
    assert len(images) == 8


def test_multiply_examples(generic):
    P = polynomial_ring("xy")
    x, y = P.element({"x": 1}), P.element({"y": 1})
    assert multiply(P, x, y) == multiply(P, y, x)
    D = generic.dual()
    Y = D.element({"Y": 1})
    assert multiply(D, Y, Y) == FreeElement(2, {})
    S = generic.regular_base()
    zx = multiply(S, S.element({"Z": 1}), S.element({"X": 1}))
    xz = multiply(S, S.element({"X": 1}), S.element({"Z": 1}))
    assert zx == xz.scale(generic.b11 / generic.a11)


def test_degree_overflow():
    cache = polynomial_ring("xy").degree_cache(3)
    with pytest.raises(DegreeOverflowError):
        cache.dim(4)


def test_dual_examples():
    D = quadratic_dual(polynomial_ring("xy"))
    assert D.gens.names == ("x*", "y*")
    expected = QuadraticPresentation.from_strings(["x*", "y*"], [{"x* x*": 1}, {"y* y*": 1}, {"x* y*": 1, "y* x*": 1}])
    assert D.relations == expected.relations
    assert [hilbert(D, d) for d in range(4)] == [1, 2, 1, 0]
    Fd = quadratic_dual(free_algebra("xy"))
    assert Fd.relations == Subspace.full(4)
    assert quadratic_dual(D).gens.names == ("x", "y")


def test_koszul_examples():
    assert koszul_series_check(polynomial_ring("xy"), 6)
    assert koszul_series_check(free_algebra("xy"), 6)
    assert koszul_series_check(polynomial_ring("xyz"), 6)


def test_add_relation_examples(generic):
    F = free_algebra("xy")
    P = add_relation(F, F.element({"xy": 1, "yx": -1}))
    assert presentations_equal(P, polynomial_ring("xy"))
    S = generic.regular_base()
    assert add_relation(S, generic.f7()).relations == generic.segre().relations
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        same = add_relation(P, P.element({"yx": 2, "xy": -2}))
    assert same is P
    assert any(issubclass(w.category, DegenerateRelationWarning) for w in caught)


def test_presentations_equal_identification():
    P = polynomial_ring("xy")
    assert presentations_equal(P, P)
    Q = QuadraticPresentation.from_strings(["a", "b"], [{"ba": 1, "ab": -1}])
    assert presentations_equal(P, Q, {"x": "b", "y": "a"})
    with pytest.raises(ValueError):
        presentations_equal(P, Q, {"x": "a", "y": "a"})


@given(st.integers(0, 10_000))
def test_dual_is_involution(seed):
    rng = random.Random(seed)
    P = build(2, random_presentation(2, rng))
    D = quadratic_dual(P)
    assert quadratic_dual(D).relations == P.relations
    assert D.relations.dim == 4 - P.relations.dim


@given(st.integers(0, 10_000))
def test_hilbert_monotone_under_relations(seed):
    rng = random.Random(seed)
    rels = random_presentation(2, rng)
    P = build(2, rels)
    Q = build(2, rels + random_presentation(2, rng, 1))
    for d in range(5):
        assert hilbert(Q, d) <= hilbert(P, d)


@given(st.integers(0, 10_000))
def test_multiply_associative(seed):
    rng = random.Random(seed)
    P = build(3, random_presentation(3, rng, 2))
    cache = P.degree_cache(5)

    def rand_el(d):
        words = cache.normal_words(d)
        return FreeElement(d, {w: Fraction(rng.randint(-2, 2)) for w in words if rng.random() < 0.6})

    x, y, z = rand_el(1), rand_el(2), rand_el(1)
    assert multiply(P, multiply(P, x, y, cache), z, cache) == multiply(P, x, multiply(P, y, z, cache), cache)


def test_hilbert_against_brute_force_oracle():
    rng = random.Random(11)
    for _ in range(10):
        rels = random_presentation(2, rng)
        P = build(2, rels)
        for d in range(5):
            assert hilbert(P, d) == oracle_hilbert(2, rels, d)


def test_hilbert_of_families(instance):
    S = instance.regular_base()
    assert [hilbert(S, d) for d in range(5)] == [comb(d + 3, 3) for d in range(5)]
    assert [hilbert(instance.segre(), d) for d in range(5)] == [(d + 1) ** 2 for d in range(5)]
