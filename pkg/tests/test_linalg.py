import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from twisted_segre.linalg import (
    DimensionError,
    Fraction,
    Matrix,
    SingularMatrixError,
    Subspace,
    annihilator,
    as_fraction,
    format_scalar,
    kernel,
    parse_scalar,
    rref,
    solve,
)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def subspaces(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), max_size=n).map(lambda rows: Subspace(n, rows))


def test_rref_examples():
    assert rref(Matrix.identity(2)) == (Matrix.identity(2), 2)
    assert rref(Matrix([[1, 2], [2, 4]])) == (Matrix([[1, 2], [0, 0]]), 1)
    assert rref(Matrix([[0, 1], [1, 0]])) == (Matrix.identity(2), 2)


def test_kernel_examples():
    assert kernel(Matrix.identity(3)).dim == 0
    assert kernel(Matrix.zeros(2, 3)) == Subspace.full(3)
    assert kernel(Matrix([[1, 1]])) == Subspace(2, [[1, -1]])


def test_subspace_examples():
    e1, e2 = Subspace(2, [[1, 0]]), Subspace(2, [[0, 1]])
    assert e1 + e2 == Subspace.full(2)
    assert Subspace(2, [[1, 1]]).intersect(e1).dim == 0
    assert Subspace(2, [[1, 0], [0, 1]]).equal(Subspace(2, [[1, 1], [1, -1]]))
    assert e1.contains([3, 0]) and not e1.contains([0, 1])
    with pytest.raises(DimensionError):
        e1 + Subspace.full(3)


def test_annihilator_examples():
    assert annihilator(Subspace.zero(4)) == Subspace.full(4)
    assert annihilator(Subspace.full(3)).dim == 0
    assert annihilator(Subspace(2, [[1, -1]])) == Subspace(2, [[1, 1]])


def test_scalars():
    assert parse_scalar("3/6") == Fraction(1, 2)
    assert parse_scalar("-4") == Fraction(-4)
    assert format_scalar(Fraction(6, 3)) == "2"
    assert format_scalar(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(ValueError):
        parse_scalar("1/0")
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_inverse_and_solve():
    m = Matrix([[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(2)
    assert solve(m, [3, 2]) == (Fraction(1), Fraction(1))
    assert solve(Matrix([[1, 1], [1, 1]]), [1, 2]) is None
    with pytest.raises(SingularMatrixError):
        Matrix([[1, 2], [2, 4]]).inverse()


@given(matrices())
def test_rank_matches_sympy(rows):
    m = Matrix(rows)
    R, rank = rref(m)
    assert rank == sympy.Matrix(rows).rank()
    assert R == Matrix(sympy.Matrix(rows).rref()[0].tolist())


@given(matrices())
def test_rank_nullity(rows):
    m = Matrix(rows)
    K = kernel(m)
    assert K.dim + m.rank() == m.ncols
    for v in K.vectors():
        assert not any(m @ v)


@given(subspaces(4), subspaces(4))
def test_modular_law(a, b):
    assert (a + b).dim + a.intersect(b).dim == a.dim + b.dim
    assert a <= a + b and a.intersect(b) <= a


@given(subspaces(4), subspaces(4))
def test_annihilator_involution_and_order(a, b):
    assert a.annihilator().annihilator() == a
    assert a.annihilator().dim == 4 - a.dim
    assert (a <= b) == (b.annihilator() <= a.annihilator())


@given(subspaces(3))
def test_canonical_basis_is_rref(a):
    piv = a.pivots
    assert list(piv) == sorted(set(piv))
    assert Subspace(3, a.vectors()) == a
