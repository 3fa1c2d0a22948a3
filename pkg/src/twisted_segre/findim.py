"""Finite-dimensional unital algebras given by structure constants.

``constants[i][j]`` is the coordinate vector of ``e_i e_j``.  All scalars are
rational, so the trace-form description of the radical applies.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import ONE, ZERO, Fraction, Matrix, Subspace, as_fraction, kernel, solve

__all__ = [
    "FinDimAlgebra",
    "NotSemisimpleError",
    "WedderburnType",
    "radical",
    "center",
    "is_semisimple",
    "wedderburn_type",
    "verify_explicit_iso",
    "matrix_algebra",
    "product_algebra",
]

SEED_ENV = "SEGRE_TWIST_SEED"


class NotSemisimpleError(ValueError):
    pass


def _vec(v, n: int) -> tuple[Fraction, ...]:
    v = tuple(as_fraction(x) for x in v)
    if len(v) != n:
        raise ValueError(f"expected a vector of length {n}")
    return v


class FinDimAlgebra:
    def __init__(self, dim: int, unit: Sequence, constants: Sequence[Sequence[Sequence]]):
        self.dim = dim
        self.unit = _vec(unit, dim)
        if len(constants) != dim or any(len(row) != dim for row in constants):
            raise ValueError("structure constants must be a dim x dim table of vectors")
        self.constants = tuple(tuple(_vec(v, dim) for v in row) for row in constants)

    def __repr__(self):
        return f"FinDimAlgebra(dim={self.dim})"

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(ONE if k == i else ZERO for k in range(self.dim))

    def multiply(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        out = [ZERO] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.constants[i][j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def left_matrix(self, x: Sequence) -> Matrix:
        cols = [self.multiply(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix(cols).transpose()

    def right_matrix(self, x: Sequence) -> Matrix:
        cols = [self.multiply(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix(cols).transpose()

    def is_associative(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                ij = self.constants[i][j]
                for k in range(n):
                    left = self.multiply(ij, self.basis_vector(k))
                    right = self.multiply(self.basis_vector(i), self.constants[j][k])
                    if left != right:
                        return False
        return True

    def is_unital(self) -> bool:
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                return False
        return True

    def subalgebra_span(self, vectors: Sequence[Sequence]) -> Subspace:
        return Subspace(self.dim, vectors)

    def to_json(self) -> dict:
        from .io import algebra_to_json

        return algebra_to_json(self)


def radical(alg: FinDimAlgebra) -> Subspace:
    """Kernel of the trace form ``(a, b) -> tr(L_a L_b)``."""
    Ls = [alg.left_matrix(alg.basis_vector(i)) for i in range(alg.dim)]
    gram = Matrix([[(Ls[i] @ Ls[j]).trace() for j in range(alg.dim)] for i in range(alg.dim)])
    return kernel(gram)


def is_semisimple(alg: FinDimAlgebra) -> bool:
    return radical(alg).dim == 0


def center(alg: FinDimAlgebra) -> Subspace:
    """Solve ``a e_i = e_i a`` for all basis elements."""
    n = alg.dim
    rows = []
    for i in range(n):
        # a -> a e_i - e_i a
        comm = alg.right_matrix(alg.basis_vector(i)) - alg.left_matrix(alg.basis_vector(i))
        rows.extend(comm.rows)
    return kernel(Matrix(rows, n))


@dataclass
class WedderburnType:
    """Block data of a semisimple algebra.

    ``blocks`` lists ``d`` for every simple factor whose center is the rationals
    and whose dimension is ``d^2``.  ``obstructions`` records factors that could
    not be read as matrix blocks over the rationals.
    """

    blocks: list[int] = field(default_factory=list)
    block_dims: list[int] = field(default_factory=list)
    split: list[bool | None] = field(default_factory=list)
    obstructions: list[dict] = field(default_factory=list)

    @property
    def split_over_rationals(self) -> bool:
        return not self.obstructions and all(s is True for s in self.split)

    def as_dict(self) -> dict:
        return {
            "blocks": sorted(self.blocks),
            "block_dims": sorted(self.block_dims),
            "split_over_rationals": self.split_over_rationals,
            "obstructions": self.obstructions,
        }


def _rng() -> random.Random:
    return random.Random(int(os.environ.get(SEED_ENV, "0")))


def _min_poly(alg: FinDimAlgebra, a: Sequence, unit: Sequence):
    """Minimal polynomial of ``a`` inside the subalgebra with identity ``unit``, over QQ."""
    import sympy

    x = sympy.Symbol("x")
    vecs = [tuple(unit)]
    while True:
        nxt = alg.multiply(vecs[-1], a)
        sol = solve(Matrix(vecs).transpose(), nxt)
        if sol is not None:
            coeffs = [sympy.Rational(c.numerator, c.denominator) for c in sol]
            expr = x ** len(vecs) - sum(c * x**i for i, c in enumerate(coeffs))
            return sympy.Poly(expr, x, domain="QQ")
        vecs.append(nxt)


def _poly_eval(alg: FinDimAlgebra, poly, a: Sequence) -> tuple[Fraction, ...]:
    coeffs = [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]
    out = tuple(ZERO for _ in range(alg.dim))
    for c in coeffs:  # Horner
        out = alg.multiply(out, a)
        out = tuple(o + c * u for o, u in zip(out, alg.unit))
    return out


def _central_idempotents(alg: FinDimAlgebra, Z: Subspace, attempts: int = 20):
    """Primitive central idempotents from a generic central element."""
    import sympy

    rng = _rng()
    zb = Z.vectors()
    z = len(zb)
    for _ in range(attempts):
        coeffs = [Fraction(rng.randint(-9, 9)) for _ in range(z)]
        c = tuple(sum((k * b[i] for k, b in zip(coeffs, zb)), ZERO) for i in range(alg.dim))
        mp = _min_poly(alg, c, alg.unit)
        if mp.degree() != z:
            continue
        factors = [f for f, _ in sympy.factor_list(mp.as_expr(), mp.gens[0])[1]]
        x = mp.gens[0]
        idems = []
        for f in factors:
            fp = sympy.Poly(f, x, domain="QQ")
            q = sympy.Poly(mp.as_expr(), x, domain="QQ").exquo(fp)
            inv = sympy.invert(q.as_expr(), fp.as_expr(), x)
            e = sympy.Poly(sympy.rem(sympy.expand(q.as_expr() * inv), mp.as_expr(), x), x, domain="QQ")
            idems.append((_poly_eval(alg, e, c), fp.degree()))
        return idems
    raise ArithmeticError("no generic central element found; try another SEGRE_TWIST_SEED")


def _has_zero_divisor(alg: FinDimAlgebra, block: list[tuple], e: Sequence, rng: random.Random, tries: int = 12) -> bool:
    """Look for an element of the block whose minimal polynomial is reducible."""
    import sympy

    for _ in range(tries):
        coeffs = [rng.randint(-5, 5) for _ in block]
        a = tuple(sum((k * b[i] for k, b in zip(coeffs, block)), ZERO) for i in range(alg.dim))
        if not any(a):
            continue
        factors = sympy.factor_list(_min_poly(alg, a, e).as_expr())[1]
        if len(factors) > 1 or factors[0][1] > 1:
            return True
    return False


def wedderburn_type(alg: FinDimAlgebra) -> WedderburnType:
    if not is_semisimple(alg):
        raise NotSemisimpleError("algebra has a nonzero radical")
    Z = center(alg)
    result = WedderburnType()
    rng = _rng()
    for e, zdeg in _central_idempotents(alg, Z):
        block = Subspace(alg.dim, alg.left_matrix(e).transpose().rows).vectors()
        bdim = len(block)
        result.block_dims.append(bdim)
        d = math.isqrt(bdim)
        if zdeg != 1:
            result.obstructions.append({"block_dim": bdim, "reason": f"center of degree {zdeg} over the rationals"})
            continue
        if d * d != bdim:
            result.obstructions.append({"block_dim": bdim, "reason": "dimension is not a square"})
            continue
        result.blocks.append(d)
        if d == 1:
            result.split.append(True)
        elif _has_zero_divisor(alg, block, e, rng):
            # central simple of prime degree with a zero divisor is a full matrix algebra
            result.split.append(True if _is_prime(d) else None)
        else:
            result.split.append(None)
            result.obstructions.append({"block_dim": bdim, "reason": "no zero divisor found; possibly a division algebra"})
    result.blocks.sort()
    result.block_dims.sort()
    return result


def _is_prime(d: int) -> bool:
    return d > 1 and all(d % p for p in range(2, math.isqrt(d) + 1))


def _flatten(images) -> tuple[Fraction, ...]:
    out = []
    for m in images:
        m = m if isinstance(m, Matrix) else Matrix(m)
        out.extend(m.entries)
    return tuple(out)


def _shapes(images) -> list[tuple[int, int]]:
    return [(m if isinstance(m, Matrix) else Matrix(m)).shape for m in images]


def verify_explicit_iso(alg: FinDimAlgebra, assignment) -> bool:
    """Check that a map onto a product of matrix algebras is an isomorphism.

    ``assignment`` is a sequence of ``(vector, images)`` with ``vector`` the
    coordinates of an element of ``alg`` and ``images`` a tuple of square
    matrices.  The vectors must span ``alg``.
    """
    assignment = list(assignment)
    if not assignment:
        raise ValueError("empty assignment")
    shapes = _shapes(assignment[0][1])
    if any(r != c for r, c in shapes):
        raise ValueError("images must be square matrices")
    D = sum(r * r for r, _ in shapes)
    V = Matrix([_vec(v, alg.dim) for v, _ in assignment])
    if V.rank() != alg.dim:
        raise ValueError("assignment is not defined on a spanning set")
    imgs = []
    for _, im in assignment:
        if _shapes(im) != shapes:
            raise ValueError("inconsistent image shapes")
        imgs.append(_flatten(im))
    # linear map L with L(v_k) = img_k: solve V^T columns
    VT = V.transpose()
    L_cols = []
    for i in range(alg.dim):
        # coordinates of e_i in terms of the assignment vectors
        lam = solve(VT, alg.basis_vector(i))
        L_cols.append(tuple(sum((l * im[t] for l, im in zip(lam, imgs)), ZERO) for t in range(D)))
    # consistency on dependent spanning sets
    for (v, _), img in zip(assignment, imgs):
        image = tuple(sum((x * col[t] for x, col in zip(_vec(v, alg.dim), L_cols)), ZERO) for t in range(D))
        if image != img:
            return False
    if D != alg.dim or Matrix(L_cols).rank() != alg.dim:
        return False

    def unflatten(flat):
        out, pos = [], 0
        for r, _ in shapes:
            out.append(Matrix([flat[pos + i * r: pos + (i + 1) * r] for i in range(r)]))
            pos += r * r
        return out

    def apply(vec):
        return tuple(sum((x * col[t] for x, col in zip(vec, L_cols)), ZERO) for t in range(D))

    mats = [unflatten(c) for c in L_cols]
    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs = apply(alg.constants[i][j])
            rhs = _flatten([a @ b for a, b in zip(mats[i], mats[j])])
            if lhs != rhs:
                return False
    return True


def matrix_algebra(d: int) -> FinDimAlgebra:
    """``M_d`` on matrix units ``E_ab`` ordered row-major."""
    n = d * d
    consts = []
    for i in range(n):
        a, b = divmod(i, d)
        row = []
        for j in range(n):
            c, e = divmod(j, d)
            v = [ZERO] * n
            if b == c:
                v[a * d + e] = ONE
            row.append(v)
        consts.append(row)
    unit = [ONE if i // d == i % d else ZERO for i in range(n)]
    return FinDimAlgebra(n, unit, consts)


def product_algebra(*algs: FinDimAlgebra) -> FinDimAlgebra:
    n = sum(a.dim for a in algs)
    consts = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    unit = []
    off = 0
    for a in algs:
        unit.extend(a.unit)
        for i in range(a.dim):
            for j in range(a.dim):
                for k, c in enumerate(a.constants[i][j]):
                    consts[off + i][off + j][off + k] = c
        off += a.dim
    return FinDimAlgebra(n, unit, consts)
