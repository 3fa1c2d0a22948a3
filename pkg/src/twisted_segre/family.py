"""Closed-form data for diagonal twists of ``k[u,v]`` and ``k[x,y]``.

A diagonal twist is fixed by lower-triangular ``C = [[a11, 0], [a21, a22]]``
and ``Q = [[b11, 0], [b21, b22]]`` with ``CQ = QC``, i.e.
``a11 b21 + a21 b22 = a21 b11 + a22 b21``.  Everything below is written in the
generators ``X = u x, Y = v x, Z = u y, W = v y``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .linalg import Fraction, Matrix, as_fraction
from .quadratic import GeneratorSet, QuadraticPresentation, element, polynomial_ring
from .twisting import Twist2x2, TwistData

__all__ = ["DiagonalInstance", "random_instance", "RHO", "T_TABLE", "GENS"]

GENS = GeneratorSet(("X", "Y", "Z", "W"))


@dataclass(frozen=True)
class DiagonalInstance:
    a11: Fraction
    a21: Fraction
    a22: Fraction
    b11: Fraction
    b21: Fraction
    b22: Fraction

    def __post_init__(self):
        for name in ("a11", "a21", "a22", "b11", "b21", "b22"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (self.a11 and self.a22 and self.b11 and self.b22):
            raise ValueError("diagonal entries must be nonzero")
        if self.a11 * self.b21 + self.a21 * self.b22 != self.a21 * self.b11 + self.a22 * self.b21:
            raise ValueError("C and Q do not commute")

    @classmethod
    def from_matrices(cls, C, Q) -> "DiagonalInstance":
        C, Q = Matrix(C), Matrix(Q)
        if not (C.is_lower_triangular() and Q.is_lower_triangular()):
            raise ValueError("C and Q must be lower triangular")
        return cls(C[0, 0], C[1, 0], C[1, 1], Q[0, 0], Q[1, 0], Q[1, 1])

    @property
    def C(self) -> Matrix:
        return Matrix([[self.a11, 0], [self.a21, self.a22]])

    @property
    def Q(self) -> Matrix:
        return Matrix([[self.b11, 0], [self.b21, self.b22]])

    @property
    def k(self) -> Fraction:
        return self.a11 * self.b21 + self.a21 * self.b22

    def blocks(self) -> Twist2x2:
        return Twist2x2.diagonal(self.C, self.Q)

    def twist(self) -> TwistData:
        t = self.blocks()
        return TwistData(t.seed(), polynomial_ring("uv"), polynomial_ring("xy"), blocks=t)

    def _el(self, coeffs):
        return element(GENS, coeffs)

    def segre_relations(self):
        """The seven quadratic relations of the twisted Segre product."""
        a11, a21, a22, b11, b21, b22 = self.a11, self.a21, self.a22, self.b11, self.b21, self.b22
        terms = [
            {"XY": a11, "YX": -a22, "XX": -a21},
            {"ZX": a11, "XZ": -b11},
            {"ZY": a11, "XZ": -b21, "YZ": -b22},
            {"WX": a11 * a22, "XZ": a21 * b11, "XW": -a11 * b11},
            {"WY": a11 * a22, "XZ": a21 * b21, "YZ": a21 * b22, "XW": -a11 * b21, "YW": -a11 * b22},
            {"ZW": b11, "WZ": -b22, "ZZ": -b21},
            {"XW": a11, "YZ": -a22, "XZ": -a21},
        ]
        return [self._el(_merge(s)) for s in terms]

    def segre(self) -> QuadraticPresentation:
        return QuadraticPresentation(GENS, self.segre_relations())

    def regular_base(self) -> QuadraticPresentation:
        """The four-dimensional algebra cut out by the first six relations."""
        return QuadraticPresentation(GENS, self.segre_relations()[:6])

    def f7(self):
        return self.segre_relations()[6]

    def dual_relations(self):
        a11, a21, a22, b11, b21, b22 = self.a11, self.a21, self.a22, self.b11, self.b21, self.b22
        terms = [
            {"YX": a11, "XY": a22},
            {"XZ": a11, "XW": a21, "ZX": b11, "ZY": b21},
            {"WY": b22, "YW": a22},
            {"ZW": b22, "WZ": b11},
            {"XX": a11, "XY": a21},
            {"YY": 1},
            {"ZZ": b11, "ZW": b21},
            {"WW": 1},
            {"ZY": b22, "YW": a21, "YZ": a11, "XW": a22, "WX": b11, "WY": b21},
        ]
        return [self._el(_merge(s)) for s in terms]

    def dual(self) -> QuadraticPresentation:
        return QuadraticPresentation(GENS, self.dual_relations())

    def w(self):
        """Degree-two normal element of the dual."""
        return self._el({"ZY": self.b22, "YW": self.a21, "YZ": self.a11})

    def nu(self) -> Matrix:
        """Normalizing automorphism of ``w`` on generators; column k is the image of generator k."""
        a11, a22, b11, b22, k = self.a11, self.a22, self.b11, self.b22, self.k
        cols = [
            [a11 * b11 / (a11 * a22), k / (a11 * a22), 0, 0],
            [0, b22 / a11, 0, 0],
            [0, 0, a11 * b11 / (b11 * b22), k / (b11 * b22)],
            [0, 0, 0, a22 / b11],
        ]
        return Matrix(cols).transpose()

    def f7_left_action(self) -> Matrix:
        """``f7 * g = mu(g) * f7`` on generators, column k = ``mu`` of generator k."""
        a11, a22, b11, b22, k = self.a11, self.a22, self.b11, self.b22, self.k
        cols = [
            [b11 / a22, 0, 0, 0],
            [k / (a11 * a22), a22 * b22 / (a11 * a22), 0, 0],
            [0, 0, a11 / b22, 0],
            [0, 0, k / (b11 * b22), a22 * b22 / (b11 * b22)],
        ]
        return Matrix(cols).transpose()

    def t_elements(self):
        """``(level, numerator)`` pairs; the element is ``numerator * w^-level``."""
        a11, a21, a22, b11, b21, b22 = self.a11, self.a21, self.a22, self.b11, self.b21, self.b22
        terms = [
            (1, {"YW": a22}),
            (1, {"YX": a11}),
            (1, {"YZ": a11, "YW": a21}),
            (1, {"WX": b11, "WY": b21}),
            (1, {"WZ": b11}),
            (1, {"XZ": a11, "XW": a21}),
            (2, {"YXWZ": a11 * a11 * a22 / b22}),
        ]
        return [(lvl, self._el(c)) for lvl, c in terms]


def _merge(terms: dict) -> dict:
    return {w: c for w, c in terms.items() if c}


# images in M2 x M2 of 1, t1, ..., t7
def _pair(a, b):
    return (Matrix(a), Matrix(b))


RHO = [
    _pair([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    _pair([[0, 1], [0, 0]], [[0, 0], [0, 0]]),
    _pair([[0, 0], [0, 0]], [[0, 1], [0, 0]]),
    _pair([[1, 0], [0, 0]], [[1, 0], [0, 0]]),
    _pair([[-1, 0], [0, 0]], [[0, 0], [0, -1]]),
    _pair([[0, 0], [0, 0]], [[0, 0], [-1, 0]]),
    _pair([[0, 0], [-1, 0]], [[0, 0], [0, 0]]),
    _pair([[0, 0], [0, 0]], [[-1, 0], [0, 0]]),
]

# product table over (1, t1, ..., t7): TABLE[i][j] = coefficients of e_i * e_j
_T = {"1": 0, "t1": 1, "t2": 2, "t3": 3, "t4": 4, "t5": 5, "t6": 6, "t7": 7}


def _combo(text: str) -> tuple[int, ...]:
    out = [0] * 8
    if text == "0":
        return tuple(out)
    for term in text.replace("-", "+-").split("+"):
        if not term:
            continue
        sign = -1 if term.startswith("-") else 1
        out[_T[term.lstrip("-")]] += sign
    return tuple(out)


_TABLE_TEXT = [
    ["1", "t1", "t2", "t3", "t4", "t5", "t6", "t7"],
    ["t1", "0", "0", "0", "0", "0", "-t3-t7", "0"],
    ["t2", "0", "0", "0", "-t2", "t7", "0", "0"],
    ["t3", "t1", "t2", "t3", "-t3-t7", "0", "0", "t7"],
    ["t4", "-t1", "0", "-t3-t7", "-t4", "-t5", "0", "0"],
    ["t5", "0", "t3+t4+t7", "t5", "0", "0", "0", "-t5"],
    ["t6", "-1-t4-t7", "0", "t6", "-t6", "0", "0", "0"],
    ["t7", "0", "-t2", "t7", "0", "0", "0", "-t7"],
]

T_TABLE = [[_combo(x) for x in row] for row in _TABLE_TEXT]


def random_instance(rng: random.Random, lo: int = -5, hi: int = 5) -> DiagonalInstance:
    """Random rational lower-triangular commuting pair."""

    def nz():
        while True:
            x = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
            if x:
                return x

    a11, a22, b11, b22 = nz(), nz(), nz(), nz()
    a21 = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
    if a11 != a22:
        b21 = a21 * (b11 - b22) / (a11 - a22)
    else:
        if a21 and b11 != b22:
            a21 = Fraction(0)
        b21 = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
    return DiagonalInstance(a11, a21, a22, b11, b21, b22)
