"""The degree-zero part of ``A^![w^-1]`` as a finite-dimensional algebra.

Once right multiplication by ``w`` is bijective ``A_{2i} -> A_{2i+2}`` for
``i >= i0``, every class ``a w^-i`` has a unique representative ``a' w^-i0``
with ``a'`` in ``A_{2 i0}``.  Products follow ``(a w^-i)(b w^-j) = a nu^i(b) w^-(i+j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .findim import FinDimAlgebra
from .linalg import ONE, ZERO, Fraction, Matrix, solve
from .normality import NormalCertificate, _right_mul_element, automorphism_matrix, extend_automorphism
from .quadratic import FreeElement, QuadraticPresentation

__all__ = [
    "StabilizationError",
    "StabilizationData",
    "CliffordAlgebra",
    "stabilize",
    "clifford_algebra",
    "evaluate_t_elements",
    "t_element_assignment",
]


class StabilizationError(ValueError):
    def __init__(self, message: str, dims=None):
        super().__init__(message)
        self.dims = dims


@dataclass(frozen=True)
class StabilizationData:
    i0: int
    dims: tuple[int, ...]
    mulw: Matrix


def _mulw_matrix(cache, w: FreeElement, d: int) -> Matrix:
    """Matrix of ``a -> a w`` from degree d to d+2."""
    src, tgt = cache.dim(d), cache.dim(d + 2)
    cols = [_right_mul_element(cache, d, {i: ONE}, w) for i in range(src)]
    return Matrix([[cols[j].get(k, ZERO) for j in range(src)] for k in range(tgt)], src)


def stabilize(pres: QuadraticPresentation, cert: NormalCertificate, maxI: int = 6) -> StabilizationData:
    if not extend_automorphism(pres, cert.nu1):
        raise StabilizationError("nu1 does not preserve the relations")
    cache = pres.degree_cache(2 * maxI + 2)
    w = cert.w
    dims = [cache.dim(0)]
    for i in range(maxI + 1):
        dims.append(cache.dim(2 * i + 2))
        if dims[i] == dims[i + 1]:
            M = _mulw_matrix(cache, w, 2 * i)
            if M.rank() == dims[i]:
                return StabilizationData(i, tuple(dims), M)
    raise StabilizationError(f"no stabilization up to i = {maxI}", dims=tuple(dims))


class CliffordAlgebra:
    """Structure constants on the normal words of ``A_{2 level}``, read as ``a w^-level``."""

    def __init__(self, pres: QuadraticPresentation, cert: NormalCertificate, level: int, base: FinDimAlgebra):
        self.pres = pres
        self.cert = cert
        self.level = level
        self.base = base
        self._cache = pres.degree_cache(4 * level)
        self.basis_words = self._cache.normal_words(2 * level)

    @property
    def dim(self) -> int:
        return self.base.dim

    def class_of(self, level: int, numerator) -> tuple[Fraction, ...]:
        """Coordinates of ``numerator * w^-level``."""
        if isinstance(numerator, dict):
            numerator = self.pres.element(numerator)
        if numerator.degree != 2 * level:
            raise ValueError("numerator degree must be twice the level")
        if level > self.level:
            raise ValueError(f"level {level} is above the stabilized level {self.level}")
        d = numerator.degree
        vec = self._cache.reduce(numerator)
        for _ in range(self.level - level):
            vec = _right_mul_element(self._cache, d, vec, self.cert.w)
            d += 2
        return tuple(vec.get(i, ZERO) for i in range(self.dim))

    def multiply(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        return self.base.multiply(x, y)


def clifford_algebra(pres: QuadraticPresentation, cert: NormalCertificate, stab: StabilizationData, level: int | None = None) -> CliffordAlgebra:
    i0 = stab.i0 if level is None else level
    if i0 < stab.i0:
        raise ValueError("level must be at least the stabilization index")
    cache = pres.degree_cache(4 * i0)
    w = cert.w
    h = cache.dim(2 * i0)
    # (. w)^i0 : A_{2 i0} -> A_{4 i0}
    cols = []
    for i in range(h):
        vec, d = {i: ONE}, 2 * i0
        for _ in range(i0):
            vec = _right_mul_element(cache, d, vec, w)
            d += 2
        cols.append(vec)
    H = cache.dim(4 * i0)
    pull = Matrix([[cols[j].get(k, ZERO) for j in range(h)] for k in range(H)], h)
    if pull.rank() != h:
        raise ValueError("multiplication by a power of w is not injective; the certificate is inconsistent")
    nu_pow = Matrix.identity(pres.dim)
    for _ in range(i0):
        nu_pow = nu_pow @ cert.nu1
    nub = automorphism_matrix(cache, nu_pow, 2 * i0)
    words = cache.normal_words(2 * i0)
    consts = []
    for a in range(h):
        row = []
        for b in range(h):
            prod: dict[int, Fraction] = {}
            for j, c in nub[b].items():
                for k, v in cache.multiply_word(2 * i0, {a: ONE}, words[j]).items():
                    prod[k] = prod.get(k, ZERO) + c * v
            sol = solve(pull, [prod.get(k, ZERO) for k in range(H)])
            if sol is None:
                raise ValueError("product does not pull back along the power of w")
            row.append(sol)
        consts.append(row)
    # unit: class of w^i0
    unit_vec, d = {0: ONE}, 0
    for _ in range(i0):
        unit_vec = _right_mul_element(cache, d, unit_vec, w)
        d += 2
    unit = [unit_vec.get(k, ZERO) for k in range(h)]
    base = FinDimAlgebra(h, unit, consts)
    return CliffordAlgebra(pres, cert, i0, base)


def t_element_assignment(cliff: CliffordAlgebra, instance) -> list[tuple[tuple[Fraction, ...], int]]:
    """Coordinates of ``1, t1, ..., t7`` for a diagonal instance, in the stabilized basis."""
    out = [cliff.base.unit]
    for level, num in instance.t_elements():
        out.append(cliff.class_of(level, num))
    return out


def evaluate_t_elements(cliff: CliffordAlgebra, a11, a21, a22, b11, b21, b22) -> list[list[tuple[Fraction, ...]]]:
    """Product table over ``(1, t1, ..., t7)`` written in the same basis."""
    from .family import DiagonalInstance

    inst = DiagonalInstance(a11, a21, a22, b11, b21, b22)
    ts = t_element_assignment(cliff, inst)
    T = Matrix(ts).transpose()
    if T.nrows != T.ncols or not T.is_invertible():
        raise ValueError("the t-elements do not form a basis of this algebra")
    table = []
    for x in ts:
        row = []
        for y in ts:
            coords = solve(T, cliff.multiply(x, y))
            row.append(tuple(coords))
        table.append(row)
    return table
