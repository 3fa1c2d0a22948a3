"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices are small immutable
row-major tables; elimination is done on sparse row dictionaries so that
the degree-wise relation spaces of quadratic algebras stay cheap.

A :class:`Subspace` is always held in reduced row-echelon form (pivot = first
nonzero column), which makes equality a row-by-row comparison.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Fraction",
    "Matrix",
    "Subspace",
    "DimensionError",
    "SingularMatrixError",
    "as_fraction",
    "parse_scalar",
    "format_scalar",
    "reduce_rows",
    "rref",
    "kernel",
    "annihilator",
    "solve",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Ambient or shape mismatch."""


class SingularMatrixError(ArithmeticError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted; pass a string or Fraction")
    return Fraction(x)


def parse_scalar(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; a zero denominator is rejected."""
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        p, q = int(p), int(q)
        if q == 0:
            raise ValueError(f"zero denominator in scalar {text!r}")
        return Fraction(p, q)
    return Fraction(int(text))


def format_scalar(x: Fraction) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        if isinstance(rows, Matrix):
            rows, ncols = rows.rows, rows.ncols
        rows = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("ragged matrix rows")
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def from_sparse(cls, rows: Sequence[dict], ncols: int) -> "Matrix":
        out = []
        for r in rows:
            dense = [ZERO] * ncols
            for c, v in r.items():
                dense[c] = v
            out.append(dense)
        return cls(out, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self.rows for x in r)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.ncols)], self.nrows)

    T = property(transpose)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = as_fraction(c)
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = [other.column(j) for j in range(other.ncols)]
            return Matrix(
                [[sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in cols] for r in self.rows],
                other.ncols,
            )
        vec = tuple(as_fraction(x) for x in other)
        if len(vec) != self.ncols:
            raise DimensionError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), ZERO) for r in self.rows)

    def kron(self, other: "Matrix") -> "Matrix":
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append([a * b for a in r for b in s])
        return Matrix(rows, self.ncols * other.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_lower_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.nrows) for j in range(i + 1, self.ncols))

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.shape))), ZERO)

    def rank(self) -> int:
        return rref(self)[1]

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise DimensionError("only square matrices are invertible")
        aug = [dict(_sparse(r)) for r in self.rows]
        for i, d in enumerate(aug):
            d[n + i] = ONE
        red, pivots = reduce_rows(aug)
        if len(pivots) < n or pivots[n - 1] >= n:
            raise SingularMatrixError("matrix is not invertible")
        return Matrix([[r.get(n + j, ZERO) for j in range(n)] for r in red], n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def _sparse(row: Iterable[Fraction]) -> dict[int, Fraction]:
    return {j: x for j, x in enumerate(row) if x}


def reduce_rows(rows: Iterable[dict[int, Fraction]], pivot: str = "first"):
    """Fully reduce sparse rows; return ``(rows, pivots)``.

    ``pivot="first"`` gives ordinary reduced row-echelon form.  With
    ``pivot="last"`` each row is led by its largest column instead, which is
    the convention used to pick lexicographically earliest normal words.
    Rows are returned sorted by pivot column.
    """
    pick = min if pivot == "first" else max
    basis: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        r = {c: as_fraction(v) for c, v in row.items() if v}
        for p, b in basis.items():
            f = r.get(p)
            if f:
                for c, v in b.items():
                    nv = r.get(c, ZERO) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        if not r:
            continue
        p = pick(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for b in basis.values():
            f = b.get(p)
            if f:
                for c, v in r.items():
                    nv = b.get(c, ZERO) - f * v
                    if nv:
                        b[c] = nv
                    else:
                        b.pop(c, None)
        basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form padded with zero rows, and the rank."""
    red, pivots = reduce_rows(_sparse(r) for r in m.rows)
    rows = [[r.get(j, ZERO) for j in range(m.ncols)] for r in red]
    rows += [[ZERO] * m.ncols for _ in range(m.nrows - len(rows))]
    return Matrix(rows, m.ncols), len(pivots)


def _kernel_rows(red: list[dict], pivots: list[int], ncols: int) -> list[dict]:
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: ONE}
        for p, r in zip(pivots, red):
            c = r.get(f)
            if c:
                v[p] = -c
        out.append(v)
    return out


def kernel(m: Matrix) -> "Subspace":
    """Null space ``{v : m v = 0}``."""
    red, pivots = reduce_rows(_sparse(r) for r in m.rows)
    return Subspace.from_sparse(m.ncols, _kernel_rows(red, pivots, m.ncols))


def solve(m: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One particular solution of ``m x = b`` or ``None`` if inconsistent."""
    n = m.ncols
    aug = []
    for r, bi in zip(m.rows, b):
        d = _sparse(r)
        bi = as_fraction(bi)
        if bi:
            d[n] = bi
        aug.append(d)
    red, pivots = reduce_rows(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for p, r in zip(pivots, red):
        x[p] = r.get(n, ZERO)
    return tuple(x)


class Subspace:
    """Row space of an echelon basis inside ``Q^ambient_dim``."""

    __slots__ = ("ambient_dim", "_rows", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        sparse = []
        for v in vectors:
            v = tuple(v)
            if len(v) != ambient_dim:
                raise DimensionError("vector length differs from ambient dimension")
            sparse.append(_sparse(as_fraction(x) for x in v))
        self._init(ambient_dim, sparse)

    def _init(self, ambient_dim, sparse_rows):
        red, pivots = reduce_rows(sparse_rows)
        for r in red:
            if max(r) >= ambient_dim:
                raise DimensionError("coordinate outside ambient dimension")
        self.ambient_dim = ambient_dim
        self._rows = tuple(tuple(sorted(r.items())) for r in red)
        self._pivots = tuple(pivots)

    @classmethod
    def from_sparse(cls, ambient_dim: int, rows: Iterable[dict]) -> "Subspace":
        s = cls.__new__(cls)
        s._init(ambient_dim, rows)
        return s

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.from_sparse(n, ({i: ONE} for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls.from_sparse(n, [])

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @property
    def basis(self) -> Matrix:
        return Matrix.from_sparse(self.sparse_rows(), self.ambient_dim) if self._rows else Matrix([], self.ambient_dim)

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [dict(r) for r in self._rows]

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [tuple(r) for r in self.basis.rows]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient_dim, self._rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_sparse(self.ambient_dim, self.sparse_rows() + other.sparse_rows())

    def sum(self, other: "Subspace") -> "Subspace":
        return self + other

    def intersect(self, other: "Subspace") -> "Subspace":
        # x = sum a_i r_i = sum b_j s_j  <=>  (a, -b) in kernel of the stacked system
        self._check(other)
        a, b = self.sparse_rows(), other.sparse_rows()
        if not a or not b:
            return Subspace.zero(self.ambient_dim)
        # transpose of [A; -B] as sparse rows over coordinates
        cols = [dict() for _ in range(self.ambient_dim)]
        for i, r in enumerate(a):
            for c, v in r.items():
                cols[c][i] = v
        for j, r in enumerate(b):
            for c, v in r.items():
                cols[c][len(a) + j] = -v
        red, pivots = reduce_rows(cols)
        out = []
        for k in _kernel_rows(red, pivots, len(a) + len(b)):
            vec: dict[int, Fraction] = {}
            for i, coef in k.items():
                if i < len(a):
                    for c, v in a[i].items():
                        vec[c] = vec.get(c, ZERO) + coef * v
            out.append({c: v for c, v in vec.items() if v})
        return Subspace.from_sparse(self.ambient_dim, out)

    def reduce(self, v) -> dict[int, Fraction]:
        """Remainder of ``v`` after clearing the pivot coordinates."""
        r = _sparse(as_fraction(x) for x in v) if not isinstance(v, dict) else {c: x for c, x in v.items() if x}
        for p, row in zip(self._pivots, self._rows):
            f = r.get(p)
            if f:
                for c, x in row:
                    nv = r.get(c, ZERO) - f * x
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        return r

    def contains(self, v) -> bool:
        if not isinstance(v, dict) and len(v) != self.ambient_dim:
            raise DimensionError("vector length differs from ambient dimension")
        return not self.reduce(v)

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(not self.reduce(r) for r in other.sparse_rows())

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def equal(self, other: "Subspace") -> bool:
        self._check(other)
        return self == other

    def annihilator(self) -> "Subspace":
        return annihilator(self)

    def image(self, m: Matrix) -> "Subspace":
        """``{m v : v in self}`` for a matrix acting on column vectors."""
        if m.ncols != self.ambient_dim:
            raise DimensionError("matrix does not act on this ambient space")
        cols = [dict(_sparse(m.column(j))) for j in range(m.ncols)]
        out = []
        for r in self._rows:
            vec: dict[int, Fraction] = {}
            for c, x in r:
                for i, y in cols[c].items():
                    vec[i] = vec.get(i, ZERO) + x * y
            out.append({i: v for i, v in vec.items() if v})
        return Subspace.from_sparse(m.nrows, out)


def annihilator(r: Subspace) -> Subspace:
    """Orthogonal complement under the coordinate pairing."""
    rows = r.sparse_rows()
    return Subspace.from_sparse(r.ambient_dim, _kernel_rows(rows, list(r.pivots), r.ambient_dim))
