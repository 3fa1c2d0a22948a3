"""Twisting seeds ``psi0 : U (x) V -> V (x) U`` and their validation.

Coordinates: ``U (x) V`` is indexed by ``(j, i) -> j * n + i`` (U outermost)
and ``V (x) U`` by ``(i, j) -> i * m + j`` (V outermost), where ``n = dim V``
and ``m = dim U``.  A seed matrix acts on column vectors, so column
``j * n + i`` holds the image of ``u_j (x) v_i``.

In the two-variable case ``V = <u, v>`` (the algebra A) and ``U = <x, y>``
(the algebra B), and the blocks ``C, D, P, Q`` describe

    psi0(x (x) v_k) = sum_l C[k][l] v_l (x) x + D[k][l] v_l (x) y
    psi0(y (x) v_k) = sum_l P[k][l] v_l (x) x + Q[k][l] v_l (x) y
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .linalg import ONE, ZERO, Fraction, Matrix, SingularMatrixError, Subspace, as_fraction
from .quadratic import QuadraticPresentation, word_index

__all__ = [
    "TwistingSeed",
    "Twist2x2",
    "TwistData",
    "SigmaHom",
    "TwistError",
    "IrrationalEigenvalueError",
    "DescentReport",
    "extend_seed",
    "validate_descent",
    "validate_2x2",
    "sigma_of",
    "validate_sigma",
    "invert_sigma",
    "is_diagonal",
    "normalize_diagonal",
    "flip_seed",
]


class TwistError(ValueError):
    pass


class IrrationalEigenvalueError(TwistError):
    """The requested change of basis needs eigenvalues outside the rationals."""


class TwistingSeed:
    def __init__(self, dimV: int, dimU: int, matrix: Matrix):
        n, m = dimV, dimU
        if matrix.shape != (n * m, m * n):
            raise TwistError(f"seed matrix must be {n * m}x{m * n}, got {matrix.shape}")
        if not matrix.is_invertible():
            raise TwistError("seed matrix is not invertible")
        self.dimV = n
        self.dimU = m
        self.matrix = matrix
        self._inv: Matrix | None = None
        # column (j, i) as sparse dict over (l, k) pairs in V (x) U
        self._cols = {}
        for j in range(m):
            for i in range(n):
                col = {}
                for l in range(n):
                    for k in range(m):
                        c = matrix[l * m + k, j * n + i]
                        if c:
                            col[(l, k)] = c
                self._cols[(j, i)] = col
        self._memo: dict = {}

    def __eq__(self, other):
        return isinstance(other, TwistingSeed) and (self.dimV, self.dimU, self.matrix) == (other.dimV, other.dimU, other.matrix)

    def __hash__(self):
        return hash((self.dimV, self.dimU, self.matrix))

    def __repr__(self):
        return f"TwistingSeed(dimV={self.dimV}, dimU={self.dimU})"

    @property
    def inverse(self) -> Matrix:
        if self._inv is None:
            self._inv = self.matrix.inverse()
        return self._inv

    def apply(self, j: int, i: int) -> dict[tuple[int, int], Fraction]:
        """``psi0(u_j (x) v_i)`` as ``{(l, k): coeff}`` meaning ``v_l (x) u_k``."""
        return self._cols[(j, i)]

    def twist_words(self, uword: tuple, vword: tuple, peel: str = "right") -> dict[tuple[tuple, tuple], Fraction]:
        """Extended twist of ``uword (x) vword`` into ``sum c * vword' (x) uword'``.

        ``peel`` chooses which U letter is moved across first; both orders
        must agree for a genuine extension.
        """
        key = (uword, vword, peel)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not uword or not vword:
            out = {(vword, uword): ONE}
        elif len(uword) == 1:
            out = self._cross_letter(uword[0], vword)
        elif peel == "right":
            head, last = uword[:-1], uword[-1]
            out = {}
            for (vw, ul), c in self._cross_letter(last, vword).items():
                for (vw2, uw2), c2 in self.twist_words(head, vw, peel).items():
                    k = (vw2, uw2 + ul)
                    out[k] = out.get(k, ZERO) + c * c2
        else:
            first, tail = uword[0], uword[1:]
            out = {}
            for (vw, uw), c in self.twist_words(tail, vword, peel).items():
                for (vw2, ul), c2 in self._cross_letter(first, vw).items():
                    k = (vw2, ul + uw)
                    out[k] = out.get(k, ZERO) + c * c2
        out = {k: v for k, v in out.items() if v}
        self._memo[key] = out
        return out

    def _cross_letter(self, j: int, vword: tuple) -> dict[tuple[tuple, tuple], Fraction]:
        # one U letter moves right across the V word, one V letter at a time
        state = {((), j): ONE}
        for i in vword:
            nxt: dict = {}
            for (prefix, jj), c in state.items():
                for (l, k), x in self.apply(jj, i).items():
                    key = (prefix + (l,), k)
                    nxt[key] = nxt.get(key, ZERO) + c * x
            state = {k: v for k, v in nxt.items() if v}
        return {(vw, (k,)): c for (vw, k), c in state.items()}


def flip_seed(n: int, m: int) -> TwistingSeed:
    rows = [[ZERO] * (m * n) for _ in range(n * m)]
    for j in range(m):
        for i in range(n):
            rows[i * m + j][j * n + i] = ONE
    return TwistingSeed(n, m, Matrix(rows, m * n))


def _mat2(x) -> Matrix:
    m = x if isinstance(x, Matrix) else Matrix(x)
    if m.shape != (2, 2):
        raise TwistError("blocks must be 2x2")
    return m


@dataclass(frozen=True)
class Twist2x2:
    C: Matrix
    D: Matrix
    P: Matrix
    Q: Matrix

    def __post_init__(self):
        for name in "CDPQ":
            object.__setattr__(self, name, _mat2(getattr(self, name)))

    @classmethod
    def diagonal(cls, C, Q) -> "Twist2x2":
        return cls(_mat2(C), Matrix.zeros(2, 2), Matrix.zeros(2, 2), _mat2(Q))

    @property
    def H(self) -> Matrix:
        C, D, P, Q = self.C, self.D, self.P, self.Q
        return Matrix([C.rows[0] + D.rows[0], C.rows[1] + D.rows[1], P.rows[0] + Q.rows[0], P.rows[1] + Q.rows[1]])

    def tilde_blocks(self) -> tuple[Matrix, Matrix, Matrix, Matrix]:
        """The permuted blocks describing ``psi0`` on ``(x, y)^T (x) u`` and ``(x, y)^T (x) v``."""
        C, D, P, Q = self.C, self.D, self.P, self.Q

        def blk(a, b):
            return Matrix([[C[a, b], D[a, b]], [P[a, b], Q[a, b]]])

        return blk(0, 0), blk(0, 1), blk(1, 0), blk(1, 1)

    def seed(self) -> TwistingSeed:
        rows = [[ZERO] * 4 for _ in range(4)]
        for k in range(2):
            for l in range(2):
                rows[l * 2 + 0][0 * 2 + k] = self.C[k, l]
                rows[l * 2 + 1][0 * 2 + k] = self.D[k, l]
                rows[l * 2 + 0][1 * 2 + k] = self.P[k, l]
                rows[l * 2 + 1][1 * 2 + k] = self.Q[k, l]
        return TwistingSeed(2, 2, Matrix(rows, 4))


@dataclass(frozen=True)
class TwistData:
    seed: TwistingSeed
    presA: QuadraticPresentation
    presB: QuadraticPresentation
    blocks: Twist2x2 | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.seed.dimV != self.presA.dim or self.seed.dimU != self.presB.dim:
            raise TwistError("seed dimensions do not match the presentations")


def extend_seed(seed: TwistingSeed, p: int, q: int, peel: str = "right") -> Matrix:
    """Matrix of the extension ``U^{(x)q} (x) V^{(x)p} -> V^{(x)p} (x) U^{(x)q}``."""
    if p < 0 or q < 0:
        raise ValueError("degrees must be non-negative")
    n, m = seed.dimV, seed.dimU
    size_out = n**p * m**q
    cols = []
    for uw in product(range(m), repeat=q):
        for vw in product(range(n), repeat=p):
            col = {}
            for (vw2, uw2), c in seed.twist_words(uw, vw, peel).items():
                col[word_index(vw2, n) * m**q + word_index(uw2, m)] = c
            cols.append(col)
    return Matrix([[col.get(r, ZERO) for col in cols] for r in range(size_out)], len(cols))


@dataclass
class DescentReport:
    passed: bool
    b_side: bool
    a_side: bool
    witnesses: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _tensor_with_identity(sub: Subspace, dim: int, left: bool) -> Subspace:
    """``V (x) sub`` (left=True) or ``sub (x) V`` in lexicographic coordinates."""
    amb = sub.ambient_dim
    rows = []
    for r in sub.sparse_rows():
        for i in range(dim):
            if left:
                rows.append({i * amb + c: v for c, v in r.items()})
            else:
                rows.append({c * dim + i: v for c, v in r.items()})
    return Subspace.from_sparse(amb * dim, rows)


def validate_descent(twist: TwistData, N: int = 2) -> DescentReport:
    """Check ``psi(R_B (x) V) <= V (x) R_B`` and ``psi(U (x) R_A) <= R_A (x) U``."""
    seed = twist.seed
    n, m = seed.dimV, seed.dimU
    witnesses = {}
    # R_B (x) V lives in U (x) U (x) V; its image lives in V (x) U (x) U
    src = _tensor_with_identity(twist.presB.relations, n, left=False)
    img = src.image(extend_seed(seed, 1, 2))
    target = _tensor_with_identity(twist.presB.relations, n, left=True)
    b_ok = True
    for r in img.sparse_rows():
        if not target.contains(r):
            b_ok = False
            witnesses["R_B"] = r
            break
    src = _tensor_with_identity(twist.presA.relations, m, left=True)
    img = src.image(extend_seed(seed, 2, 1))
    target = _tensor_with_identity(twist.presA.relations, m, left=False)
    a_ok = True
    for r in img.sparse_rows():
        if not target.contains(r):
            a_ok = False
            witnesses["R_A"] = r
            break
    return DescentReport(b_ok and a_ok, b_ok, a_ok, witnesses)


def _commutator_conditions(C, D, P, Q) -> bool:
    return C @ P == P @ C and D @ Q == Q @ D and D @ P + C @ Q == P @ D + Q @ C


def validate_2x2(t: Twist2x2) -> dict:
    """Matrix criteria for two-variable polynomial rings."""
    if not t.H.is_invertible():
        raise TwistError("assembled block matrix is not invertible")
    first = _commutator_conditions(t.C, t.D, t.P, t.Q)
    second = _commutator_conditions(*t.tilde_blocks())
    return {"passed": first and second, "blocks": first, "tilde_blocks": second}


@dataclass(frozen=True)
class SigmaHom:
    """``components[i][j]`` is the matrix of ``sigma_ij`` on ``V`` (column k = image of v_k)."""

    components: tuple[tuple[Matrix, ...], ...]
    presA: QuadraticPresentation | None = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return len(self.components)

    def block(self) -> Matrix:
        """Block matrix with block ``(i, k)`` equal to ``sigma_ki``."""
        m = self.m
        n = self.components[0][0].nrows
        rows = []
        for i in range(m):
            for r in range(n):
                row = []
                for k in range(m):
                    row.extend(self.components[k][i].rows[r])
                rows.append(row)
        return Matrix(rows, m * n)

    @classmethod
    def from_block(cls, big: Matrix, m: int, presA=None) -> "SigmaHom":
        n = big.nrows // m
        comps = [[None] * m for _ in range(m)]
        for i in range(m):
            for k in range(m):
                comps[k][i] = Matrix([big.rows[i * n + r][k * n : (k + 1) * n] for r in range(n)], n)
        return cls(tuple(tuple(r) for r in comps), presA)


def sigma_of(twist: TwistData) -> SigmaHom:
    """Read ``psi(y_i (x) a) = sum_j sigma_ij(a) (x) y_j`` off the seed."""
    seed = twist.seed
    n, m = seed.dimV, seed.dimU
    comps = []
    for i in range(m):
        row = []
        for j in range(m):
            row.append(Matrix([[seed.matrix[l * m + j, i * n + k] for k in range(n)] for l in range(n)], n))
        comps.append(tuple(row))
    return SigmaHom(tuple(comps), twist.presA)


def validate_sigma(s: SigmaHom, N: int = 2, pres: QuadraticPresentation | None = None) -> bool:
    """``sigma`` is multiplicative on relations: ``sum_k sigma_ik(a) sigma_kj(b)`` kills ``R``.

    Relations generate the ideal, so the degree-2 check settles every degree.
    """
    pres = pres or s.presA
    if pres is None:
        raise ValueError("a presentation of A is required")
    m = s.m
    R = pres.relations
    for i in range(m):
        for j in range(m):
            big = None
            for k in range(m):
                term = s.components[i][k].kron(s.components[k][j])
                big = term if big is None else big + term
            if not R.contains_subspace(R.image(big)):
                return False
    return True


def invert_sigma(s: SigmaHom) -> SigmaHom:
    """Solve ``sum_k tau_ki sigma_jk = delta_ij`` and check the opposite identity too."""
    m = s.m
    # with B[(j, k)] = sigma_jk, the first identity reads T^bt * S^bt = 1 where S^bt block (k, j) = sigma_jk
    n = s.components[0][0].nrows
    sbt_rows = []
    for k in range(m):
        for r in range(n):
            row = []
            for j in range(m):
                row.extend(s.components[j][k].rows[r])
            sbt_rows.append(row)
    sbt = Matrix(sbt_rows, m * n)
    try:
        tbt = sbt.inverse()
    except SingularMatrixError as exc:
        raise TwistError("sigma is not invertible; the seed cannot be bijective") from exc
    # tbt block (i, k) = tau_ki
    comps = [[None] * m for _ in range(m)]
    for i in range(m):
        for k in range(m):
            comps[k][i] = Matrix([tbt.rows[i * n + r][k * n : (k + 1) * n] for r in range(n)], n)
    tau = SigmaHom(tuple(tuple(r) for r in comps), s.presA)
    ident = Matrix.identity(n)
    zero = Matrix.zeros(n, n)
    for i in range(m):
        for j in range(m):
            a = b = zero
            for k in range(m):
                a = a + tau.components[k][i] @ s.components[j][k]
                b = b + s.components[k][i] @ tau.components[j][k]
            want = ident if i == j else zero
            if a != want or b != want:
                raise TwistError("internal inconsistency: sigma inverse fails a composition identity")
    return tau


def is_diagonal(twist: TwistData) -> bool:
    s = sigma_of(twist)
    return all(s.components[i][j].is_zero() for i in range(s.m) for j in range(s.m) if i != j)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _eigenvalues(M: Matrix) -> list[Fraction]:
    tr = M.trace()
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr - 4 * det
    root = _rational_sqrt(disc)
    if root is None:
        raise IrrationalEigenvalueError(f"characteristic polynomial t^2 - ({tr})t + ({det}) does not split over Q")
    return sorted({(tr + root) / 2, (tr - root) / 2}, reverse=True)


def _eigenvector(M: Matrix, lam: Fraction) -> tuple[Fraction, Fraction] | None:
    a, b = M[0, 0] - lam, M[0, 1]
    c, d = M[1, 0], M[1, 1] - lam
    for x, y in ((a, b), (c, d)):
        if x or y:
            v = (-y, x)
            break
    else:
        return None  # scalar matrix: every vector is an eigenvector
    s = v[0] if v[0] else v[1]
    return (v[0] / s, v[1] / s)


def normalize_diagonal(C, Q) -> tuple[Matrix, Matrix, Matrix]:
    """Find ``X`` with ``X^-1 C X`` and ``X^-1 Q X`` both lower triangular."""
    C, Q = _mat2(C), _mat2(Q)
    if C @ Q != Q @ C:
        raise TwistError("C and Q do not commute")
    if C.is_lower_triangular() and Q.is_lower_triangular():
        return Matrix.identity(2), C, Q
    for M in (C, Q):
        _eigenvalues(M)  # raises on irrational spectrum
    lead = C if (C[0, 1] or C[1, 0] or C[0, 0] != C[1, 1]) else Q
    # lead is not scalar, so its eigenvectors are common eigenvectors of both matrices
    vecs = [_eigenvector(lead, lam) for lam in _eigenvalues(lead)]
    if len(vecs) == 1:
        e = vecs[0]
        first = (ONE, ZERO) if e[1] != 0 else (ZERO, ONE)
        cols = [first, e]
    else:
        cols = vecs
    X = Matrix([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    Xi = X.inverse()
    C2, Q2 = Xi @ C @ X, Xi @ Q @ X
    if not (C2.is_lower_triangular() and Q2.is_lower_triangular()):
        raise TwistError("failed to triangularize simultaneously")
    return X, C2, Q2
