"""Degree-two normal elements of quadratic algebras.

Convention: ``w`` is normal with normalizing automorphism ``nu`` when
``a w = w nu(a)`` for every ``a``.  ``nu1`` is the matrix of ``nu`` on the
generators, column ``i`` holding the coordinates of ``nu(x_i)``.  A relation
written the other way round, ``w x = mu(x) w``, has ``mu = nu^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .linalg import ONE, ZERO, Fraction, Matrix, Subspace, as_fraction, reduce_rows, solve
from .quadratic import DegreeCache, FreeElement, QuadraticPresentation

__all__ = [
    "NormalityError",
    "NormalCertificate",
    "NormalSearchResult",
    "verify_normal",
    "automorphism_matrix",
    "extend_automorphism",
    "regularity_window",
    "search_normal_degree2",
    "left_action",
]


class NormalityError(ValueError):
    """Raised when an element fails to be normal; ``kind`` names the reason."""

    def __init__(self, kind: str, message: str, defect=None):
        super().__init__(message)
        self.kind = kind
        self.defect = defect


@dataclass(frozen=True)
class NormalCertificate:
    w: FreeElement
    nu1: Matrix
    checked_degree: int
    regular_window: bool | None = None

    def to_json(self, gens) -> dict:
        from .io import certificate_to_json

        return certificate_to_json(self, gens)


def _cache(pres: QuadraticPresentation, N: int) -> DegreeCache:
    return pres.degree_cache(max(N, 3))


def _as_element(pres: QuadraticPresentation, w) -> FreeElement:
    if isinstance(w, FreeElement):
        return w
    return pres.element(w)


def _right_mul_element(cache: DegreeCache, d: int, vec: dict, x: FreeElement) -> dict:
    """(degree-d class) * x."""
    out: dict[int, Fraction] = {}
    for word, c in x.coeffs.items():
        for j, v in cache.multiply_word(d, vec, word).items():
            out[j] = out.get(j, ZERO) + c * v
    return {j: v for j, v in out.items() if v}


def _left_mul_word(cache: DegreeCache, wvec: dict, word: Sequence[int]) -> dict:
    return cache.multiply_word(2, wvec, word)


def automorphism_matrix(cache: DegreeCache, nu1: Matrix, d: int) -> list[dict]:
    """Images under the multiplicative extension of ``nu1`` of the normal words of degree ``d``."""
    n = cache.n
    gens_img = [{k: nu1[k, i] for k in range(n) if nu1[k, i]} for i in range(n)]
    level = [{0: ONE}]
    for e in range(1, d + 1):
        nxt = []
        prev_words = cache.normal_words(e - 1)
        pos = {w: i for i, w in enumerate(prev_words)}
        for word in cache.normal_words(e):
            base = level[pos[word[:-1]]]
            out: dict[int, Fraction] = {}
            for k, c in gens_img[word[-1]].items():
                for j, v in cache.right_multiply(e - 1, base, k).items():
                    out[j] = out.get(j, ZERO) + c * v
            nxt.append({j: v for j, v in out.items() if v})
        level = nxt
    return level


def _solve_nu(cache: DegreeCache, wvec: dict, w: FreeElement) -> Matrix:
    n = cache.n
    h3 = cache.dim(3)
    # columns: w * x_j
    wx = [_left_mul_word(cache, wvec, (j,)) for j in range(n)]
    M = Matrix([[wx[j].get(k, ZERO) for j in range(n)] for k in range(h3)], n)
    rank = M.rank()
    cols = []
    for i in range(n):
        xw = _right_mul_element(cache, 1, {i: ONE}, w)
        sol = solve(M, [xw.get(k, ZERO) for k in range(h3)])
        if sol is None:
            raise NormalityError(
                "not_normal",
                f"generator #{i} times w is not in w V",
                defect={"generator": i, "product": {k: v for k, v in xw.items()}},
            )
        cols.append(sol)
    if rank < n:
        raise NormalityError(
            "non_unique",
            f"w * V has dimension {rank} < {n}; the normalizing matrix is not unique",
            defect={"rank": rank},
        )
    return Matrix([[cols[i][j] for i in range(n)] for j in range(n)], n)


def verify_normal(pres: QuadraticPresentation, w, N: int = 3) -> NormalCertificate:
    """Solve ``x_i w = w nu1(x_i)`` in degree 3 and check the extension up to degree ``N``.

    Raises NormalityError with ``kind`` one of ``zero``, ``not_normal``,
    ``non_unique``, ``singular``.
    """
    w = _as_element(pres, w)
    if w.degree != 2:
        raise ValueError("w must have degree 2")
    cache = _cache(pres, N)
    wvec = cache.reduce(w)
    if not wvec:
        raise NormalityError("zero", "w is zero in the quotient")
    w = cache.to_element(2, wvec)
    nu1 = _solve_nu(cache, wvec, w)
    if not nu1.is_invertible():
        raise NormalityError("singular", "normalizing matrix is not invertible", defect={"nu1": nu1})
    # a * w = w * nu(a) on a basis of each degree up to N - 2
    for d in range(2, N - 1):
        images = automorphism_matrix(cache, nu1, d)
        for i, word in enumerate(cache.normal_words(d)):
            lhs = _right_mul_element(cache, d, {i: ONE}, w)
            rhs: dict[int, Fraction] = {}
            for j, c in images[i].items():
                for k, v in _left_mul_word(cache, wvec, cache.normal_words(d)[j]).items():
                    rhs[k] = rhs.get(k, ZERO) + c * v
            diff = {k: lhs.get(k, ZERO) - rhs.get(k, ZERO) for k in set(lhs) | set(rhs)}
            if any(diff.values()):
                raise NormalityError(
                    "not_normal", f"a * w != w * nu(a) for a basis element of degree {d}", defect={"degree": d, "word": word}
                )
    return NormalCertificate(w, nu1, max(N, 3))


def left_action(cert: NormalCertificate) -> Matrix:
    """Matrix of ``mu`` with ``w x = mu(x) w``."""
    return cert.nu1.inverse()


def extend_automorphism(pres: QuadraticPresentation, nu1) -> bool:
    """Does ``nu1`` preserve the relation space, i.e. induce a graded automorphism?"""
    nu1 = Matrix(nu1) if not isinstance(nu1, Matrix) else nu1
    if nu1.shape != (pres.dim, pres.dim):
        raise ValueError("matrix size does not match the generator count")
    if not nu1.is_invertible():
        raise ValueError("nu1 must be invertible")
    R = pres.relations
    return R.image(nu1.kron(nu1)) == R


def _rank(rows: list[dict]) -> int:
    return len(reduce_rows([r for r in rows if r])[0])


def regularity_window(pres: QuadraticPresentation, w, N: int = 6) -> dict:
    """Ranks of left and right multiplication by ``w`` from degree d to d+2, d <= N-2."""
    w = _as_element(pres, w)
    cache = _cache(pres, N)
    wvec = cache.reduce(w)
    if not wvec:
        raise NormalityError("zero", "w is zero in the quotient")
    w = cache.to_element(2, wvec)
    degrees = []
    ok = True
    for d in range(0, N - 1):
        words = cache.normal_words(d)
        left = [_left_mul_word(cache, wvec, u) for u in words]
        right = [_right_mul_element(cache, d, {i: ONE}, w) for i in range(len(words))]
        lr, rr = _rank(left), _rank(right)
        entry = {
            "degree": d,
            "source_dim": len(words),
            "target_dim": cache.dim(d + 2),
            "left_rank": lr,
            "right_rank": rr,
            "left_injective": lr == len(words),
            "right_injective": rr == len(words),
        }
        ok = ok and entry["left_injective"] and entry["right_injective"]
        degrees.append(entry)
    return {"checked_degree": N, "degrees": degrees, "regular": ok}


@dataclass
class NormalSearchResult:
    """Outcome of a support-restricted search.

    ``all_normal`` flags the case where every element of the support span is
    normal; ``family`` holds a parametrized description when the normal locus
    is positive dimensional.  No list of certificates is produced in either case.
    """

    certificates: list[NormalCertificate] = field(default_factory=list)
    all_normal: bool = False
    family: list[dict] = field(default_factory=list)
    rejected: list[dict] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return self.all_normal or bool(self.family)

    def __iter__(self):
        return iter(self.certificates)

    def __len__(self):
        return len(self.certificates)


def _normalize_scale(vec: dict) -> dict:
    lead = vec[min(vec)]
    return {k: v / lead for k, v in vec.items()}


def _to_fraction(val) -> Fraction | None:
    import sympy

    val = sympy.nsimplify(val) if not isinstance(val, sympy.Rational) else val
    if not isinstance(val, sympy.Rational):
        return None
    return Fraction(int(val.p), int(val.q))


def search_normal_degree2(pres: QuadraticPresentation, support, N: int = 3, target: QuadraticPresentation | None = None) -> NormalSearchResult:
    """Find normal elements ``w = sum c_s s`` over the given degree-two words.

    The system ``x_i w = w nu1(x_i)`` is bilinear in ``(c, nu1)``.  On each
    affine chart of the coefficient space the unknown ``nu1`` is eliminated with
    a lexicographic Groebner basis, leaving polynomial conditions on ``c`` that
    are solved exactly.  With ``target`` given, ``w`` is further required to lie
    in the degree-two relations of ``target`` (so ``pres / (w)`` is ``target``
    in degree two).  Every candidate is re-checked with verify_normal.
    """
    import sympy

    support = [pres.gens.parse_word(s) for s in support]
    if not support:
        raise ValueError("support must be non-empty")
    if any(len(s) != 2 for s in support):
        raise ValueError("support words must have degree 2")
    n = pres.dim
    cache = _cache(pres, N)
    h2, h3 = cache.dim(2), cache.dim(3)
    svecs = [cache.reduce(FreeElement.word(s)) for s in support]
    xs = [[_right_mul_element(cache, 1, {i: ONE}, FreeElement.word(s)) for i in range(n)] for s in support]
    sx = [[_left_mul_word(cache, sv, (j,)) for j in range(n)] for sv in svecs]
    # linear conditions from the target: w must be killed by the annihilator of the target relations in A_2
    linear: list[dict] = []
    if target is not None:
        if target.gens.names != pres.gens.names:
            raise ValueError("target must use the same generators")
        images = [cache.reduce(r) for r in target.relation_elements()]
        linear = Subspace.from_sparse(h2, [v for v in images if v]).annihilator().sparse_rows()

    k = len(support)
    c = sympy.symbols(f"c0:{k}")
    nu = sympy.symbols(f"n0:{n * n}")  # nu[j*n + i] = (nu1)_{j i}
    R = sympy.Rational

    def equations(cv):
        eqs = []
        for i in range(n):
            for t in range(h3):
                e = 0
                for s in range(k):
                    e += cv[s] * R(xs[s][i].get(t, ZERO))
                    for j in range(n):
                        v = sx[s][j].get(t, ZERO)
                        if v:
                            e -= cv[s] * R(v) * nu[j * n + i]
                e = sympy.expand(e)
                if e != 0:
                    eqs.append(e)
        for row in linear:
            e = sympy.expand(sum(cv[s] * R(svecs[s].get(t, ZERO)) * R(x) for s in range(k) for t, x in row.items()))
            if e != 0:
                eqs.append(e)
        return eqs

    found: dict[tuple, NormalCertificate] = {}
    result = NormalSearchResult()
    for lead in range(k):
        cv = [0] * lead + [1] + list(c[lead + 1:])
        free_c = list(c[lead + 1:])
        eqs = equations(cv)
        G = sympy.groebner(eqs, *nu, *free_c, order="lex") if eqs else None
        if G is not None and list(G.exprs) == [1]:
            continue
        conds = [g for g in (G.exprs if G is not None else []) if not (g.free_symbols & set(nu))]
        if free_c and not conds:
            result.all_normal = target is None
            result.family.append({"chart": lead, "conditions": []})
            return result
        sols = sympy.solve(conds, free_c, dict=True) if conds else [{}]
        for sol in sols:
            if any(x not in sol or sol[x].free_symbols for x in free_c):
                result.family.append({"chart": lead, "conditions": [str(g) for g in conds]})
                continue
            coeffs = {}
            bad = False
            for s in range(k):
                val = cv[s] if s <= lead else sol[c[s]]
                q = _to_fraction(val)
                if q is None:
                    result.rejected.append({"chart": lead, "reason": "irrational", "value": str(val)})
                    bad = True
                    break
                if q:
                    coeffs[support[s]] = q
            if bad:
                continue
            w = FreeElement(2, coeffs)
            wvec = cache.reduce(w)
            if not wvec:
                continue
            key = tuple(sorted(_normalize_scale(wvec).items()))
            if key in found:
                continue
            try:
                cert = verify_normal(pres, w, N)
            except NormalityError as exc:
                result.rejected.append({"w": {pres.gens.format_word(u): str(v) for u, v in coeffs.items()}, "reason": exc.kind})
                continue
            found[key] = cert
    result.certificates = list(found.values())
    return result
