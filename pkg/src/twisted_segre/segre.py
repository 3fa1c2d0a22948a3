"""Twisted Segre products of quadratic algebras.

Three views of the same algebra are built here:

* :func:`segre_presentation` - generators ``v_i (x) u_j`` and the quadratic
  relations obtained by pulling ``R_A (x) U U + V V (x) R_B`` back through the
  inverse seed in the middle two factors;
* :class:`SegreComponentModel` - ``A_n (x) B_n`` with the twisted product
  ``(a (x) b)(c (x) d) = a c_psi (x) b^psi d``;
* :class:`SmashTruncation` - a finite window of the bigraded smash product
  ``S_(i,j) = A_{i+j} (x) B_j``.

Generator ``(i, j)`` of the presentation has position ``j * n + i``, so in the
two-by-two case the order is ``X = u x, Y = v x, Z = u y, W = v y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import ONE, ZERO, Fraction, Matrix, Subspace, reduce_rows
from .quadratic import DegreeCache, GeneratorSet, QuadraticPresentation, hilbert
from .twisting import TwistData, TwistError, flip_seed, validate_descent

__all__ = [
    "SegrePresentation",
    "SegreComponentModel",
    "SmashTruncation",
    "segre_presentation",
    "segre_component_model",
    "cross_validate",
    "smash_truncation",
    "density_window_check",
    "zhang_twist_check",
    "generator_labels",
]


def generator_labels(n: int, m: int) -> tuple[str, ...]:
    if (n, m) == (2, 2):
        return ("X", "Y", "Z", "W")
    return tuple(f"g_{i}_{j}" for j in range(m) for i in range(n))


@dataclass(frozen=True)
class SegrePresentation:
    underlying: QuadraticPresentation
    provenance: TwistData

    def gen_index(self, i: int, j: int) -> int:
        return j * self.provenance.seed.dimV + i


def segre_presentation(twist: TwistData, check: bool = True) -> SegrePresentation:
    if check and not validate_descent(twist).passed:
        raise TwistError("seed does not descend to a twisting map of the quotients")
    seed = twist.seed
    n, m = seed.dimV, seed.dimU
    inv = seed.inverse  # V (x) U -> U (x) V
    g = lambda i, j: j * n + i  # noqa: E731
    N = n * m

    def pullback(i, k, j, l, c, out):
        # v_i (x) [v_k (x) u_j] (x) u_l, middle pair sent through psi0^{-1}
        col = k * m + j
        for jj in range(m):
            for kk in range(n):
                x = inv[jj * n + kk, col]
                if x:
                    idx = g(i, jj) * N + g(kk, l)
                    out[idx] = out.get(idx, ZERO) + c * x

    rows = []
    for r in twist.presA.relations.sparse_rows():
        for j in range(m):
            for l in range(m):
                out: dict = {}
                for idx, c in r.items():
                    i, k = divmod(idx, n)
                    pullback(i, k, j, l, c, out)
                rows.append(out)
    for r in twist.presB.relations.sparse_rows():
        for i in range(n):
            for k in range(n):
                out = {}
                for idx, c in r.items():
                    j, l = divmod(idx, m)
                    pullback(i, k, j, l, c, out)
                rows.append(out)
    rows = [{a: b for a, b in r.items() if b} for r in rows]
    pres = QuadraticPresentation(GeneratorSet(generator_labels(n, m)), Subspace.from_sparse(N * N, rows))
    return SegrePresentation(pres, twist)


def _add_into(out: dict, key, c):
    v = out.get(key, ZERO) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class _Bigraded:
    """Shared machinery: products of ``A_p (x) B_q`` pieces through the twist."""

    def __init__(self, twist: TwistData, a_limit: int, b_limit: int):
        self.twist = twist
        self.cacheA: DegreeCache = twist.presA.degree_cache(max(a_limit, 1))
        self.cacheB: DegreeCache = twist.presB.degree_cache(max(b_limit, 1))
        self._psi: dict = {}

    def psi(self, q: int, ib: int, p: int, ic: int) -> dict[tuple[int, int], Fraction]:
        """``psi(b (x) c)`` for normal words ``b in B_q``, ``c in A_p`` over normal-word pairs of ``A_p (x) B_q``."""
        key = (q, ib, p, ic)
        hit = self._psi.get(key)
        if hit is not None:
            return hit
        bw = self.cacheB.normal_words(q)[ib]
        cw = self.cacheA.normal_words(p)[ic]
        out: dict = {}
        for (vw, uw), c in self.twist.seed.twist_words(bw, cw).items():
            va = self.cacheA.multiply_word(0, {0: ONE}, vw)
            ub = self.cacheB.multiply_word(0, {0: ONE}, uw)
            for ia, x in va.items():
                for jb, y in ub.items():
                    _add_into(out, (ia, jb), c * x * y)
        self._psi[key] = out
        return out

    def product(self, degx: tuple[int, int], x: dict, degy: tuple[int, int], y: dict) -> dict:
        """Product of elements of ``A_p (x) B_q`` and ``A_s (x) B_t``, lands in ``A_{p+s} (x) B_{q+t}``.

        Elements are dicts ``{(ia, ib): coeff}`` over normal-word pairs.
        """
        p, q = degx
        s, t = degy
        A, B = self.cacheA, self.cacheB
        wordsA = A.normal_words(s)
        wordsB_q = B.normal_words(t)
        out: dict = {}
        for (ia, ib), c1 in x.items():
            for (ic, idd), c2 in y.items():
                for (jc, jb), c3 in self.psi(q, ib, s, ic).items():
                    left = A.multiply_word(p, {ia: ONE}, wordsA[jc])
                    right = B.multiply_word(q, {jb: ONE}, wordsB_q[idd])
                    coef = c1 * c2 * c3
                    for ka, xa in left.items():
                        for kb, xb in right.items():
                            _add_into(out, (ka, kb), coef * xa * xb)
        return out

    def basis(self, p: int, q: int) -> list[tuple[int, int]]:
        if p < 0 or q < 0:
            return []
        return [(a, b) for a in range(self.cacheA.dim(p)) for b in range(self.cacheB.dim(q))]


class SegreComponentModel(_Bigraded):
    """Degrees ``0..N`` of ``A o_psi B`` realized as ``A_n (x) B_n``."""

    def __init__(self, twist: TwistData, N: int):
        super().__init__(twist, N, N)
        self.N = N

    def dim(self, n: int) -> int:
        return self.cacheA.dim(n) * self.cacheB.dim(n)

    def multiply(self, n: int, x: dict, m: int, y: dict) -> dict:
        if n + m > self.N:
            raise ValueError(f"product degree {n + m} exceeds model degree {self.N}")
        return self.product((n, n), x, (m, m), y)

    def generator(self, i: int, j: int) -> dict:
        return {(i, j): ONE}


def segre_component_model(twist: TwistData, N: int) -> SegreComponentModel:
    return SegreComponentModel(twist, N)


def _vector_rank(vectors: list[dict]) -> int:
    return len(reduce_rows(vectors)[1])


def _key_index(model: _Bigraded, p: int, q: int):
    hb = model.cacheB.dim(q)
    return lambda key: key[0] * hb + key[1]


def cross_validate(twist: TwistData, N: int = 6, presentation: QuadraticPresentation | None = None) -> dict:
    """Compare a presentation of ``A o_psi B`` with the componentwise model up to degree N."""
    pres = presentation or segre_presentation(twist).underlying
    model = SegreComponentModel(twist, N)
    n, m = twist.seed.dimV, twist.seed.dimU
    gens = [(i, j) for j in range(m) for i in range(n)]
    table = []
    failure = None
    # the generator map must kill every relation
    idx2 = _key_index(model, 2, 2)
    for r in pres.relations.sparse_rows():
        image: dict = {}
        for idx, c in r.items():
            a, b = divmod(idx, n * m)
            prod = model.multiply(1, model.generator(*gens[a]), 1, model.generator(*gens[b]))
            for k, v in prod.items():
                _add_into(image, idx2(k), c * v)
        if image:
            failure = {"degree": 2, "reason": "relation not killed", "relation": r, "image": image}
            break
    cache = pres.degree_cache(max(N, 1))
    prev_images: list[dict] = [{(0, 0): ONE}]
    for d in range(N + 1):
        hp = cache.dim(d)
        hm = model.dim(d)
        row = {"degree": d, "presentation": hp, "model": hm}
        if d >= 1:
            words = cache.normal_words(d)
            prev_words = {w: k for k, w in enumerate(cache.normal_words(d - 1))}
            images = []
            for w in words:
                base = prev_images[prev_words[w[:-1]]]
                images.append(model.multiply(d - 1, base, 1, model.generator(*gens[w[-1]])))
            idx = _key_index(model, d, d)
            rank = _vector_rank([{idx(k): v for k, v in im.items()} for im in images])
            prev_images = images
        else:
            rank = 1
        row["image_rank"] = rank
        row["ok"] = hp == hm == rank
        table.append(row)
        if failure is None and not row["ok"]:
            failure = {"degree": d, "reason": "dimension mismatch", "presentation": hp, "model": hm, "image_rank": rank}
    return {"passed": failure is None, "degrees": table, "counterexample": failure}


class SmashTruncation(_Bigraded):
    """Window ``|i| <= I``, ``0 <= j <= J`` of the bigraded smash product."""

    def __init__(self, twist: TwistData, I: int, J: int):
        if I < 0 or J < 0:
            raise ValueError("window bounds must be non-negative")
        super().__init__(twist, 2 * I + 2 * J, 2 * J)
        self.I, self.J = I, J

    def in_window(self, i: int, j: int) -> bool:
        return abs(i) <= self.I and 0 <= j <= self.J

    def component_dim(self, i: int, j: int) -> int:
        if j < 0 or i + j < 0:
            return 0
        return self.cacheA.dim(i + j) * self.cacheB.dim(j)

    def component_basis(self, i: int, j: int):
        return self.basis(i + j, j)

    def multiply(self, bix: tuple[int, int], x: dict, biy: tuple[int, int], y: dict) -> dict:
        (i, j), (s, t) = bix, biy
        return self.product((i + j, j), x, (s + t, t), y)


def smash_truncation(twist: TwistData, I: int, J: int) -> SmashTruncation:
    return SmashTruncation(twist, I, J)


def density_window_check(trunc: SmashTruncation, i: int, s: int) -> dict:
    """Which components ``S_(i+s, T)`` are spanned by products ``S_(i, j) S_(s, t)``, ``j + t = T``."""
    J = trunc.J
    lo_t = max(0, -s)
    if lo_t > J or abs(i) > trunc.I or abs(s) > trunc.I:
        raise ValueError("window too small for the requested product")
    target_i = i + s
    covered, defects, uncovered = [], [], []
    rows = []
    for T in range(0, J + 1):
        dim = trunc.component_dim(target_i, T)
        if dim == 0:
            continue
        idx = _key_index(trunc, target_i + T, T)
        vecs = []
        for j in range(0, T + 1):
            t = T - j
            if trunc.component_dim(i, j) == 0 or trunc.component_dim(s, t) == 0:
                continue
            for bx in trunc.component_basis(i, j):
                for by in trunc.component_basis(s, t):
                    prod = trunc.multiply((i, j), {bx: ONE}, (s, t), {by: ONE})
                    if prod:
                        vecs.append({idx(k): v for k, v in prod.items()})
        rank = _vector_rank(vecs)
        rows.append({"T": T, "component_dim": dim, "product_rank": rank})
        if rank == dim:
            covered.append(T)
        elif not vecs:
            defects.append({"T": T, "dim": dim})
        else:
            uncovered.append({"T": T, "dim": dim, "rank": rank})
    defect_total = sum(d["dim"] for d in defects) + sum(d["dim"] - d["rank"] for d in uncovered)
    return {
        "i": i,
        "s": s,
        "window_J": J,
        "components": rows,
        "covered": covered,
        "defects": defects,
        "uncovered": uncovered,
        "defect_dim": defect_total,
        "finite_defect": True,
        "full_coverage": not defects and not uncovered,
    }


def zhang_twist_check(twist: TwistData) -> bool:
    """Does the Zhang twist by ``X/b11, Y/b22, Z/a11, W/a22`` commute the algebra?

    Only fully diagonal two-by-two seeds are accepted.  When ``a11 b22 != a22 b11``
    the same star relations are still formed and compared, which is expected to fail.
    """
    blocks = twist.blocks
    if blocks is None:
        raise TwistError("a two-by-two block description is required")
    C, D, P, Q = blocks.C, blocks.D, blocks.P, blocks.Q
    offdiag = [C[0, 1], C[1, 0], Q[0, 1], Q[1, 0]]
    if any(offdiag) or not D.is_zero() or not P.is_zero():
        raise TwistError("Zhang twist check needs diagonal C and Q with D = P = 0")
    a11, a22, b11, b22 = C[0, 0], C[1, 1], Q[0, 0], Q[1, 1]
    pres = segre_presentation(twist).underlying
    phi = Matrix([[1 / b11, 0, 0, 0], [0, 1 / b22, 0, 0], [0, 0, 1 / a11, 0], [0, 0, 0, 1 / a22]])
    R = pres.relations
    if a11 * b22 == a22 * b11 and R.image(phi.kron(phi)) != R:
        return False
    # a * b = a phi(b): star relations are (1 (x) phi^-1) R
    star = R.image(Matrix.identity(4).kron(phi.inverse()))
    commutative = segre_presentation(
        TwistData(flip_seed(2, 2), twist.presA, twist.presB), check=False
    ).underlying.relations
    return star == commutative
