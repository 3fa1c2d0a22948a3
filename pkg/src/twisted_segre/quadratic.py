"""Quadratic algebras ``T(V)/(R)`` given by generators and a relation subspace.

Words are tuples of generator indices.  Every tensor power ``V^{(x)d}`` is
coordinatized lexicographically in the generator order, so word
``(i_1, ..., i_d)`` sits at index ``sum i_k n^(d-k)``.

Normal words are chosen greedily: a word is normal when it is not the
lexicographically largest word of any element of the degree-d relation space.
Normal words are closed under taking prefixes, which lets the quotient be built
one degree at a time from ``A_{d-1} (x) V`` instead of the full ``V^{(x)d}``.
"""

from __future__ import annotations

import itertools
import threading
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .linalg import ONE, ZERO, Fraction, Matrix, Subspace, as_fraction, reduce_rows

__all__ = [
    "GeneratorSet",
    "FreeElement",
    "QuadraticPresentation",
    "DegreeCache",
    "DegreeOverflowError",
    "DegenerateRelationWarning",
    "word_index",
    "index_word",
    "relation_space",
    "hilbert",
    "normal_form",
    "multiply",
    "quadratic_dual",
    "koszul_series_check",
    "add_relation",
    "presentations_equal",
    "substitute",
    "free_algebra",
    "polynomial_ring",
    "reduce_element",
    "element",
]

Word = tuple[int, ...]


class DegreeOverflowError(ValueError):
    """Requested degree lies beyond the configured truncation."""


class DegenerateRelationWarning(UserWarning):
    pass


def word_index(word: Sequence[int], n: int) -> int:
    idx = 0
    for a in word:
        idx = idx * n + a
    return idx


def index_word(idx: int, n: int, d: int) -> Word:
    out = []
    for _ in range(d):
        idx, a = divmod(idx, n)
        out.append(a)
    return tuple(reversed(out))


@dataclass(frozen=True)
class GeneratorSet:
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"generator labels must be distinct: {self.names}")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def parse_word(self, word) -> Word:
        """Accept a tuple/list of labels, or a string when all labels are one character."""
        if isinstance(word, str):
            if all(len(s) == 1 for s in self.names):
                return tuple(self.index(ch) for ch in word)
            return tuple(self.index(s) for s in word.split())
        return tuple(a if isinstance(a, int) else self.index(a) for a in word)

    def format_word(self, word: Word) -> str:
        if all(len(s) == 1 for s in self.names):
            return "".join(self.names[a] for a in word)
        return " ".join(self.names[a] for a in word)


class FreeElement:
    """Homogeneous element of the tensor algebra: a map word -> coefficient."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[Word, Fraction] | None = None):
        self.degree = degree
        clean = {}
        for w, c in (coeffs or {}).items():
            w = tuple(w)
            if len(w) != degree:
                raise ValueError(f"word {w} does not have degree {degree}")
            c = as_fraction(c)
            if c:
                clean[w] = clean.get(w, ZERO) + c
                if not clean[w]:
                    del clean[w]
        self.coeffs = clean

    @classmethod
    def word(cls, word: Sequence[int], coeff=1) -> "FreeElement":
        return cls(len(word), {tuple(word): coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"FreeElement({self.degree}, {self.coeffs})"

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degree")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, ZERO) + c
        return FreeElement(self.degree, out)

    def __neg__(self):
        return FreeElement(self.degree, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        c = as_fraction(c)
        return FreeElement(self.degree, {w: c * v for w, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def concat(self, other: "FreeElement") -> "FreeElement":
        """Product in the free algebra."""
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.coeffs.items():
            for w2, c2 in other.coeffs.items():
                w = w1 + w2
                out[w] = out.get(w, ZERO) + c1 * c2
        return FreeElement(self.degree + other.degree, out)

    def __matmul__(self, other):
        return self.concat(other)

    def vector(self, n: int) -> dict[int, Fraction]:
        return {word_index(w, n): c for w, c in self.coeffs.items()}

    @classmethod
    def from_vector(cls, vec: Mapping[int, Fraction] | Sequence, n: int, degree: int) -> "FreeElement":
        items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
        return cls(degree, {index_word(i, n, degree): c for i, c in items if c})


class QuadraticPresentation:
    """``T(V)/(R)`` with ``R`` a subspace of ``V (x) V``."""

    def __init__(self, gens: GeneratorSet | Sequence[str], relations: Subspace | Iterable):
        if not isinstance(gens, GeneratorSet):
            gens = GeneratorSet(tuple(gens))
        n = gens.dim
        if not isinstance(relations, Subspace):
            rels = []
            for r in relations:
                if isinstance(r, FreeElement):
                    if r.degree != 2:
                        raise ValueError("relations must have degree 2")
                    rels.append(r.vector(n))
                elif isinstance(r, Mapping):
                    rels.append(dict(r))
                else:
                    rels.append({i: as_fraction(x) for i, x in enumerate(r) if x})
            relations = Subspace.from_sparse(n * n, rels)
        if relations.ambient_dim != n * n:
            raise ValueError(f"relation space must live in dimension {n * n}")
        self.gens = gens
        self.relations = relations
        self._store: _Store | None = None
        self._lock = threading.Lock()

    @classmethod
    def from_strings(cls, names: Sequence[str], relations: Iterable[Mapping]) -> "QuadraticPresentation":
        """Relations given as ``{word: coeff}`` maps, e.g. ``{"XY": 1, "YX": -1}``."""
        gens = GeneratorSet(tuple(names))
        return cls(gens, [element(gens, r) for r in relations])

    @property
    def dim(self) -> int:
        return self.gens.dim

    def __repr__(self):
        return f"QuadraticPresentation(gens={self.gens.names}, dim R={self.relations.dim})"

    def relation_elements(self) -> list[FreeElement]:
        n = self.dim
        return [FreeElement.from_vector(r, n, 2) for r in self.relations.sparse_rows()]

    def element(self, coeffs: Mapping) -> FreeElement:
        return element(self.gens, coeffs)

    def degree_cache(self, limit: int = 6) -> "DegreeCache":
        with self._lock:
            if self._store is None:
                self._store = _Store(self)
            self._store.extend(limit)
        return DegreeCache(self._store, limit)


def element(gens: GeneratorSet, coeffs: Mapping) -> FreeElement:
    parsed = {gens.parse_word(w): as_fraction(c) for w, c in coeffs.items()}
    degrees = {len(w) for w in parsed}
    if len(degrees) > 1:
        raise ValueError("element is not homogeneous")
    return FreeElement(degrees.pop() if degrees else 0, parsed)


class _Store:
    """Growing per-presentation tables shared by every DegreeCache view."""

    def __init__(self, pres: QuadraticPresentation):
        n = pres.dim
        self.n = n
        self.rel_rows = pres.relations.sparse_rows()
        self.normal: list[list[Word]] = [[()], [(a,) for a in range(n)]]
        self.index: list[dict[Word, int]] = [{(): 0}, {(a,): a for a in range(n)}]
        # right[d][i * n + g] = normal form of normal[d-1][i] * g, as sparse vector over normal[d]
        self.right: list[list[dict[int, Fraction]] | None] = [None, [{a: ONE} for a in range(n)]]
        self.top = 1

    def extend(self, limit: int):
        while self.top < limit:
            self._build(self.top + 1)

    def _build(self, d: int):
        n = self.n
        prev_right = self.right[d - 1]
        rows = []
        for p in range(len(self.normal[d - 2])):
            for r in self.rel_rows:
                row: dict[int, Fraction] = {}
                for idx, c in r.items():
                    a, b = divmod(idx, n)
                    # normal form of (word p) * a, in degree d-1
                    left = prev_right[p * n + a] if d > 2 else {a: ONE}
                    for i, x in left.items():
                        col = i * n + b
                        row[col] = row.get(col, ZERO) + c * x
                rows.append({k: v for k, v in row.items() if v})
        red, pivots = reduce_rows(rows, pivot="last")
        pivset = set(pivots)
        ncols = len(self.normal[d - 1]) * n
        newidx = {}
        words = []
        for col in range(ncols):
            if col not in pivset:
                i, g = divmod(col, n)
                newidx[col] = len(words)
                words.append(self.normal[d - 1][i] + (g,))
        right: list[dict[int, Fraction]] = []
        pivrow = dict(zip(pivots, red))
        for col in range(ncols):
            if col in newidx:
                right.append({newidx[col]: ONE})
            else:
                right.append({newidx[c]: -v for c, v in pivrow[col].items() if c != col})
        self.normal.append(words)
        self.index.append({w: i for i, w in enumerate(words)})
        self.right.append(right)
        self.top = d


class DegreeCache:
    """Read-only view of normal words and right-multiplication tables up to ``limit``."""

    def __init__(self, store: _Store, limit: int):
        self._s = store
        self.limit = limit
        self.n = store.n

    def _check(self, d: int):
        if d > self.limit:
            raise DegreeOverflowError(f"degree {d} exceeds truncation degree {self.limit}")
        if d < 0:
            raise ValueError("negative degree")

    def normal_words(self, d: int) -> list[Word]:
        self._check(d)
        return list(self._s.normal[d])

    def dim(self, d: int) -> int:
        self._check(d)
        return len(self._s.normal[d])

    def word_position(self, d: int, word: Word) -> int | None:
        self._check(d)
        return self._s.index[d].get(tuple(word))

    def right_multiply(self, d: int, vec: Mapping[int, Fraction], g: int) -> dict[int, Fraction]:
        """(degree-d class) * generator g, as a vector over normal words of degree d+1."""
        self._check(d + 1)
        table = self._s.right[d + 1]
        n = self.n
        out: dict[int, Fraction] = {}
        for i, c in vec.items():
            for j, x in table[i * n + g].items():
                out[j] = out.get(j, ZERO) + c * x
        return {j: v for j, v in out.items() if v}

    def multiply_word(self, d: int, vec: Mapping[int, Fraction], word: Sequence[int]) -> dict[int, Fraction]:
        for g in word:
            vec = self.right_multiply(d, vec, g)
            d += 1
        return dict(vec)

    def reduce(self, x: FreeElement) -> dict[int, Fraction]:
        """Coordinates of the class of ``x`` over normal words of its degree."""
        self._check(x.degree)
        out: dict[int, Fraction] = {}
        for w, c in x.coeffs.items():
            v = self.multiply_word(0, {0: ONE}, w)
            for j, y in v.items():
                out[j] = out.get(j, ZERO) + c * y
        return {j: v for j, v in out.items() if v}

    def to_element(self, d: int, vec: Mapping[int, Fraction]) -> FreeElement:
        words = self._s.normal[d]
        return FreeElement(d, {words[i]: c for i, c in vec.items() if c})

    def projection(self, d: int) -> Matrix:
        """Matrix of ``V^{(x)d} -> span(normal words)`` (rows: normal words, cols: all words)."""
        self._check(d)
        n = self.n
        cols = []
        for idx in range(n**d):
            cols.append(self.multiply_word(0, {0: ONE}, index_word(idx, n, d)))
        h = self.dim(d)
        return Matrix([[cols[c].get(i, ZERO) for c in range(n**d)] for i in range(h)], n**d)


def _cache(pres: QuadraticPresentation, d: int, cache: DegreeCache | None) -> DegreeCache:
    if cache is not None:
        cache._check(d)
        return cache
    return pres.degree_cache(max(d, 2))


def relation_space(pres: QuadraticPresentation, d: int) -> Subspace:
    """Degree-d component of the two-sided ideal generated by the relations."""
    if d < 2:
        raise ValueError("relation spaces start in degree 2")
    cache = pres.degree_cache(d)
    n = pres.dim
    normal = set(cache.normal_words(d))
    rows = []
    for idx in range(n**d):
        w = index_word(idx, n, d)
        if w in normal:
            continue
        nf = cache.multiply_word(0, {0: ONE}, w)
        words = cache.normal_words(d)
        row = {idx: ONE}
        for j, c in nf.items():
            row[word_index(words[j], n)] = -c
        rows.append(row)
    return Subspace.from_sparse(n**d, rows)


def hilbert(pres: QuadraticPresentation, d: int) -> int:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return pres.degree_cache(max(d, 1)).dim(d)


def normal_form(pres: QuadraticPresentation, cache: DegreeCache, x: FreeElement) -> dict[int, Fraction]:
    """Class of ``x`` over the normal words of its degree (empty dict means zero)."""
    return cache.reduce(x)


def reduce_element(pres: QuadraticPresentation, x: FreeElement, cache: DegreeCache | None = None) -> FreeElement:
    cache = _cache(pres, x.degree, cache)
    return cache.to_element(x.degree, cache.reduce(x))


def multiply(pres: QuadraticPresentation, x: FreeElement, y: FreeElement, cache: DegreeCache | None = None) -> FreeElement:
    """Product in the quotient, returned as a combination of normal words."""
    d = x.degree + y.degree
    cache = _cache(pres, d, cache)
    left = cache.reduce(x)
    out: dict[int, Fraction] = {}
    for w, c in y.coeffs.items():
        for j, v in cache.multiply_word(x.degree, left, w).items():
            out[j] = out.get(j, ZERO) + c * v
    return cache.to_element(d, out)


def _dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def quadratic_dual(pres: QuadraticPresentation, star: bool = True) -> QuadraticPresentation:
    """``T(V*)/(R^perp)``.  Labels gain a trailing ``*`` (or lose one) when ``star``."""
    names = tuple(_dual_name(s) for s in pres.gens.names) if star else pres.gens.names
    return QuadraticPresentation(GeneratorSet(names), pres.relations.annihilator())


def koszul_series_check(pres: QuadraticPresentation, N: int, dual: QuadraticPresentation | None = None) -> bool:
    """Check ``H_A(t) H_{A!}(-t) = 1`` through degree N."""
    dual = dual or quadratic_dual(pres)
    ha = [hilbert(pres, i) for i in range(N + 1)]
    hd = [hilbert(dual, i) for i in range(N + 1)]
    for m in range(N + 1):
        total = sum((-1) ** j * ha[m - j] * hd[j] for j in range(m + 1))
        if total != (1 if m == 0 else 0):
            return False
    return True


def add_relation(pres: QuadraticPresentation, w: FreeElement) -> QuadraticPresentation:
    if w.degree != 2:
        raise ValueError("added relation must have degree 2")
    vec = w.vector(pres.dim)
    if pres.relations.contains(vec):
        warnings.warn("relation already lies in the relation space", DegenerateRelationWarning, stacklevel=2)
        return pres
    rels = pres.relations + Subspace.from_sparse(pres.dim**2, [vec])
    return QuadraticPresentation(pres.gens, rels)


def presentations_equal(p1: QuadraticPresentation, p2: QuadraticPresentation, identification: Mapping[str, str] | None = None) -> bool:
    """Compare relation spaces after renaming generators of ``p1`` via ``identification``."""
    if p1.dim != p2.dim:
        raise ValueError("presentations have different generator counts")
    if identification is None:
        identification = dict(zip(p1.gens.names, p2.gens.names))
    if set(identification) != set(p1.gens.names) or sorted(identification.values()) != sorted(p2.gens.names):
        raise ValueError("identification is not a bijection between generator sets")
    perm = [p2.gens.index(identification[s]) for s in p1.gens.names]
    n = p1.dim
    rows = []
    for r in p1.relations.sparse_rows():
        new = {}
        for idx, c in r.items():
            a, b = divmod(idx, n)
            new[perm[a] * n + perm[b]] = c
        rows.append(new)
    return Subspace.from_sparse(n * n, rows) == p2.relations


def substitute(pres: QuadraticPresentation, matrix: Matrix, names: Sequence[str] | None = None) -> QuadraticPresentation:
    """Image of the relations under the linear map sending generator ``j`` to column ``j`` of ``matrix``."""
    n = pres.dim
    if matrix.shape != (n, n):
        raise ValueError("substitution matrix has the wrong shape")
    big = matrix.kron(matrix)
    gens = GeneratorSet(tuple(names)) if names else pres.gens
    return QuadraticPresentation(gens, pres.relations.image(big))


def free_algebra(names: Sequence[str]) -> QuadraticPresentation:
    gens = GeneratorSet(tuple(names))
    return QuadraticPresentation(gens, Subspace.zero(gens.dim**2))


def polynomial_ring(names: Sequence[str]) -> QuadraticPresentation:
    gens = GeneratorSet(tuple(names))
    n = gens.dim
    rels = [{i * n + j: ONE, j * n + i: -ONE} for i, j in itertools.combinations(range(n), 2)]
    return QuadraticPresentation(gens, Subspace.from_sparse(n * n, rels))
