"""JSON encodings for presentations, twists, certificates and algebras.

Scalars are strings ``"p/q"`` (``"p"`` when ``q = 1``).  Words are lists of
generator names.  Every encoder produces collections in a fixed order so that
``dump_json`` output is byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

from .findim import FinDimAlgebra
from .linalg import Fraction, Matrix, format_scalar, parse_scalar
from .normality import NormalCertificate
from .quadratic import FreeElement, GeneratorSet, QuadraticPresentation
from .twisting import Twist2x2, TwistData, TwistingSeed

__all__ = [
    "InputError",
    "scalar_to_json",
    "scalar_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "element_to_json",
    "element_from_json",
    "presentation_to_json",
    "presentation_from_json",
    "twist_to_json",
    "twist_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "dump_json",
]


class InputError(ValueError):
    """Malformed or inconsistent input payload."""


def scalar_to_json(x) -> str:
    return format_scalar(Fraction(x))


def scalar_from_json(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_scalar(x)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError(f"scalars must be strings like \"p/q\", got {x!r}")


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[scalar_to_json(x) for x in row] for row in m.rows]


def matrix_from_json(data) -> Matrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InputError("a matrix is a non-empty list of rows")
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise InputError("matrix rows have different lengths")
    return Matrix([[scalar_from_json(x) for x in r] for r in data], width)


def element_to_json(gens: GeneratorSet, x: FreeElement) -> list:
    out = []
    for word in sorted(x.coeffs):
        out.append([[gens.names[i] for i in word], scalar_to_json(x.coeffs[word])])
    return out


def element_from_json(gens: GeneratorSet, data) -> FreeElement:
    if not isinstance(data, list) or not data:
        raise InputError("an element is a non-empty list of [word, scalar] pairs")
    coeffs: dict[tuple, Fraction] = {}
    degree = None
    for pair in data:
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], list)):
            raise InputError(f"bad term {pair!r}")
        try:
            word = tuple(gens.index(name) for name in pair[0])
        except (KeyError, ValueError) as exc:
            raise InputError(f"unknown generator in {pair[0]!r}") from exc
        if degree is None:
            degree = len(word)
        elif len(word) != degree:
            raise InputError("element is not homogeneous")
        coeffs[word] = coeffs.get(word, Fraction(0)) + scalar_from_json(pair[1])
    return FreeElement(degree, {w: c for w, c in coeffs.items() if c})


def presentation_to_json(pres: QuadraticPresentation) -> dict:
    gens = pres.gens
    rels = [element_to_json(gens, r) for r in pres.relation_elements()]
    return {"generators": list(gens.names), "relations": rels}


def presentation_from_json(data) -> QuadraticPresentation:
    if not isinstance(data, dict) or "generators" not in data or "relations" not in data:
        raise InputError("a presentation needs 'generators' and 'relations'")
    names = data["generators"]
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names) or not names:
        raise InputError("'generators' must be a non-empty list of names")
    if len(set(names)) != len(names):
        raise InputError("duplicate generator names")
    gens = GeneratorSet(tuple(names))
    rels = [element_from_json(gens, r) for r in data["relations"]]
    if any(r.degree != 2 for r in rels):
        raise InputError("relations must be quadratic")
    return QuadraticPresentation(gens, rels)


def twist_to_json(twist: TwistData) -> dict:
    out: dict[str, Any] = {
        "A": presentation_to_json(twist.presA),
        "B": presentation_to_json(twist.presB),
    }
    t = {"dimV": twist.seed.dimV, "dimU": twist.seed.dimU}
    if twist.blocks is not None:
        b = twist.blocks
        t["blocks"] = {k: matrix_to_json(getattr(b, k)) for k in "CDPQ"}
    else:
        t["matrix"] = matrix_to_json(twist.seed.matrix)
    out["twist"] = t
    return out


def twist_from_json(data) -> TwistData:
    """Decode ``{"A": ..., "B": ..., "twist": {...}}``."""
    from .twisting import TwistError

    if not isinstance(data, dict) or not {"A", "B", "twist"} <= set(data):
        raise InputError("twist input needs 'A', 'B' and 'twist'")
    A = presentation_from_json(data["A"])
    B = presentation_from_json(data["B"])
    t = data["twist"]
    if not isinstance(t, dict):
        raise InputError("'twist' must be an object")
    n, m = t.get("dimV", A.dim), t.get("dimU", B.dim)
    if (n, m) != (A.dim, B.dim):
        raise InputError("dimV/dimU do not match the presentations")
    try:
        if "blocks" in t:
            if (n, m) != (2, 2):
                raise InputError("block form needs dimV = dimU = 2")
            b = t["blocks"]
            blocks = Twist2x2(*(matrix_from_json(b[k]) for k in "CDPQ"))
            return TwistData(blocks.seed(), A, B, blocks=blocks)
        if "matrix" in t:
            return TwistData(TwistingSeed(n, m, matrix_from_json(t["matrix"])), A, B)
    except (TwistError, KeyError) as exc:
        raise InputError(f"bad twist: {exc}") from exc
    raise InputError("'twist' needs 'blocks' or 'matrix'")


def certificate_to_json(cert: NormalCertificate, gens: GeneratorSet) -> dict:
    return {
        "w": element_to_json(gens, cert.w),
        "nu1": matrix_to_json(cert.nu1),
        "checked_degree": cert.checked_degree,
        "regular_window": cert.regular_window,
    }


def certificate_from_json(data, gens: GeneratorSet) -> NormalCertificate:
    try:
        return NormalCertificate(
            element_from_json(gens, data["w"]),
            matrix_from_json(data["nu1"]),
            int(data["checked_degree"]),
            data.get("regular_window"),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad certificate: {exc}") from exc


def algebra_to_json(alg: FinDimAlgebra) -> dict:
    return {
        "dim": alg.dim,
        "unit": [scalar_to_json(x) for x in alg.unit],
        "table": [[[scalar_to_json(x) for x in v] for v in row] for row in alg.constants],
    }


def algebra_from_json(data) -> FinDimAlgebra:
    try:
        dim = int(data["dim"])
        unit = [scalar_from_json(x) for x in data["unit"]]
        table = [[[scalar_from_json(x) for x in v] for v in row] for row in data["table"]]
        return FinDimAlgebra(dim, unit, table)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad algebra: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
