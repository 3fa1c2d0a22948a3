"""Command-line pipeline: twist -> Segre presentation -> dual -> normal element -> C(A) -> analysis.

Every stage reads JSON and writes JSON.  A stage output carries the inputs it
was computed from, so it can be fed to the next stage or re-run in place.

Exit codes: 0 pass, 1 input or configuration error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import io
from .clifford import StabilizationError, clifford_algebra, stabilize
from .family import RHO, DiagonalInstance
from .findim import NotSemisimpleError, center, radical, verify_explicit_iso, wedderburn_type
from .io import InputError, dump_json
from .linalg import Fraction, Matrix
from .normality import (
    NormalityError,
    extend_automorphism,
    left_action,
    regularity_window,
    search_normal_degree2,
    verify_normal,
)
from .quadratic import QuadraticPresentation, hilbert, koszul_series_check, polynomial_ring, quadratic_dual
from .segre import cross_validate, density_window_check, segre_presentation, smash_truncation, zhang_twist_check
from .twisting import Twist2x2, TwistData, TwistError, flip_seed, validate_2x2, validate_descent

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2

STAGES = ("validate", "segre", "dual", "normal", "clifford", "analyze", "density")


class ValidationFailure(Exception):
    """Mathematical check failed; carries the report to emit."""

    def __init__(self, report: dict):
        super().__init__(report.get("error", "validation failure"))
        self.report = report


# ---------------------------------------------------------------- helpers


def _load(path: str | None) -> Any:
    if path is None:
        raise InputError("--input is required")
    p = Path(path)
    if not p.is_file():
        raise InputError(f"input file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _presentation_of(data: dict) -> QuadraticPresentation:
    if "presentation" in data:
        return io.presentation_from_json(data["presentation"])
    if "generators" in data:
        return io.presentation_from_json(data)
    raise InputError("input carries no presentation")


def _carry(data: dict, *keys: str) -> dict:
    return {k: data[k] for k in keys if k in data}


def _hilbert_table(pres: QuadraticPresentation, N: int) -> list[int]:
    return [hilbert(pres, d) for d in range(N + 1)]


def _diagonal_instance(data: dict) -> DiagonalInstance | None:
    """The lower-triangular family member described by a carried twist, if any."""
    t = data.get("twist")
    if not isinstance(t, dict) or "blocks" not in t:
        return None
    try:
        blocks = Twist2x2(*(io.matrix_from_json(t["blocks"][k]) for k in "CDPQ"))
    except (KeyError, TwistError, InputError):
        return None
    if not (blocks.D.is_zero() and blocks.P.is_zero()):
        return None
    try:
        return DiagonalInstance.from_matrices(blocks.C, blocks.Q)
    except ValueError:
        return None


# ---------------------------------------------------------------- stages


def cmd_validate_twist(data: dict, args) -> dict:
    twist = io.twist_from_json(data)
    descent = validate_descent(twist)
    report: dict[str, Any] = {
        "stage": "validate",
        "descent": {"passed": descent.passed, "b_side": descent.b_side, "a_side": descent.a_side},
    }
    passed = descent.passed
    if twist.blocks is not None:
        try:
            two = validate_2x2(twist.blocks)
            report["block_conditions"] = two
            passed = passed and two["passed"]
            report["criteria_agree"] = two["passed"] == descent.passed
        except TwistError as exc:
            report["block_conditions"] = {"error": str(exc)}
    report["passed"] = passed
    if not passed:
        raise ValidationFailure(report)
    return report


def cmd_segre(data: dict, args) -> dict:
    twist = io.twist_from_json(data)
    N = args.max_degree
    descent = validate_descent(twist)
    if not descent.passed:
        raise ValidationFailure({"stage": "segre", "passed": False, "error": "seed does not descend to the quotients"})
    built = segre_presentation(twist, check=False).underlying
    given = io.presentation_from_json(data["presentation"]) if "presentation" in data else None
    pres = given if given is not None else built
    xv = cross_validate(twist, N, presentation=pres)
    report = {
        "stage": "segre",
        "max_degree": N,
        **_carry(data, "A", "B", "twist"),
        "presentation": io.presentation_to_json(pres),
        "relation_count": pres.relations.dim,
        "hilbert": _hilbert_table(pres, N),
        "cross_validation": _jsonable(xv),
        "matches_construction": given is None or given.relations == built.relations,
    }
    if twist.blocks is not None:
        b = twist.blocks
        if b.D.is_zero() and b.P.is_zero() and b.C[1, 0] == 0 and b.Q[1, 0] == 0:
            report["zhang_twist_commutative"] = zhang_twist_check(twist)
    report["passed"] = bool(xv["passed"] and report["matches_construction"])
    if not report["passed"]:
        raise ValidationFailure(report)
    return report


def cmd_density(data: dict, args) -> dict:
    twist = io.twist_from_json(data)
    J = args.window
    trunc = smash_truncation(twist, max(abs(args.i), abs(args.s), 1), J)
    res = density_window_check(trunc, args.i, args.s)
    report = {"stage": "density", "max_degree": J, **_carry(data, "A", "B", "twist"), "window": _jsonable(res)}
    report["passed"] = bool(res["finite_defect"])
    if not report["passed"]:
        raise ValidationFailure(report)
    return report


def cmd_dual(data: dict, args) -> dict:
    N = args.max_degree
    if data.get("stage") == "dual":
        source = io.presentation_from_json(data["source"])
    else:
        source = _presentation_of(data)
    dual = quadratic_dual(source, star=False)
    report = {
        "stage": "dual",
        "subject": "dual",
        "max_degree": N,
        **_carry(data, "A", "B", "twist"),
        "source": io.presentation_to_json(source),
        "presentation": io.presentation_to_json(dual),
        "relation_count": dual.relations.dim,
        "hilbert": _hilbert_table(dual, N),
        "source_hilbert": _hilbert_table(source, N),
        "koszul_numeric_identity": koszul_series_check(source, N, dual=dual),
    }
    report["passed"] = report["koszul_numeric_identity"]
    if not report["passed"]:
        raise ValidationFailure(report)
    return report


def _find_w(data: dict, pres: QuadraticPresentation, N: int):
    if "w" in data:
        return io.element_from_json(pres.gens, data["w"]), "given"
    cert = data.get("certificate")
    if isinstance(cert, dict) and "w" in cert:
        return io.element_from_json(pres.gens, cert["w"]), "given"
    support = data.get("support")
    target = io.presentation_from_json(data["target"]) if "target" in data else None
    if support is None:
        inst = _diagonal_instance(data)
        if inst is None or data.get("subject") != "dual":
            raise InputError("input needs 'w', or 'support' for a search")
        support = ["ZY", "YW", "YZ"]
        target = quadratic_dual(inst.regular_base(), star=False)
    found = search_normal_degree2(pres, support, N=3, target=target)
    if found.degenerate or len(found) != 1:
        raise ValidationFailure(
            {
                "stage": "normal",
                "passed": False,
                "error": "search did not isolate a single normal element",
                "search": {"certificates": len(found), "all_normal": found.all_normal, "family": found.family},
            }
        )
    return found.certificates[0].w, "search"


def cmd_normal(data: dict, args) -> dict:
    N = args.max_degree
    pres = _presentation_of(data)
    w, origin = _find_w(data, pres, N)
    try:
        cert = verify_normal(pres, w, N)
    except NormalityError as exc:
        raise ValidationFailure(
            {
                "stage": "normal",
                "passed": False,
                "error": str(exc),
                "kind": exc.kind,
                "defect": _jsonable(exc.defect),
                "w": io.element_to_json(pres.gens, w),
            }
        ) from exc
    reg = regularity_window(pres, cert.w, N)
    from dataclasses import replace

    cert = replace(cert, regular_window=reg["regular"])
    report = {
        "stage": "normal",
        "subject": data.get("subject", "algebra"),
        "max_degree": N,
        **_carry(data, "A", "B", "twist", "source"),
        "presentation": io.presentation_to_json(pres),
        "w_origin": origin,
        "certificate": io.certificate_to_json(cert, pres.gens),
        "left_action": io.matrix_to_json(left_action(cert)),
        "induces_automorphism": extend_automorphism(pres, cert.nu1),
        "regularity": reg,
    }
    report["passed"] = bool(reg["regular"] and report["induces_automorphism"])
    if not report["passed"]:
        raise ValidationFailure(report)
    return report


def cmd_clifford(data: dict, args) -> dict:
    pres = _presentation_of(data)
    if "certificate" not in data:
        raise InputError("clifford needs the output of the normal stage")
    cert = io.certificate_from_json(data["certificate"], pres.gens)
    try:
        stab = stabilize(pres, cert, args.max_stab)
    except StabilizationError as exc:
        raise ValidationFailure(
            {"stage": "clifford", "passed": False, "error": str(exc), "dims": list(exc.dims or ())}
        ) from exc
    cl = clifford_algebra(pres, cert, stab)
    base = cl.base
    report = {
        "stage": "clifford",
        "max_degree": data.get("max_degree", args.max_degree),
        **_carry(data, "A", "B", "twist"),
        "presentation": io.presentation_to_json(pres),
        "certificate": data["certificate"],
        "stabilization": {"i0": stab.i0, "dims": list(stab.dims)},
        "level": cl.level,
        "basis": [[pres.gens.names[a] for a in word] for word in cl.basis_words],
        **io.algebra_to_json(base),
        "associative": base.is_associative(),
        "unital": base.is_unital(),
    }
    report["passed"] = report["associative"] and report["unital"]
    if not report["passed"]:
        raise ValidationFailure(report)
    return report


def _assignment_pairs(payload: dict, clifford_data: dict) -> list:
    """Turn an assignment file into ``(coordinates, images)`` pairs."""
    if not isinstance(payload, dict) or not isinstance(payload.get("elements"), list):
        raise InputError("assignment file needs an 'elements' list")
    cl = None
    pairs = []
    for entry in payload["elements"]:
        images = tuple(io.matrix_from_json(m) for m in entry["image"])
        if "coords" in entry:
            coords = tuple(io.scalar_from_json(x) for x in entry["coords"])
        else:
            if cl is None:
                cl = _rebuild_clifford(clifford_data)
            num = io.element_from_json(cl.pres.gens, entry["numerator"])
            coords = cl.class_of(int(entry["level"]), num)
        pairs.append((coords, images))
    return pairs


def _rebuild_clifford(data: dict):
    from .clifford import CliffordAlgebra

    if not {"presentation", "certificate", "level"} <= set(data):
        raise InputError("symbolic assignments need the clifford stage output as input")
    pres = io.presentation_from_json(data["presentation"])
    cert = io.certificate_from_json(data["certificate"], pres.gens)
    return CliffordAlgebra(pres, cert, int(data["level"]), io.algebra_from_json(data))


def cmd_analyze(data: dict, args) -> dict:
    alg_data = data["algebra"] if data.get("stage") == "analyze" else data
    alg = io.algebra_from_json(alg_data)
    rad = radical(alg)
    report: dict[str, Any] = {
        "stage": "analyze",
        "max_degree": data.get("max_degree", args.max_degree),
        **_carry(data, "twist"),
        "algebra": {k: alg_data[k] for k in ("dim", "unit", "table", "presentation", "certificate", "level") if k in alg_data},
        "dim": alg.dim,
        "radical_dim": rad.dim,
        "semisimple": rad.dim == 0,
        "center_dim": center(alg).dim,
    }
    try:
        wt = wedderburn_type(alg)
        report["blocks"] = wt.as_dict()["blocks"]
        report["split_over_rationals"] = wt.split_over_rationals
        report["obstructions"] = wt.obstructions
    except NotSemisimpleError:
        report["blocks"] = None
    passed = True
    if args.assignment:
        pairs = _assignment_pairs(_load(args.assignment), alg_data)
        try:
            report["iso_verified"] = verify_explicit_iso(alg, pairs)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        passed = report["iso_verified"]
    report["passed"] = passed
    if not passed:
        raise ValidationFailure(report)
    return report


# summary rows of the consolidated report
CLAIMS = [
    ("twist_conditions", "validate", None),
    ("segre_presentation_and_hilbert_series", "segre", None),
    ("koszul_dual_presentation", "dual", None),
    ("normal_element_of_regular_algebra", "normal", "algebra"),
    ("normal_element_of_dual", "normal", "dual"),
    ("clifford_algebra", "clifford", None),
    ("semisimple_type_of_clifford_algebra", "analyze", None),
    ("density_window", "density", None),
]


def _summarize(claim: str, doc: dict) -> dict:
    out: dict[str, Any] = {"passed": doc.get("passed")}
    for key in ("hilbert", "relation_count", "koszul_numeric_identity", "stabilization", "dim", "blocks", "center_dim", "iso_verified", "semisimple"):
        if key in doc:
            out[key] = doc[key]
    if "certificate" in doc and doc.get("stage") == "normal":
        out["nu1"] = doc["certificate"]["nu1"]
        out["regular"] = doc["regularity"]["regular"]
    return out


def cmd_report(args) -> dict:
    if args.input is None or not Path(args.input).is_dir():
        raise InputError("report needs --input DIR with stage outputs")
    docs: dict[tuple, dict] = {}
    sources: dict[tuple, str] = {}
    for p in sorted(Path(args.input).glob("*.json")):
        try:
            doc = json.loads(p.read_text())
        except json.JSONDecodeError:
            continue
        if not isinstance(doc, dict) or doc.get("stage") not in STAGES:
            continue
        key = (doc["stage"], doc.get("subject") if doc["stage"] == "normal" else None)
        docs[key] = doc
        sources[key] = p.name
    summary: dict[str, Any] = {}
    missing = []
    for claim, stage, subject in CLAIMS:
        doc = docs.get((stage, subject))
        if doc is None:
            summary[claim] = "absent"
            missing.append(claim)
        else:
            summary[claim] = _summarize(claim, doc)
    degrees = sorted({d["max_degree"] for d in docs.values() if isinstance(d.get("max_degree"), int) and d["stage"] != "density"})
    warnings = []
    if len(degrees) > 1:
        warnings.append(f"conflicting max_degree across stages: {degrees}")
    present = [s for s in summary.values() if s != "absent"]
    return {
        "stage": "report",
        "summary": summary,
        "missing": missing,
        "complete": not missing,
        "warnings": warnings,
        "max_degree_conflict": len(degrees) > 1,
        "certificate_horizon": degrees,
        "sources": {f"{k[0]}{'/' + k[1] if k[1] else ''}": v for k, v in sorted(sources.items(), key=lambda kv: str(kv[0]))},
        "all_passed": bool(present) and all(s.get("passed") for s in present),
    }


# ---------------------------------------------------------------- fixtures

FIXTURES = {
    "flip": None,
    "unipotent": ([[1, 0], [1, 1]], [[1, 0], [1, 1]]),
    "diagonal": ([[1, 0], [0, 2]], [[3, 0], [0, 1]]),
    "zhang": ([[2, 0], [0, 1]], [[2, 0], [0, 1]]),
    "noncommuting": ([[1, 0], [1, 1]], [[1, 0], [0, 2]]),
}


def _fixture_twist(name: str) -> TwistData:
    A, B = polynomial_ring("uv"), polynomial_ring("xy")
    if name == "flip":
        return TwistData(flip_seed(2, 2), A, B, blocks=Twist2x2.diagonal(Matrix.identity(2), Matrix.identity(2)))
    C, Q = FIXTURES[name]
    t = Twist2x2.diagonal(C, Q)
    return TwistData(t.seed(), A, B, blocks=t)


def assignment_json(inst: DiagonalInstance) -> dict:
    from .family import GENS

    names = ["1", "t1", "t2", "t3", "t4", "t5", "t6", "t7"]
    elements = [{"name": "1", "level": 0, "numerator": [[[], "1"]], "image": [io.matrix_to_json(m) for m in RHO[0]]}]
    for name, (level, num), img in zip(names[1:], inst.t_elements(), RHO[1:]):
        elements.append(
            {"name": name, "level": level, "numerator": io.element_to_json(GENS, num), "image": [io.matrix_to_json(m) for m in img]}
        )
    return {"elements": elements}


def cmd_fixture(args) -> dict:
    if args.coeffs:
        try:
            vals = [io.scalar_from_json(x) for x in args.coeffs.split(",")]
            inst = DiagonalInstance(*vals)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad --coeffs: {exc}") from exc
        t = inst.blocks()
        twist = TwistData(t.seed(), polynomial_ring("uv"), polynomial_ring("xy"), blocks=t)
    else:
        if args.name not in FIXTURES:
            raise InputError(f"unknown fixture {args.name!r}; choose from {sorted(FIXTURES)}")
        twist = _fixture_twist(args.name)
        inst = None
        if args.name != "noncommuting":
            b = twist.blocks
            inst = DiagonalInstance.from_matrices(b.C, b.Q)
    out = {"twist.json": io.twist_to_json(twist)}
    if inst is not None:
        out["base.json"] = {
            "subject": "algebra",
            "presentation": io.presentation_to_json(inst.regular_base()),
            "w": io.element_to_json(inst.regular_base().gens, inst.f7()),
        }
        out["assignment.json"] = assignment_json(inst)
    return out


# ---------------------------------------------------------------- driver


def _jsonable(x):
    if isinstance(x, Fraction):
        return io.scalar_to_json(x)
    if isinstance(x, Matrix):
        return io.matrix_to_json(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render_text(report: dict) -> str:
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, (dict, list)) and len(json.dumps(val)) > 100:
            if isinstance(val, dict):
                lines.append(f"{key}:")
                for k in sorted(val):
                    lines.append(f"  {k}: {json.dumps(val[k], sort_keys=True)}")
            else:
                lines.append(f"{key}: [{len(val)} entries]")
        else:
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twisted-segre", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, assignment=False):
        p.add_argument("--input", help="input JSON (a directory for report)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--max-degree", type=int, default=6)
        p.add_argument("--max-stab", type=int, default=6)
        p.add_argument("--format", choices=("json", "text"), default="json")
        if assignment:
            p.add_argument("--assignment", help="JSON assignment for the isomorphism check")
        return p

    common(sub.add_parser("validate-twist", help="check a twisting seed"))
    common(sub.add_parser("segre", help="presentation, Hilbert table and cross-validation"))
    common(sub.add_parser("dual", help="quadratic dual and the Koszul numeric identity"))
    common(sub.add_parser("normal", help="normal element certificate and regularity window"))
    common(sub.add_parser("clifford", help="structure constants of the degree-zero localization"))
    common(sub.add_parser("analyze", help="radical, center, block type"), assignment=True)
    common(sub.add_parser("report", help="merge a directory of stage outputs"))
    d = common(sub.add_parser("density", help="density window of the smash product"))
    d.add_argument("--i", type=int, default=1)
    d.add_argument("--s", type=int, default=-1)
    d.add_argument("--window", type=int, default=4)
    f = sub.add_parser("fixture", help="write twist, base algebra and assignment files")
    f.add_argument("name", nargs="?", default="unipotent")
    f.add_argument("--coeffs", help="a11,a21,a22,b11,b21,b22")
    f.add_argument("--output", required=True, help="directory to write into")
    return parser


HANDLERS = {
    "validate-twist": cmd_validate_twist,
    "segre": cmd_segre,
    "dual": cmd_dual,
    "normal": cmd_normal,
    "clifford": cmd_clifford,
    "analyze": cmd_analyze,
    "density": cmd_density,
}


def _emit(report: dict, args, code: int = 0) -> int:
    """Write the report to --output (or stdout); return ``code``, or 1 if writing fails."""
    text = dump_json(report) if getattr(args, "format", "json") == "json" else render_text(report)
    if not getattr(args, "output", None):
        sys.stdout.write(text)
        return code
    out = Path(args.output)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    except OSError as exc:
        sys.stderr.write(f"error [{args.command}]: cannot write {out}: {exc}\n")
        return EXIT_INPUT
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fixture":
            out_dir = Path(args.output)
            files = cmd_fixture(args)
            out_dir.mkdir(parents=True, exist_ok=True)
            for name, payload in files.items():
                (out_dir / name).write_text(dump_json(payload))
            sys.stdout.write(dump_json({"written": sorted(files)}))
            return EXIT_OK
        if args.max_degree < 2:
            raise InputError("--max-degree must be at least 2")
        if args.command == "report":
            return _emit(cmd_report(args), args, EXIT_OK)
        data = _load(args.input)
        if not isinstance(data, dict):
            raise InputError("input must be a JSON object")
        report = HANDLERS[args.command](data, args)
    except ValidationFailure as exc:
        report = dict(exc.report)
        report.setdefault("passed", False)
        return _emit(_jsonable(report), args, EXIT_FAIL)
    except (InputError, TwistError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error [{args.command}]: {exc}\n")
        return EXIT_INPUT
    return _emit(_jsonable(report), args, EXIT_OK)


if __name__ == "__main__":
    sys.exit(main())
