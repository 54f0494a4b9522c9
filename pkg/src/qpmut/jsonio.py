"""Normalized JSON wire formats shared by the CLI and the HTTP service.

Normalization rules: object keys sorted, rationals as decimal-free strings
in lowest terms, arrows sorted by id, vertices ascending, potential terms
sorted by cycle.  The same input always serializes to the same bytes, which
is what golden tests and the UI diff against.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from fractions import Fraction

from .errors import MalformedInput
from .graded import GradedQP, PresentedAlgebra, make_graded
from .paths import DEFAULT_TRUNCATION, make_element, make_potential
from .qp import QP, ReductionReport
from .quiver import Arrow, ExchangeMatrix, Quiver
from .surface import Side, Triangulation

_FRAC_RE = re.compile(r"^-?\d+(/\d+)?$")


def default_truncation() -> int:
    env = os.environ.get("QPMUT_TRUNCATION")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise MalformedInput(f"QPMUT_TRUNCATION={env!r} is not an integer")
        if n < 1:
            raise MalformedInput("QPMUT_TRUNCATION must be >= 1")
        return n
    return DEFAULT_TRUNCATION


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _FRAC_RE.match(s):
        raise MalformedInput(f"bad rational {s!r}, expected 'p' or 'p/q'")
    return Fraction(s)


def canonical_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def state_hash(obj) -> str:
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()


# ---------------------------------------------------------------------------
# quivers


def quiver_to_json(q: Quiver) -> dict:
    return {
        "vertices": sorted(q.vertices),
        "arrows": [
            {"id": a.id, "source": a.source, "target": a.target}
            for a in sorted(q.arrows, key=lambda a: a.id)
        ],
    }


def quiver_from_json(obj: dict) -> Quiver:
    try:
        vertices = tuple(int(v) for v in obj["vertices"])
        arrows = tuple(
            Arrow(str(a["id"]), int(a["source"]), int(a["target"]))
            for a in obj.get("arrows", [])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad quiver JSON: {exc}")
    if any(v < 1 for v in vertices):
        raise MalformedInput("vertex ids must be positive integers")
    return Quiver(vertices, arrows)


def matrix_to_json(b: ExchangeMatrix) -> dict:
    return {"matrix": [list(r) for r in b.matrix], "vertex_order": list(b.vertex_order)}


def matrix_from_json(obj: dict) -> ExchangeMatrix:
    try:
        rows = tuple(tuple(int(x) for x in row) for row in obj["matrix"])
        order = tuple(int(v) for v in obj["vertex_order"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad matrix JSON: {exc}")
    return ExchangeMatrix(rows, order)


# ---------------------------------------------------------------------------
# potentials / QPs


def potential_terms_to_json(qp: QP) -> list:
    return [
        {"coeff": frac_str(coeff), "cycle": list(cycle)}
        for cycle, coeff in sorted(qp.potential.terms)
    ]


def qp_to_json(qp: QP) -> dict:
    out = quiver_to_json(qp.quiver)
    out["potential"] = potential_terms_to_json(qp)
    out["truncation"] = qp.potential.truncation
    return out


def qp_from_json(obj: dict) -> QP:
    q = quiver_from_json(obj)
    trunc = int(obj.get("truncation", default_truncation()))
    raw = []
    for term in obj.get("potential", []):
        try:
            raw.append((parse_frac(term["coeff"]), tuple(str(a) for a in term["cycle"])))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad potential term: {exc}")
    return QP(q, make_potential(q, raw, trunc))


def graded_to_json(g: GradedQP) -> dict:
    out = qp_to_json(g.qp)
    deg = g.degree_map()
    for a in out["arrows"]:
        a["degree"] = deg[a["id"]]
    return out


def graded_from_json(obj: dict) -> GradedQP:
    qp = qp_from_json(obj)
    try:
        degrees = {str(a["id"]): int(a["degree"]) for a in obj["arrows"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad degree data: {exc}")
    return make_graded(qp, degrees)


def report_to_json(rep: ReductionReport) -> dict:
    return {
        "eliminated": [list(pair) for pair in rep.eliminated],
        "substitutions": [
            {
                "arrow": arrow_id,
                "value": [
                    {"coeff": frac_str(c), "path": list(p)}
                    for p, c in sorted(el.terms)
                ],
            }
            for arrow_id, el in rep.substitutions
        ],
        "truncation_losses": rep.lost,
    }


# ---------------------------------------------------------------------------
# presented algebras


def algebra_to_json(alg: PresentedAlgebra) -> dict:
    out = quiver_to_json(alg.quiver)
    out["relations"] = [
        [
            {"coeff": frac_str(c), "path": list(p)}
            for p, c in sorted(r.terms)
        ]
        for r in alg.relations
    ]
    return out


def algebra_from_json(obj: dict) -> PresentedAlgebra:
    q = quiver_from_json(obj)
    relations = []
    for rel in obj.get("relations", []):
        terms = []
        for term in rel:
            try:
                terms.append((parse_frac(term["coeff"]), tuple(str(a) for a in term["path"])))
            except (KeyError, TypeError) as exc:
                raise MalformedInput(f"bad relation term: {exc}")
        if not terms or not terms[0][1]:
            raise MalformedInput("empty relation")
        from .paths import path_ends

        src, tgt = path_ends(q, terms[0][1])
        relations.append(make_element(q, src, tgt, terms))
    return PresentedAlgebra(q, tuple(relations))


# ---------------------------------------------------------------------------
# triangulations


def triangulation_to_json(t: Triangulation) -> dict:
    def rot(tri):
        k = tri.index(min(tri))
        return list(tri[k:] + tri[:k])

    return {
        "sides": [
            {"id": s.id, "kind": s.kind} for s in sorted(t.sides, key=lambda s: s.id)
        ],
        "triangles": sorted(rot(tri) for tri in t.triangles),
    }


def triangulation_from_json(obj: dict) -> Triangulation:
    try:
        sides = tuple(Side(str(s["id"]), str(s["kind"])) for s in obj["sides"])
        triangles = tuple(
            tuple(str(x) for x in tri) for tri in obj["triangles"]
        )
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad triangulation JSON: {exc}")
    return Triangulation(sides, triangles)


# ---------------------------------------------------------------------------
# polymorphic session states


def detect_kind(obj: dict) -> str:
    if not isinstance(obj, dict):
        raise MalformedInput("state must be a JSON object")
    if "sides" in obj:
        return "triangulation"
    if "arrows" in obj and any("degree" in a for a in obj.get("arrows", [])):
        return "graded"
    if "potential" in obj:
        return "qp"
    if "vertices" in obj:
        return "quiver"
    raise MalformedInput("unrecognized state JSON")


def state_from_json(obj: dict):
    kind = detect_kind(obj)
    if kind == "triangulation":
        return kind, triangulation_from_json(obj)
    if kind == "graded":
        return kind, graded_from_json(obj)
    if kind == "qp":
        return kind, qp_from_json(obj)
    return kind, quiver_from_json(obj)


def state_to_json(kind: str, state) -> dict:
    if kind == "triangulation":
        return triangulation_to_json(state)
    if kind == "graded":
        return graded_to_json(state)
    if kind == "qp":
        return qp_to_json(state)
    return quiver_to_json(state)
