"""JSON model files.

Four kinds are understood: ``premetric_group``, ``pointed_category``,
``graded_fusion_ring`` and ``zesting_datum``.  Unknown fields are rejected.
Errors carry a JSON path (``$.q``, ``$.N[3]``) or, for malformed JSON, a
line and column.  Emission is deterministic and ``emit(parse(emit(x)))``
is byte-identical to ``emit(x)``.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import lcm
from typing import Any

from .abgroup import FinAbGroup, Hom
from .errors import ValidationError
from .fusion import GradedFusionRing, element_label, validate_fusion_ring
from .metric import PreMetricGroup, format_phase, parse_phase, validate_premetric
from .pointed import PointedCategory
from .zest import Cochain, ZestingDatum, phase_lattice

KINDS = ("premetric_group", "pointed_category", "graded_fusion_ring", "zesting_datum")

_FIELDS = {
    "premetric_group": ({"kind", "invariant_factors", "q"}, {"name"}),
    "pointed_category": ({"kind", "invariant_factors", "q", "B", "z", "embedding"}, {"name"}),
    "graded_fusion_ring": ({"kind", "grading_group", "basis", "grade", "unit", "N"},
                           {"name", "dual", "B", "bz", "twists"}),
    "zesting_datum": ({"kind", "G", "B", "z", "lambda", "nu"}, {"name", "t"}),
}


class ModelError(ValidationError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ModelFile:
    kind: str
    name: str
    value: Any


def _int_list(doc, key, path="$") -> list[int]:
    v = doc[key]
    p = f"{path}.{key}"
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise ModelError(p, "expected a list of integers")
    return v


def _group(doc, key) -> FinAbGroup:
    try:
        return FinAbGroup(tuple(_int_list(doc, key)))
    except ModelError:
        raise
    except ValidationError as e:
        raise ModelError(f"$.{key}", str(e)) from None


def _element(G: FinAbGroup, v, path) -> tuple:
    if not isinstance(v, list) or len(v) != G.rank or \
            any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise ModelError(path, f"expected {G.rank} integer coefficients")
    return G.reduce(v)


def _phases(v, path) -> list[Fraction]:
    if not isinstance(v, list):
        raise ModelError(path, "expected a list of fraction strings")
    out = []
    for i, s in enumerate(v):
        try:
            out.append(parse_phase(s))
        except ValidationError as e:
            raise ModelError(f"{path}[{i}]", str(e)) from None
    return out


def _premetric(doc) -> PreMetricGroup:
    E = _group(doc, "invariant_factors")
    q = _phases(doc["q"], "$.q")
    if len(q) != E.order:
        raise ModelError("$.q", f"q table has {len(q)} entries, group has order {E.order}")
    try:
        return validate_premetric(E, q, doc.get("name", ""))
    except ValidationError as e:
        raise ModelError("$.q", str(e)) from None


def _pointed(doc) -> PointedCategory:
    P = _premetric(doc)
    B = _group(doc, "B")
    z = _element(B, doc["z"], "$.z")
    emb = doc["embedding"]
    if not isinstance(emb, list) or any(not isinstance(r, list) for r in emb):
        raise ModelError("$.embedding", "expected an integer matrix")
    try:
        iota = Hom.from_matrix(B, P.group, emb)
    except ValidationError as e:
        raise ModelError("$.embedding", str(e)) from None
    try:
        return PointedCategory(P, B, z, iota, doc.get("name", ""))
    except ValidationError as e:
        raise ModelError("$.embedding", str(e)) from None


def _label_map(doc, key, basis) -> dict:
    v = doc[key]
    if not isinstance(v, dict):
        raise ModelError(f"$.{key}", "expected an object keyed by basis labels")
    for l in v:
        if l not in basis:
            raise ModelError(f"$.{key}.{l}", "unknown basis label")
    return v


def _ring(doc) -> GradedFusionRing:
    G = _group(doc, "grading_group")
    basis = doc["basis"]
    if not isinstance(basis, list) or any(not isinstance(l, str) for l in basis):
        raise ModelError("$.basis", "expected a list of label strings")
    grade = _label_map(doc, "grade", basis)
    for l in basis:
        if l not in grade:
            raise ModelError(f"$.grade.{l}", "missing grade")
        _element(G, grade[l], f"$.grade.{l}")
    if doc["unit"] not in basis:
        raise ModelError("$.unit", "unknown basis label")
    dual = _label_map(doc, "dual", basis) if "dual" in doc else None
    N = doc["N"]
    if not isinstance(N, list):
        raise ModelError("$.N", "expected a list of [a, b, c, multiplicity]")
    for i, e in enumerate(N):
        if not (isinstance(e, list) and len(e) == 4 and all(x in basis for x in e[:3])
                and isinstance(e[3], int) and not isinstance(e[3], bool) and e[3] >= 0):
            raise ModelError(f"$.N[{i}]", "expected [label, label, label, non-negative int]")
    keys = [tuple(e[:3]) for e in N]
    if len(set(keys)) != len(keys):
        raise ModelError("$.N", "duplicate structure constant entry")
    bz_group = bz = twists = None
    if ("B" in doc) != ("bz" in doc):
        raise ModelError("$.bz", "B and bz must be given together")
    if "B" in doc:
        bz_group = _group(doc, "B")
        bz = doc["bz"]
        if not isinstance(bz, list) or any(l not in basis for l in bz):
            raise ModelError("$.bz", "expected a list of basis labels")
    if "twists" in doc:
        tmap = _label_map(doc, "twists", basis)
        twists = {}
        for l in basis:
            if l not in tmap:
                raise ModelError(f"$.twists.{l}", "missing twist")
            try:
                twists[l] = parse_phase(tmap[l])
            except ValidationError as e:
                raise ModelError(f"$.twists.{l}", str(e)) from None
    try:
        return validate_fusion_ring(basis, G, {l: grade[l] for l in basis}, doc["unit"],
                                    [tuple(e) for e in N], dual, bz_group, bz, twists,
                                    doc.get("name", ""))
    except ValidationError as e:
        raise ModelError("$.N", str(e)) from None


_ARG = re.compile(r"\([^)]*\)|[^,()]+")


def _key_args(G: FinAbGroup, key: str, n: int, path: str) -> tuple:
    parts = _ARG.findall(key.replace(" ", ""))
    labels = {element_label(g): g for g in G.elements}
    if len(parts) != n or any(p not in labels for p in parts):
        raise ModelError(path, f"expected {n} comma-separated group elements")
    return tuple(labels[p] for p in parts)


def _key(args) -> str:
    return ",".join(element_label(g) for g in args)


def _cochain_map(doc, key, G, n, parse_value):
    v = doc[key]
    if not isinstance(v, dict):
        raise ModelError(f"$.{key}", "expected an object keyed by 'g,h,...'")
    table = {}
    for k, val in v.items():
        p = f"$.{key}.{k}"
        table[_key_args(G, k, n, p)] = parse_value(val, p)
    return table


def _datum(doc) -> ZestingDatum:
    G = _group(doc, "G")
    B = _group(doc, "B")
    z = _element(B, doc["z"], "$.z")
    lam_t = _cochain_map(doc, "lambda", G, 2, lambda v, p: _element(B, v, p))

    def phase_value(v, p):
        try:
            return parse_phase(v)
        except ValidationError as e:
            raise ModelError(p, str(e)) from None

    def to_cochain(table, n):
        N = lcm(2, *(f.denominator for f in table.values()))
        M = phase_lattice(N)
        vals = []
        for args in itertools.product(G.elements, repeat=n):
            f = table.get(args, Fraction(0))
            vals.append((int(f * N),))
        return Cochain(n, G, M, tuple(vals), True)

    lam = Cochain(2, G, B, tuple(lam_t.get(a, B.zero) for a in itertools.product(G.elements, repeat=2)))
    nu = to_cochain(_cochain_map(doc, "nu", G, 3, phase_value), 3)
    t = None
    if "t" in doc:
        t = to_cochain(_cochain_map(doc, "t", G, 2, phase_value), 2)
    try:
        return ZestingDatum(G, B, z, lam, nu, t)
    except ValidationError as e:
        path = "$.nu" if "nu" in str(e) else "$.lambda"
        raise ModelError(path, str(e)) from None


_BUILD = {"premetric_group": _premetric, "pointed_category": _pointed,
          "graded_fusion_ring": _ring, "zesting_datum": _datum}


def parse_document(doc) -> ModelFile:
    if not isinstance(doc, dict):
        raise ModelError("$", "expected a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ModelError("$.kind", f"kind must be one of {', '.join(KINDS)}")
    required, optional = _FIELDS[kind]
    for k in doc:
        if k not in required and k not in optional:
            raise ModelError(f"$.{k}", "unknown field")
    for k in sorted(required):
        if k not in doc:
            raise ModelError(f"$.{k}", "missing required field")
    if "name" in doc and not isinstance(doc["name"], str):
        raise ModelError("$.name", "expected a string")
    return ModelFile(kind, doc.get("name", ""), _BUILD[kind](doc))


def parse_model_file(text: str) -> ModelFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"line {e.lineno}, column {e.colno}", e.msg) from None
    return parse_document(doc)


def load_model(path: str) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse_model_file(fh.read())


def load_builtin(name: str) -> ModelFile:
    text = resources.files("cfpzest").joinpath("data", name).read_text(encoding="utf-8")
    return parse_model_file(text)


# ---------------------------------------------------------------------------
# emission

def _doc_premetric(P: PreMetricGroup, kind="premetric_group") -> dict:
    doc = {"kind": kind}
    if P.name:
        doc["name"] = P.name
    doc["invariant_factors"] = list(P.group.factors)
    doc["q"] = [format_phase(v) for v in P.q]
    return doc


def _doc_pointed(C: PointedCategory) -> dict:
    doc = _doc_premetric(C.pmg, "pointed_category")
    if C.name:
        doc["name"] = C.name
    doc["B"] = list(C.B.factors)
    doc["z"] = list(C.z)
    doc["embedding"] = C.iota.matrix
    return doc


def _doc_ring(R: GradedFusionRing) -> dict:
    doc = {"kind": "graded_fusion_ring"}
    if R.name:
        doc["name"] = R.name
    doc["grading_group"] = list(R.grading_group.factors)
    doc["basis"] = list(R.labels)
    doc["grade"] = {l: list(g) for l, g in zip(R.labels, R.grade)}
    doc["unit"] = R.labels[R.unit]
    doc["dual"] = {l: R.labels[d] for l, d in zip(R.labels, R.dual)}
    if R.bz is not None:
        doc["B"] = list(R.bz_group.factors)
        doc["bz"] = [R.labels[i] for i in R.bz]
    if R.twists is not None:
        doc["twists"] = {l: format_phase(t) for l, t in zip(R.labels, R.twists)}
    doc["N"] = [list(e) for e in R.sparse()]
    return doc


def _doc_datum(D: ZestingDatum) -> dict:
    doc = {"kind": "zesting_datum", "G": list(D.G.factors), "B": list(D.B.factors),
           "z": list(D.z)}
    doc["lambda"] = {_key(a): list(v) for a, v in D.lam.items() if any(v)}
    doc["nu"] = {_key(a): format_phase(Fraction(v[0], D.nu.denominator))
                 for a, v in D.nu.items() if v[0]}
    if D.t is not None:
        doc["t"] = {_key(a): format_phase(Fraction(v[0], D.t.denominator))
                    for a, v in D.t.items() if v[0]}
    return doc


def to_document(value) -> dict:
    if isinstance(value, PointedCategory):
        return _doc_pointed(value)
    if isinstance(value, PreMetricGroup):
        return _doc_premetric(value)
    if isinstance(value, GradedFusionRing):
        return _doc_ring(value)
    if isinstance(value, ZestingDatum):
        return _doc_datum(value)
    raise ValidationError(f"cannot serialize {type(value).__name__}")


def dumps(doc: dict) -> str:
    """One top-level field per line, values compact; keys keep insertion order."""
    lines = [f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def emit_model(value) -> str:
    return dumps(to_document(value))
