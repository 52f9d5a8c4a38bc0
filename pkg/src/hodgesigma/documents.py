"""JSON documents exchanged by the command-line tool.

Every document is ``{"format_version": 1, "kind": ..., "payload": ...}``.
Gaussian rationals are ``{"re": "a/b", "im": "c/d"}`` with reduced strings,
matrices are ``{"rows", "cols", "entries"}`` with row-major entries, filtration
steps are ``{"index", "basis"}`` and bigrading pieces ``{"p", "q", "basis"}``,
where ``basis`` is a matrix whose columns span the subspace.

Emission is canonical (sorted keys, reduced rationals, canonical subspace
bases, jump-only filtrations), so equal objects produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import jsonschema

from .errors import DimensionMismatch, SchemaError
from .gaussian import GaussianRational, LatticeIndex, parse_rational
from .hodge import BiGrading, HodgeFiltration, MixedHodgeStructure, WeightFiltration
from .linalg import Matrix, Subspace
from .operators import SigmaOperator

FORMAT_VERSION = 1
KINDS = ("matrix", "mhs", "bigrading", "operator", "report")

_RATIONAL = {"type": "string", "pattern": r"^\s*[-−+]?\s*\d+\s*(/\s*\d+\s*)?$"}
_DEFS = {
    "gaussian": {
        "type": "object",
        "properties": {"re": _RATIONAL, "im": _RATIONAL},
        "required": ["re", "im"],
        "additionalProperties": False,
    },
    "matrix": {
        "type": "object",
        "properties": {
            "rows": {"type": "integer", "minimum": 0},
            "cols": {"type": "integer", "minimum": 0},
            "entries": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/gaussian"}}},
        },
        "required": ["rows", "cols", "entries"],
        "additionalProperties": False,
    },
    "step": {
        "type": "object",
        "properties": {"index": {"type": "integer"}, "basis": {"$ref": "#/$defs/matrix"}},
        "required": ["index", "basis"],
        "additionalProperties": False,
    },
    "piece": {
        "type": "object",
        "properties": {"p": {"type": "integer"}, "q": {"type": "integer"}, "basis": {"$ref": "#/$defs/matrix"}},
        "required": ["p", "q", "basis"],
        "additionalProperties": False,
    },
}
_PAYLOADS = {
    "matrix": {"$ref": "#/$defs/matrix"},
    "mhs": {
        "type": "object",
        "properties": {
            "dim": {"type": "integer", "minimum": 0},
            "weight": {"type": "array", "items": {"$ref": "#/$defs/step"}},
            "hodge": {"type": "array", "items": {"$ref": "#/$defs/step"}},
        },
        "required": ["dim", "weight", "hodge"],
        "additionalProperties": False,
    },
    "bigrading": {
        "type": "object",
        "properties": {
            "dim": {"type": "integer", "minimum": 0},
            "pieces": {"type": "array", "items": {"$ref": "#/$defs/piece"}},
        },
        "required": ["dim", "pieces"],
        "additionalProperties": False,
    },
    "operator": {
        "type": "object",
        "properties": {
            "matrix": {"$ref": "#/$defs/matrix"},
            "spectrum": {"type": "array", "items": {"$ref": "#/$defs/piece"}},
            "certificate": {"type": "object"},
        },
        "required": ["matrix"],
        "additionalProperties": False,
    },
    "report": {"type": "object"},
}
_ENVELOPE = {
    "type": "object",
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "kind": {"enum": list(KINDS)},
        "payload": {},
    },
    "required": ["format_version", "kind", "payload"],
    "additionalProperties": False,
}


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _validate(instance: Any, schema: dict, prefix: str) -> None:
    full = dict(schema)
    full["$defs"] = _DEFS
    try:
        jsonschema.validate(instance, full)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message, prefix + _pointer(exc.absolute_path)) from None


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Any
    format_version: int = FORMAT_VERSION

    def to_json(self) -> dict:
        return {"format_version": self.format_version, "kind": self.kind, "payload": self.payload}


def parse_document(text: str, expect: str | tuple[str, ...] | None = None) -> Document:
    """Parse and schema-check a document; raises :class:`SchemaError`."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    _validate(raw, _ENVELOPE, "")
    kind = raw["kind"]
    _validate(raw["payload"], _PAYLOADS[kind], "/payload")
    if expect is not None:
        allowed = (expect,) if isinstance(expect, str) else expect
        if kind not in allowed:
            raise SchemaError(f"expected a document of kind {' or '.join(allowed)}, got {kind}", "/kind")
    doc = Document(kind, raw["payload"], raw["format_version"])
    # decode once so semantic errors surface at parse time
    if kind != "report":
        decode(doc)
    return doc


def emit_document(doc: Document) -> str:
    return json.dumps(doc.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- encoders ------------------------------------------------------------------------


def _rational_str(x: Fraction) -> str:
    return str(x)


def encode_gaussian(g: GaussianRational) -> dict:
    return {"re": _rational_str(g.re), "im": _rational_str(g.im)}


def encode_matrix(m: Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": [[encode_gaussian(x) for x in row] for row in m.entries]}


def encode_subspace(s: Subspace) -> dict:
    return encode_matrix(s.basis)


def encode_mhs(mhs: MixedHodgeStructure) -> dict:
    c = mhs.canonical()
    return {
        "dim": mhs.ambient_dim,
        "weight": [{"index": n, "basis": encode_subspace(s)} for n, s in c.weight.steps],
        "hodge": [{"index": p, "basis": encode_subspace(s)} for p, s in c.hodge.steps],
    }


def encode_bigrading(bg: BiGrading) -> dict:
    return {
        "dim": bg.ambient_dim,
        "pieces": [{"p": idx.p, "q": idx.q, "basis": encode_subspace(s)} for idx, s in sorted(bg.pieces.items())],
    }


def encode_operator(op: SigmaOperator) -> dict:
    payload = {
        "matrix": encode_matrix(op.matrix),
        "spectrum": [{"p": idx.p, "q": idx.q, "basis": encode_subspace(s)} for idx, s in sorted(op.spectrum.items())],
    }
    if op.certificate is not None:
        payload["certificate"] = op.certificate.to_dict()
    return payload


def to_document(obj: Any) -> Document:
    if isinstance(obj, Matrix):
        return Document("matrix", encode_matrix(obj))
    if isinstance(obj, MixedHodgeStructure):
        return Document("mhs", encode_mhs(obj))
    if isinstance(obj, BiGrading):
        return Document("bigrading", encode_bigrading(obj))
    if isinstance(obj, SigmaOperator):
        return Document("operator", encode_operator(obj))
    if isinstance(obj, dict):
        return Document("report", obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return emit_document(to_document(obj))


# -- decoders ------------------------------------------------------------------------


def decode_gaussian(raw: dict, at: str) -> GaussianRational:
    try:
        re = parse_rational(raw["re"])
        im = parse_rational(raw["im"])
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational: {exc}", at) from None
    return GaussianRational(re, im)


def decode_matrix(raw: dict, at: str) -> Matrix:
    rows, cols, entries = raw["rows"], raw["cols"], raw["entries"]
    if len(entries) != rows:
        raise SchemaError(f"{len(entries)} rows listed, {rows} declared", at + "/entries")
    out = []
    for i, row in enumerate(entries):
        if len(row) != cols:
            raise SchemaError(f"row has {len(row)} entries, {cols} declared", f"{at}/entries/{i}")
        out.append([decode_gaussian(x, f"{at}/entries/{i}/{j}") for j, x in enumerate(row)])
    return Matrix(out, cols)


def decode_subspace(raw: dict, dim: int, at: str) -> Subspace:
    m = decode_matrix(raw, at)
    if m.rows != dim:
        raise SchemaError(f"basis vectors have length {m.rows}, ambient dimension is {dim}", at + "/rows")
    return Subspace.from_matrix_columns(m)


def _steps(raw: list, dim: int, at: str) -> tuple[tuple[int, Subspace], ...]:
    seen = set()
    out = []
    for k, step in enumerate(raw):
        if step["index"] in seen:
            raise SchemaError(f"duplicate filtration index {step['index']}", f"{at}/{k}/index")
        seen.add(step["index"])
        out.append((step["index"], decode_subspace(step["basis"], dim, f"{at}/{k}/basis")))
    return tuple(out)


def decode_mhs(raw: dict, at: str = "/payload") -> MixedHodgeStructure:
    dim = raw["dim"]
    w = WeightFiltration(dim, _steps(raw["weight"], dim, at + "/weight"))
    f = HodgeFiltration(dim, _steps(raw["hodge"], dim, at + "/hodge"))
    return MixedHodgeStructure(w, f)


def _pieces(raw: list, dim: int, at: str) -> dict[LatticeIndex, Subspace]:
    pieces = {}
    for k, piece in enumerate(raw):
        idx = LatticeIndex(piece["p"], piece["q"])
        if idx in pieces:
            raise SchemaError(f"duplicate piece ({idx.p},{idx.q})", f"{at}/{k}")
        pieces[idx] = decode_subspace(piece["basis"], dim, f"{at}/{k}/basis")
    return pieces


def decode_bigrading(raw: dict, at: str = "/payload") -> BiGrading:
    dim = raw["dim"]
    return BiGrading(dim, _pieces(raw["pieces"], dim, at + "/pieces"))


def decode(doc: Document) -> Any:
    """Decode a payload into library objects.

    ``operator`` documents decode to their matrix; the spectrum is recomputed
    by certification rather than trusted.
    """
    try:
        if doc.kind == "matrix":
            return decode_matrix(doc.payload, "/payload")
        if doc.kind == "operator":
            m = decode_matrix(doc.payload["matrix"], "/payload/matrix")
            if "spectrum" in doc.payload:
                _pieces(doc.payload["spectrum"], m.rows, "/payload/spectrum")
            return m
        if doc.kind == "mhs":
            return decode_mhs(doc.payload)
        if doc.kind == "bigrading":
            return decode_bigrading(doc.payload)
    except DimensionMismatch as exc:
        raise SchemaError(str(exc), "/payload") from None
    return doc.payload
