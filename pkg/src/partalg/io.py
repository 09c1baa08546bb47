"""JSON documents for algebras, representations and certificates.

Algebra document::

    {"carrier": ["a", "b"], "signature": ["join"], "join": [["a", "a", "b"]]}

Representation documents carry ``"kind": "set-representation"`` or
``"kind": "pf-representation"``; certificates carry ``"kind": "certificate"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .algebra import OPERATIONS, SYMBOLS, AlgebraError, PartialAlgebra, Signature, validate


class ParseError(AlgebraError):
    def __init__(self, message: str, position: str | None = None):
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


ALGEBRA_KEYS = {"kind", "carrier", "signature", "zero", *OPERATIONS}


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _expect_str(value, where: str) -> str:
    if not isinstance(value, str):
        raise ParseError("expected a string", where)
    return value


def _triples(value, where: str) -> list[tuple[str, str, str]]:
    if not isinstance(value, list):
        raise ParseError("expected a list of [a, b, c] triples", where)
    out = []
    for i, t in enumerate(value):
        if not (isinstance(t, list) and len(t) == 3):
            raise ParseError("expected a triple [a, b, c]", f"{where}[{i}]")
        out.append(tuple(_expect_str(x, f"{where}[{i}]") for x in t))
    return out


def algebra_from_obj(doc: Any, allow_degenerate: bool = False, check: bool = True) -> PartialAlgebra:
    if not isinstance(doc, dict):
        raise ParseError("algebra document must be an object", "$")
    kind = doc.get("kind", "algebra")
    if kind != "algebra":
        raise ParseError(f"expected an algebra document, got kind {kind!r}", "$.kind")
    for key in doc:
        if key not in ALGEBRA_KEYS:
            raise ParseError(f"unknown key {key!r}", f"$.{key}")
    if "carrier" not in doc or "signature" not in doc:
        raise ParseError("missing carrier or signature", "$")
    carrier = doc["carrier"]
    if not isinstance(carrier, list):
        raise ParseError("carrier must be a list", "$.carrier")
    carrier = [_expect_str(x, f"$.carrier[{i}]") for i, x in enumerate(carrier)]
    seen = set()
    for i, x in enumerate(carrier):
        if x in seen:
            raise ParseError(f"duplicate element id {x!r}", f"$.carrier[{i}]")
        seen.add(x)
    symbols = doc["signature"]
    if not isinstance(symbols, list):
        raise ParseError("signature must be a list", "$.signature")
    for i, s in enumerate(symbols):
        if s not in SYMBOLS:
            raise ParseError(f"unknown signature symbol {s!r}", f"$.signature[{i}]")
    sig = Signature.from_symbols(symbols)
    tables = {}
    for name in OPERATIONS:
        if name in doc:
            if not sig.has(name):
                raise ParseError(f"table {name!r} given but not in signature", f"$.{name}")
            tables[name] = _triples(doc[name], f"$.{name}")
        elif sig.has(name) and name in ("meet", "comp"):
            raise ParseError(f"signature has {name} but no table", "$")
    zero = doc.get("zero")
    if zero is not None:
        zero = _expect_str(zero, "$.zero")
    alg = PartialAlgebra.make(carrier, sig, zero=zero, **tables)
    if check:
        problems = validate(alg, allow_degenerate=allow_degenerate)
        if problems:
            p = problems[0]
            raise ParseError(str(p), f"$.{p.table}")
    return alg


def parse_algebra(text: str, allow_degenerate: bool = False, check: bool = True) -> PartialAlgebra:
    return algebra_from_obj(_load(text), allow_degenerate, check)


def algebra_to_obj(alg: PartialAlgebra) -> dict:
    order = alg.index

    def key(t):
        return tuple(order.get(x, len(order)) for x in t)

    doc: dict[str, Any] = {"carrier": list(alg.carrier), "signature": list(alg.signature.symbols)}
    for name in alg.signature.operations:
        doc[name] = [list(t) for t in sorted(alg.triples(name), key=key)]
    if alg.signature.has_zero:
        doc["zero"] = alg.zero
    return doc


def dumps(doc: dict) -> str:
    """Compact JSON with one list item per line for long lists."""
    lines = ["{"]
    items = list(doc.items())
    for i, (k, v) in enumerate(items):
        sep = "," if i < len(items) - 1 else ""
        if isinstance(v, list) and v and isinstance(v[0], (list, dict)):
            lines.append(f"  {json.dumps(k)}: [")
            for j, item in enumerate(v):
                comma = "," if j < len(v) - 1 else ""
                lines.append(f"    {json.dumps(item, ensure_ascii=False)}{comma}")
            lines.append(f"  ]{sep}")
        else:
            lines.append(f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_algebra(alg: PartialAlgebra) -> str:
    return dumps(algebra_to_obj(alg))


# -- representations --------------------------------------------------------


@dataclass(frozen=True)
class SetRepresentation:
    base: tuple[str, ...]
    assignment: dict[str, frozenset[str]]

    def image(self, a: str) -> frozenset[str]:
        return self.assignment[a]


@dataclass(frozen=True)
class PFRepresentation:
    base: tuple[str, ...]
    assignment: dict[str, frozenset[tuple[str, str]]]


def representation_to_obj(rep) -> dict:
    order = {p: i for i, p in enumerate(rep.base)}
    if isinstance(rep, PFRepresentation):
        assignment = {
            a: [list(pair) for pair in sorted(v, key=lambda p: (order[p[0]], order[p[1]]))]
            for a, v in rep.assignment.items()
        }
        kind = "pf-representation"
    else:
        assignment = {a: sorted(v, key=order.__getitem__) for a, v in rep.assignment.items()}
        kind = "set-representation"
    return {"kind": kind, "base": list(rep.base), "assignment": assignment}


def serialize_representation(rep) -> str:
    return json.dumps(representation_to_obj(rep), indent=2) + "\n"


def representation_from_obj(doc: Any):
    if not isinstance(doc, dict):
        raise ParseError("representation document must be an object", "$")
    kind = doc.get("kind")
    if kind not in ("set-representation", "pf-representation"):
        raise ParseError(f"expected a representation document, got kind {kind!r}", "$.kind")
    for key in doc:
        if key not in ("kind", "base", "assignment"):
            raise ParseError(f"unknown key {key!r}", f"$.{key}")
    base = doc.get("base")
    if not isinstance(base, list):
        raise ParseError("base must be a list", "$.base")
    base = tuple(_expect_str(p, f"$.base[{i}]") for i, p in enumerate(base))
    raw = doc.get("assignment")
    if not isinstance(raw, dict):
        raise ParseError("assignment must be an object", "$.assignment")
    points = set(base)
    assignment = {}
    for a, v in raw.items():
        where = f"$.assignment.{a}"
        if not isinstance(v, list):
            raise ParseError("expected a list", where)
        if kind == "set-representation":
            image = frozenset(_expect_str(p, where) for p in v)
            bad = image - points
        else:
            pairs = []
            for p in v:
                if not (isinstance(p, list) and len(p) == 2):
                    raise ParseError("expected a pair", where)
                pairs.append((_expect_str(p[0], where), _expect_str(p[1], where)))
            image = frozenset(pairs)
            bad = {x for pair in image for x in pair} - points
        if bad:
            raise ParseError(f"point {sorted(bad)[0]!r} not in base", where)
        assignment[a] = image
    if kind == "set-representation":
        return SetRepresentation(base, assignment)
    return PFRepresentation(base, assignment)


def parse_representation(text: str):
    return representation_from_obj(_load(text))


def document_kind(text: str) -> str:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise ParseError("document must be an object", "$")
    return doc.get("kind", "algebra")
