"""JSON readers for the exchange formats. Writers live on the types (``to_json``)."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional, Union

from .errors import InputError
from .ops import Operation, projection
from .rationals import to_ext_rational, to_rational

_PROJ_RE = re.compile(r"^e:(\d+):(\d+)$")


def load_json(source: Union[str, Path]):
    """Read JSON from a file path, or parse it directly when it looks inline."""
    text = str(source)
    if text.lstrip().startswith(("{", "[", '"')):
        payload = text
    elif _PROJ_RE.match(text.strip()):
        return text.strip()
    else:
        try:
            payload = Path(text).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {text}: {exc.strerror}") from None
    try:
        return json.loads(payload, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {text[:60]!r}: {exc}") from None


def _reject_float(text):
    raise InputError(f"float literal {text} rejected; write rationals as \"p/q\"")


def operation_from_json(data, n: Optional[int] = None) -> Operation:
    if isinstance(data, str):
        m = _PROJ_RE.match(data.strip())
        if not m:
            raise InputError(f"unknown operation shorthand {data!r} (expected \"e:k:i\")")
        if n is None:
            raise InputError(f"shorthand {data!r} needs a domain size from context")
        return projection(n, int(m.group(1)), int(m.group(2)))
    if not isinstance(data, dict):
        raise InputError(f"operation must be an object or shorthand, got {type(data).__name__}")
    try:
        dom = int(data.get("domain", n))
        return Operation(dom, int(data["arity"]), tuple(data["table"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed operation: {exc}") from None


def _infer_domain(entries, default: Optional[int]) -> Optional[int]:
    for e in entries:
        op = e.get("op") if isinstance(e, dict) else None
        if isinstance(op, dict) and "domain" in op:
            return int(op["domain"])
    return default


def weighting_from_json(data, n: Optional[int] = None):
    from .weightings import Weighting

    if not isinstance(data, dict) or "entries" not in data:
        raise InputError("weighting must be an object with \"arity\" and \"entries\"")
    entries = data["entries"]
    dom = data.get("domain") or _infer_domain(entries, n)
    if dom is None:
        raise InputError("cannot determine the domain size; add a \"domain\" field")
    arity = int(data["arity"])
    parsed: dict[Operation, object] = {}
    for e in entries:
        op = operation_from_json(e["op"], int(dom))
        w = to_rational(e["weight"])
        parsed[op] = parsed.get(op, 0) + w
    return Weighting(int(dom), arity, parsed)


def weightings_from_json(data, n: Optional[int] = None) -> list:
    """A single weighting, a list of them, or {"generators": [...]}."""
    if isinstance(data, dict) and "generators" in data:
        dom = data.get("domain", n)
        return [weighting_from_json(w, dom) for w in data["generators"]]
    if isinstance(data, list):
        return [weighting_from_json(w, n) for w in data]
    return [weighting_from_json(data, n)]


def relation_from_json(data, n: int):
    from .vcsp import WeightedRelation

    try:
        dom = int(data.get("domain", n))
        return WeightedRelation(dom, int(data["arity"]), tuple(to_ext_rational(v) for v in data["values"]))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed weighted relation: {exc}") from None


def language_from_json(data):
    from .vcsp import Language

    try:
        n = int(data["domain"])
        rels = {name: relation_from_json(r, n) for name, r in data["relations"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed language: {exc}") from None
    return Language(n, rels)


def instance_from_json(data):
    from .vcsp import Constraint, VcspInstance

    try:
        n = int(data["domain"])
        rels = {name: relation_from_json(r, n) for name, r in data.get("relations", {}).items()}
        constraints = []
        for c in data.get("constraints", []):
            if c["rel"] not in rels:
                raise InputError(f"constraint references unknown relation {c['rel']!r}")
            constraints.append(Constraint(c["rel"], rels[c["rel"]], tuple(int(v) for v in c["scope"])))
        return VcspInstance(n, int(data["num_vars"]), constraints)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed instance: {exc}") from None


def matrix_from_json(data):
    from .gordan import QMatrix

    try:
        rows = [[to_rational(v) for v in row] for row in data["data"]]
        m = QMatrix.from_rows(rows)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed matrix: {exc}") from None
    if "rows" in data and int(data["rows"]) != m.rows:
        raise InputError(f"matrix declares {data['rows']} rows but has {m.rows}")
    if "cols" in data and int(data["cols"]) != m.cols:
        raise InputError(f"matrix declares {data['cols']} columns but has {m.cols}")
    return m


def slice_from_json(data):
    from .clones import CloneSlice

    try:
        n = int(data["domain"])
        layers = {
            int(k): tuple(sorted(Operation(n, int(k), tuple(t)) for t in tables))
            for k, tables in data["layers"].items()
        }
        gens = tuple(operation_from_json(g, n) for g in data.get("generators", []))
        return CloneSlice(n, int(data["max_arity"]), layers, gens)
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed clone slice: {exc}") from None
