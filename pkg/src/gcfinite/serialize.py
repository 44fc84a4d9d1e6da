"""JSON encoding of the core types.

Every document carries ``schema_version`` and ``kind``.  Exact numbers are
written as ``"num/den"`` strings (``"3"`` for integers); approximate ones as
JSON floats.  Value matrices are row-major lists of rows.

    {"schema_version": 1, "kind": "measure", "exact": true,
     "weights": ["1/7", ...], "residual": "0"}
    {"schema_version": 1, "kind": "function_class", "exact": true,
     "values": [["0", "1", ...], ...]}
    {"schema_version": 1, "kind": "set_family", "size": 7, "sets": [[0, 1, 3], ...]}
    {"schema_version": 1, "kind": "partition", "labels": [0, 0, 1, ...]}
    {"schema_version": 1, "kind": "domain", "size": 7, "labels": null}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .core import FiniteDomain, FunctionClass, Measure, Partition, SetFamily

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Malformed document; the message names the offending field."""


def num(x) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return float(x)


def _parse_num(v, where: str, exact: bool):
    try:
        if exact:
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise ValueError("exact values must be 'num/den' strings")
            if isinstance(v, str) and ("." in v or "e" in v.lower()):
                raise ValueError("decimal literal in exact mode")
            return Fraction(v)
        return float(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    return doc[key]


def to_dict(obj) -> dict:
    if isinstance(obj, Measure):
        body = {
            "kind": "measure",
            "exact": obj.exact,
            "weights": [num(v) for v in obj.weights],
            "residual": num(obj.residual),
        }
    elif isinstance(obj, FunctionClass):
        body = {
            "kind": "function_class",
            "exact": obj.exact,
            "values": [[num(v) for v in row] for row in obj.values],
        }
    elif isinstance(obj, SetFamily):
        body = {"kind": "set_family", "size": obj.size, "sets": [sorted(s) for s in obj.sets()]}
    elif isinstance(obj, Partition):
        body = {"kind": "partition", "labels": list(obj.labels)}
    elif isinstance(obj, FiniteDomain):
        body = {"kind": "domain", "size": obj.size, "labels": None if obj.labels is None else list(obj.labels)}
    elif hasattr(obj, "to_dict"):
        body = obj.to_dict()
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"schema_version": SCHEMA_VERSION, **body}


def from_dict(doc: dict):
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    version = _need(doc, "schema_version", "document")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"schema_version: unsupported version {version!r}")
    kind = _need(doc, "kind", "document")
    if kind == "measure":
        exact = bool(doc.get("exact", True))
        w = [_parse_num(v, f"weights[{i}]", exact) for i, v in enumerate(_need(doc, "weights", kind))]
        res = _parse_num(doc.get("residual", "0" if exact else 0.0), "residual", exact)
        try:
            return Measure(np.array(w, dtype=object if exact else np.float64), exact=exact, residual=res)
        except ValueError as exc:
            raise SchemaError(f"weights: {exc}") from None
    if kind == "function_class":
        exact = bool(doc.get("exact", True))
        rows = _need(doc, "values", kind)
        vals = [[_parse_num(v, f"values[{i}][{j}]", exact) for j, v in enumerate(row)] for i, row in enumerate(rows)]
        if len({len(r) for r in vals}) > 1:
            raise SchemaError("values: rows have different lengths")
        return FunctionClass.from_rows(vals, exact=exact)
    if kind == "set_family":
        size = _need(doc, "size", kind)
        sets = _need(doc, "sets", kind)
        for i, s in enumerate(sets):
            if any(not isinstance(x, int) or not 0 <= x < size for x in s):
                raise SchemaError(f"sets[{i}]: point outside 0..{size - 1}")
        return SetFamily.from_sets(sets, size)
    if kind == "partition":
        return Partition(tuple(_need(doc, "labels", kind)))
    if kind == "domain":
        return FiniteDomain(_need(doc, "size", kind), doc.get("labels"))
    raise SchemaError(f"kind: unknown kind {kind!r}")


def dumps(obj) -> str:
    return json.dumps(to_dict(obj), sort_keys=True, indent=1) + "\n"


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}: {exc.msg}") from None
    return from_dict(doc)


def load(path):
    return loads(Path(path).read_text())
