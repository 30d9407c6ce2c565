"""JSON and CSV rendering of report documents.

Floats are written with 17 significant digits so that every value
round-trips exactly; keys keep insertion order.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA = "hml-report/1"


def _number(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r} in report")
    return "%.17g" % x


def plain(obj):
    """Convert numpy scalars/arrays and complex numbers to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    obj = plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _number(obj)
    return json.dumps(obj, ensure_ascii=False)


def flatten(obj, prefix=""):
    """Leaves of a nested payload as ``(path, value)`` pairs."""
    obj = plain(obj)
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, obj


def to_csv(payload) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["path", "value"])
    for path, value in flatten(payload):
        if isinstance(value, bool) or value is None:
            text = json.dumps(value)
        elif isinstance(value, float):
            text = _number(value)
        else:
            text = str(value)
        w.writerow([path, text])
    return buf.getvalue()


def document(command: dict, payload, provenance, timing=None) -> dict:
    doc = {"schema": SCHEMA, "command": command, "payload": payload,
           "provenance": list(provenance)}
    if timing is not None:
        doc["timing"] = timing
    return doc


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(doc) + "\n"
    if fmt == "csv":
        return to_csv(doc["payload"])
    raise ValueError(f"unknown format {fmt!r}")
