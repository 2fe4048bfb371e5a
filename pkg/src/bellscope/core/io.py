"""JSON files for behaviors, expressions and quantum models.

Floats are written with 17 significant digits so that files round-trip exactly.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .types import BellExpression, Behavior, Bound, Scenario

_BOUND_KEYS = {"local": "local_bound", "quantum": "quantum_bound", "ns": "ns_bound"}


def _fmt(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite value cannot be serialized")
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj: Any, indent: int | None = None, _level: int = 0) -> str:
    """json.dumps with fixed 17-significant-digit floats."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep numeric vectors on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def behavior_to_json(b: Behavior) -> dict:
    return {"scenario": b.scenario.to_json(), "p": b.table.tolist()}


def behavior_from_json(obj: dict) -> Behavior:
    try:
        sc = Scenario.from_json(obj["scenario"])
        return Behavior(sc, obj["p"])
    except KeyError as e:
        raise ValueError(f"behavior file lacks field {e}") from None


def expression_to_json(e: BellExpression) -> dict:
    meta: dict[str, Any] = {}
    for key, field in _BOUND_KEYS.items():
        if key in e.bounds and math.isfinite(e.bounds[key].value):
            meta[field] = e.bounds[key].value
    if e.name:
        meta["name"] = e.name
    if e.negated:
        meta["negated"] = True
    srcs = {_BOUND_KEYS[k]: v.source for k, v in e.bounds.items() if k in _BOUND_KEYS}
    if srcs:
        meta["provenance"] = srcs
    return {"scenario": e.scenario.to_json(), "s": e.coefficients.tolist(), "meta": meta}


def expression_from_json(obj: dict) -> BellExpression:
    try:
        sc = Scenario.from_json(obj["scenario"])
        s = obj["s"]
    except KeyError as e:
        raise ValueError(f"expression file lacks field {e}") from None
    meta = obj.get("meta", {}) or {}
    prov = meta.get("provenance", {})
    bounds = {k: Bound(float(meta[f]), prov.get(f, "file")) for k, f in _BOUND_KEYS.items()
              if meta.get(f) is not None}
    return BellExpression(sc, s, bounds=bounds, name=meta.get("name", ""), negated=bool(meta.get("negated", False)))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON ({e})") from None


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj, indent=1) + "\n")


def load_behavior(path) -> Behavior:
    return behavior_from_json(read_json(path))


def load_expression(path) -> BellExpression:
    return expression_from_json(read_json(path))


def matrix_to_json(M) -> list:
    """Row-major list of [re, im] pairs."""
    M = np.asarray(M, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in M.reshape(-1)]


def matrix_from_json(data, dim: int) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (dim * dim, 2):
        raise ValueError(f"matrix needs {dim * dim} [re, im] pairs, got shape {arr.shape}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(dim, dim)
