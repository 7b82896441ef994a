"""File formats and canonical report serialization.

Tuple JSON: ``{"field": "complex" | {"prime": p}, "n": N, "matrices": [...]}``
with complex entries as [re, im] pairs (row-major) and prime-field entries
as integers; subspaces mirror this with a "basis" key. Graphs are plain
text: a "n m" header line then one "u v" line per edge, 1-indexed.

Reports are dumped through a hand-rolled canonical JSON writer (sorted
keys, rationals as "p/q" strings, floats at 17 significant digits) so that
equal runs produce byte-identical output.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import MatrixTuple, Subspace, make_tuple, subspace_from_columns
from .errors import ConfigError, ValidationError
from .fields import COMPLEX, FieldSpec, prime_field
from .graph import Graph

__all__ = [
    "tuple_to_json",
    "tuple_from_json",
    "save_tuple",
    "load_tuple",
    "subspace_to_json",
    "subspace_from_json",
    "load_graph",
    "save_graph",
    "to_jsonable",
    "canonical_json_bytes",
    "digest",
]


def _field_to_json(field: FieldSpec):
    return "complex" if field.is_complex else {"prime": field.p}


def _field_from_json(obj) -> FieldSpec:
    if obj == "complex":
        return COMPLEX
    if isinstance(obj, dict) and "prime" in obj:
        return prime_field(int(obj["prime"]))
    raise ValidationError(f"unrecognized field spec {obj!r}")


def _matrix_to_json(m: np.ndarray, field: FieldSpec):
    if field.is_complex:
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return [[int(z) for z in row] for row in m]


def _matrix_from_json(rows, field: FieldSpec) -> np.ndarray:
    if field.is_complex:
        out = np.empty((len(rows), len(rows[0])), dtype=np.complex128)
        for i, row in enumerate(rows):
            for j, z in enumerate(row):
                if isinstance(z, (list, tuple)):
                    out[i, j] = complex(z[0], z[1])
                else:
                    out[i, j] = complex(z)
        return out
    return np.asarray(rows, dtype=np.int64)


def tuple_to_json(b: MatrixTuple) -> dict:
    obj = {
        "field": _field_to_json(b.field),
        "n": b.n,
        "matrices": [_matrix_to_json(b.mats[i], b.field) for i in range(b.d)],
    }
    if b.meta:
        obj["meta"] = to_jsonable(b.meta)
    return obj


def tuple_from_json(obj: dict) -> MatrixTuple:
    try:
        field = _field_from_json(obj["field"])
        n = int(obj["n"])
        mats = np.stack([_matrix_from_json(m, field) for m in obj["matrices"]])
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed tuple JSON: {exc}") from exc
    if mats.shape[1:] != (n, n):
        raise ValidationError(f"matrices are {mats.shape[1:]}, header says {n}x{n}")
    return make_tuple(mats, field=field, meta=dict(obj.get("meta", {})))


def save_tuple(b: MatrixTuple, path) -> None:
    Path(path).write_bytes(canonical_json_bytes(tuple_to_json(b)) + b"\n")


def load_tuple(path) -> MatrixTuple:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from exc
    return tuple_from_json(obj)


def subspace_to_json(v: Subspace) -> dict:
    return {
        "field": _field_to_json(v.field),
        "n": v.n,
        "basis": _matrix_to_json(v.basis, v.field),
    }


def subspace_from_json(obj: dict) -> Subspace:
    field = _field_from_json(obj["field"])
    basis = _matrix_from_json(obj["basis"], field)
    return subspace_from_columns(basis, field)


def load_graph(path) -> Graph:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty graph file")
    try:
        n, m = (int(tok) for tok in lines[0].split())
        edges = tuple(tuple(int(tok) for tok in ln.split()) for ln in lines[1 : m + 1])
    except ValueError as exc:
        raise ValidationError(f"malformed graph file: {exc}") from exc
    if len(edges) != m:
        raise ValidationError(f"header promises {m} edges, file has {len(edges)}")
    return Graph(n, edges)


def save_graph(g: Graph, path) -> None:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def to_jsonable(obj):
    """Reduce domain objects to plain JSON-able structures (dicts, lists,
    ints, floats, strings); Fractions become exact "p/q" strings."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return None if obj is None else bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return str(obj.numerator)
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, FieldSpec):
        return _field_to_json(obj)
    if isinstance(obj, MatrixTuple):
        return tuple_to_json(obj)
    if isinstance(obj, Subspace):
        return subspace_to_json(obj)
    if isinstance(obj, Graph):
        return {"n": obj.n, "edges": [list(e) for e in obj.edges]}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if not isinstance(k, str):
                raise ConfigError(f"report keys must be strings, got {k!r}")
            out[k] = to_jsonable(v)
        return out
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if not f.name.startswith("_")
        }
    raise ConfigError(f"cannot serialize object of type {type(obj).__name__}")


def _write_canonical(obj, parts: list) -> None:
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        if not np.isfinite(obj):
            raise ConfigError(f"non-finite float {obj} has no canonical form")
        parts.append(format(obj, ".17g"))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, list):
        parts.append("[")
        for i, x in enumerate(obj):
            if i:
                parts.append(",")
            _write_canonical(x, parts)
        parts.append("]")
    elif isinstance(obj, dict):
        parts.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                parts.append(",")
            parts.append(json.dumps(key))
            parts.append(":")
            _write_canonical(obj[key], parts)
        parts.append("}")
    else:
        raise ConfigError(f"cannot serialize object of type {type(obj).__name__}")


def canonical_json_bytes(obj) -> bytes:
    """Byte-stable canonical JSON: sorted keys, 17-significant-digit floats,
    rationals as exact strings."""
    parts: list = []
    _write_canonical(to_jsonable(obj), parts)
    return "".join(parts).encode("utf-8")


def digest(obj) -> str:
    import hashlib

    return hashlib.sha256(canonical_json_bytes(obj)).hexdigest()[:16]
