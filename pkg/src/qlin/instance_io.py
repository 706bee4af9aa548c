"""JSON instance documents.

Two kinds share one envelope::

    {"kind": "qp01", "n": 2, "c": [1, -1], "Q": [[0, 2], [2, 0]],
     "quad_constraint": {"h": [0, 0], "G": [[0, 1], [1, 0]], "g": 2},
     "x_constraints": [{"coeffs": [1, 1], "sense": "<=", "rhs": 1}]}

    {"kind": "threading", "m": 2, "N": 6, "lengths": [2, 2],
     "linear_scores": [[1, 0, 2], [2, 3, 1]], "edges": [[1, 2]],
     "pair_scores": [{"i": 1, "j": 2, "k": 2, "l": 3, "value": 5}],
     "max_gap": [null]}

``quad_constraint``, ``x_constraints``, ``edges``, ``pair_scores`` and
``max_gap`` are optional.  Segment and position indices are 1-based.
"""

from __future__ import annotations

import json
import math
from numbers import Real

from .errors import InputError
from .qp_core import ZeroOneQP, make_qp
from .threading import ThreadingInstance, derive_positions, make_instance

QP_KEYS = {"kind", "n", "c", "Q", "quad_constraint", "x_constraints"}
THREADING_KEYS = {"kind", "m", "N", "lengths", "linear_scores", "edges", "pair_scores", "max_gap"}


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise InputError(f"expected a number, got {type(value).__name__}", path=path)
    if not math.isfinite(value):
        raise InputError("number must be finite", path=path)
    return value


def _integer(value, path):
    _number(value, path)
    if int(value) != value:
        raise InputError(f"expected an integer, got {value}", path=path)
    return int(value)


def _vector(value, size, path):
    if not isinstance(value, list):
        raise InputError(f"expected a list, got {type(value).__name__}", path=path)
    if size is not None and len(value) != size:
        raise InputError(f"dimension mismatch: expected {size} entries, got {len(value)}", path=path)
    return [_number(v, f"{path}[{k}]") for k, v in enumerate(value)]


def _matrix(value, rows, cols, path):
    if not isinstance(value, list):
        raise InputError(f"expected a list of rows, got {type(value).__name__}", path=path)
    if len(value) != rows:
        raise InputError(f"dimension mismatch: expected {rows} rows, got {len(value)}", path=path)
    return [_vector(row, cols, f"{path}[{k}]") for k, row in enumerate(value)]


def _require(doc, key, path=""):
    if key not in doc:
        raise InputError("missing required field", path=f"{path}{key}")
    return doc[key]


def _object(value, path):
    if not isinstance(value, dict):
        raise InputError(f"expected an object, got {type(value).__name__}", path=path)
    return value


def _check_keys(doc, allowed, path=""):
    extra = sorted(set(doc) - allowed)
    if extra:
        raise InputError(f"unknown field(s) {', '.join(extra)}", path=path or extra[0])


def _parse_qp(doc) -> ZeroOneQP:
    _check_keys(doc, QP_KEYS)
    n = _integer(_require(doc, "n"), "n")
    if n < 1:
        raise InputError("n must be at least 1", path="n")
    c = _vector(_require(doc, "c"), n, "c")
    Q = _matrix(_require(doc, "Q"), n, n, "Q")
    quad = {}
    if doc.get("quad_constraint") is not None:
        qc = _object(doc["quad_constraint"], "quad_constraint")
        _check_keys(qc, {"h", "G", "g"}, "quad_constraint")
        quad = dict(
            h=_vector(_require(qc, "h", "quad_constraint."), n, "quad_constraint.h"),
            G=_matrix(_require(qc, "G", "quad_constraint."), n, n, "quad_constraint.G"),
            g=_number(_require(qc, "g", "quad_constraint."), "quad_constraint.g"),
        )
    rows = []
    raw_rows = doc.get("x_constraints") or []
    if not isinstance(raw_rows, list):
        raise InputError("expected a list", path="x_constraints")
    for k, raw in enumerate(raw_rows):
        path = f"x_constraints[{k}]"
        raw = _object(raw, path)
        _check_keys(raw, {"coeffs", "sense", "rhs"}, path)
        sense = _require(raw, "sense", path + ".")
        if sense not in ("<=", "=", ">="):
            raise InputError(f"sense must be one of <=, =, >=; got {sense!r}", path=f"{path}.sense")
        rows.append(
            (_vector(_require(raw, "coeffs", path + "."), n, f"{path}.coeffs"), sense,
             _number(_require(raw, "rhs", path + "."), f"{path}.rhs"))
        )
    return make_qp(c, Q, x_constraints=rows, **quad)


def _parse_threading(doc) -> ThreadingInstance:
    _check_keys(doc, THREADING_KEYS)
    lengths_raw = _require(doc, "lengths")
    if not isinstance(lengths_raw, list) or not lengths_raw:
        raise InputError("expected a non-empty list", path="lengths")
    lengths = [_integer(v, f"lengths[{k}]") for k, v in enumerate(lengths_raw)]
    m = _integer(_require(doc, "m"), "m")
    if m != len(lengths):
        raise InputError(f"dimension mismatch: m={m} but {len(lengths)} lengths", path="m")
    N = _integer(_require(doc, "N"), "N")
    edges = []
    for k, e in enumerate(doc.get("edges") or []):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError("edge must be a pair [i, k]", path=f"edges[{k}]")
        edges.append((_integer(e[0], f"edges[{k}][0]"), _integer(e[1], f"edges[{k}][1]")))
    pairs = {}
    for k, rec in enumerate(doc.get("pair_scores") or []):
        path = f"pair_scores[{k}]"
        rec = _object(rec, path)
        _check_keys(rec, {"i", "j", "k", "l", "value"}, path)
        i, j, kk, l = (_integer(_require(rec, key, path + "."), f"{path}.{key}") for key in "ijkl")
        pairs[(i, j), (kk, l)] = _number(_require(rec, "value", path + "."), f"{path}.value")
    max_gap = doc.get("max_gap")
    if max_gap is not None:
        if not isinstance(max_gap, list):
            raise InputError("expected a list", path="max_gap")
        max_gap = [None if d is None else _integer(d, f"max_gap[{k}]") for k, d in enumerate(max_gap)]
    if any(l <= 0 for l in lengths):
        raise InputError("segment lengths must be positive", path="lengths")
    n = derive_positions(N, lengths)
    scores = _matrix(_require(doc, "linear_scores"), m, n, "linear_scores")
    return make_instance(N=N, lengths=lengths, linear_scores=scores, edges=edges, pair_scores=pairs, max_gap=max_gap)


def parse_instance(text: str) -> ZeroOneQP | ThreadingInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    doc = _object(doc, "$")
    kind = _require(doc, "kind")
    if kind == "qp01":
        return _parse_qp(doc)
    if kind == "threading":
        return _parse_threading(doc)
    raise InputError(f"unknown kind {kind!r}; expected 'qp01' or 'threading'", path="kind")


def load_instance(path) -> ZeroOneQP | ThreadingInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _plain(v):
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


def _plain_list(arr):
    if getattr(arr, "ndim", 1) == 2:
        return [[_plain(v) for v in row] for row in arr]
    return [_plain(v) for v in arr]


def to_document(instance) -> dict:
    if isinstance(instance, ZeroOneQP):
        doc = {"kind": "qp01", "n": instance.n, "c": _plain_list(instance.c), "Q": _plain_list(instance.Q)}
        if instance.quad_constraint is not None:
            qc = instance.quad_constraint
            doc["quad_constraint"] = {"h": _plain_list(qc.h), "G": _plain_list(qc.G), "g": _plain(qc.g)}
        if instance.x_constraints:
            doc["x_constraints"] = [
                {"coeffs": _plain_list(r.coeffs), "sense": r.sense, "rhs": _plain(r.rhs)} for r in instance.x_constraints
            ]
        return doc
    if isinstance(instance, ThreadingInstance):
        doc = {
            "kind": "threading",
            "m": instance.m,
            "N": instance.N,
            "lengths": list(instance.lengths),
            "linear_scores": _plain_list(instance.linear_scores),
        }
        if instance.edges:
            doc["edges"] = [list(e) for e in instance.edges]
        if instance.pair_scores:
            doc["pair_scores"] = [
                {"i": i, "j": j, "k": k, "l": l, "value": _plain(v)}
                for ((i, j), (k, l)), v in sorted(instance.pair_scores.items())
            ]
        if instance.max_gap is not None:
            doc["max_gap"] = list(instance.max_gap)
        return doc
    raise TypeError(f"cannot serialize {type(instance).__name__}")


def serialize_instance(instance) -> str:
    """JSON text with one top-level field per line and compact values."""
    doc = to_document(instance)
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items())
    return "{\n" + body + "\n}\n"
