"""JSON state files.

Layout::

    {"dim_a": 2, "dim_b": 2,
     "matrix": [[[re, im], ...], ...],   # row-major, (dim_a*dim_b)^2 pairs
     "meta": {...}}                       # optional, echoed into reports

Floats are written with ``repr``, the shortest string that parses back to
the same double, so parse -> write round-trips exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .states import BipartiteState

__all__ = ["dump_state", "dumps_json", "load_state", "parse_state", "state_to_dict"]


def _check_dim(doc, key):
    if key not in doc:
        raise InvalidInputError(f"missing field '{key}'", "BAD_STATE_FILE")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InvalidInputError(f"field '{key}' must be a positive integer, got {v!r}", "BAD_STATE_FILE")
    return v


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InvalidInputError(f"{where}: expected a number, got {x!r}", "BAD_STATE_FILE")
    return float(x)


def parse_state(doc) -> tuple[BipartiteState, dict]:
    """Validate a decoded state document and build the state.

    Returns the state and the (possibly empty) ``meta`` mapping. Structural
    problems are reported with the offending ``matrix[row][col]``
    coordinates.
    """
    if not isinstance(doc, dict):
        raise InvalidInputError("state file must contain a JSON object", "BAD_STATE_FILE")
    da, db = _check_dim(doc, "dim_a"), _check_dim(doc, "dim_b")
    n = da * db
    rows = doc.get("matrix")
    if not isinstance(rows, list) or len(rows) != n:
        got = len(rows) if isinstance(rows, list) else type(rows).__name__
        raise InvalidInputError(
            f"matrix: expected {n} rows for dims {da}x{db}, got {got}", "BAD_STATE_FILE"
        )
    m = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise InvalidInputError(f"matrix[{i}]: expected {n} entries, got {got}", "BAD_STATE_FILE")
        for j, pair in enumerate(row):
            where = f"matrix[{i}][{j}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise InvalidInputError(f"{where}: expected a [re, im] pair, got {pair!r}", "BAD_STATE_FILE")
            m[i, j] = complex(_number(pair[0], where), _number(pair[1], where))
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        raise InvalidInputError("field 'meta' must be an object", "BAD_STATE_FILE")
    return BipartiteState(da, db, m), meta


def load_state(path) -> tuple[BipartiteState, dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}", "BAD_STATE_FILE") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}", "BAD_STATE_FILE"
        ) from exc
    return parse_state(doc)


def state_to_dict(s: BipartiteState, meta=None) -> dict:
    doc = {
        "dim_a": s.dim_a,
        "dim_b": s.dim_b,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in s.rho],
    }
    if meta:
        doc["meta"] = meta
    return doc


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def dump_state(s: BipartiteState, path=None, meta=None) -> str:
    text = dumps_json(state_to_dict(s, meta))
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
