"""JSON wire format for matrices, states and Choi matrices.

Matrix: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` row-major.
State: ``{"ds": int, "de": int, "matrix": <matrix>}``.
Choi:  ``{"din": int, "dout": int, "matrix": <matrix>}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import ChoiMatrix
from .errors import ConfigError, DimensionError
from .states import BipartiteState


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError("only 2-D matrices are serializable")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(d: dict) -> np.ndarray:
    try:
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed matrix object: {exc}") from exc
    if len(data) != rows * cols:
        raise ConfigError(f"matrix has {len(data)} entries, expected {rows * cols}")
    try:
        arr = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    if not np.all(np.isfinite(arr)):
        raise ConfigError("matrix has non-finite entries")
    return arr.reshape(rows, cols)


def state_to_json(state: BipartiteState) -> dict:
    return {"ds": state.ds, "de": state.de, "matrix": matrix_to_json(state.joint)}


def state_from_json(d: dict) -> BipartiteState:
    try:
        ds, de = int(d["ds"]), int(d["de"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed state object: {exc}") from exc
    return BipartiteState(ds, de, matrix_from_json(d.get("matrix")))


def choi_to_json(c: ChoiMatrix) -> dict:
    return {"din": c.dim_in, "dout": c.dim_out, "matrix": matrix_to_json(c.matrix)}


def choi_from_json(d: dict) -> ChoiMatrix:
    return ChoiMatrix(int(d["din"]), int(d["dout"]), matrix_from_json(d["matrix"]))


def load_json(path) -> dict:
    """Read a JSON file; parse errors report the offending line."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {context}\n    {' ' * (exc.colno - 1)}^"
        ) from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
