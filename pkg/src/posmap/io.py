"""JSON file formats ``posmap-map-v1`` and ``posmap-state-v1``.

Complex numbers are ``[re, im]`` pairs; matrices are nested row-major lists.
Floats are written with 17 significant digits so that a write/read cycle is
bit-exact.

Map file::

    {"format": "posmap-map-v1", "dim": 2,
     "kraus":   [{"weight": 1.0, "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]}
    # or  "bform":   [[[re, im], ...], ...]          (dim^2 x dim^2)
    # or  "builtin": {"name": "reduction", "params": []}

State file::

    {"format": "posmap-state-v1", "dims": [2, 2],
     "vector": [[re, im], ...]}          # or "density": [[[re, im], ...], ...]
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from .errors import PosmapError
from .mapcore import BFormMap, bform_from_kraus, builtin_map, canonical_decompose
from .schmidt import BipartitePureState

MAP_FORMAT = "posmap-map-v1"
STATE_FORMAT = "posmap-state-v1"
_MAP_REPRS = ("kraus", "bform", "builtin")


class SchemaError(PosmapError):
    """A file does not follow its schema; the message names the offending field."""


# -- encoding ---------------------------------------------------------------

def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).reshape(-1)]


def encode_matrix(M) -> list:
    return [encode_vector(row) for row in np.asarray(M)]


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite value")
    if x == 0.0:
        return "-0.0" if math.copysign(1.0, x) < 0 else "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj: Any, indent: int | None = None, _level: int = 0) -> str:
    """``json.dumps`` with floats rendered to 17 significant digits and sorted keys."""
    nl = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{" + nl + (sep + nl).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep numeric leaves on one line
        if all(not isinstance(x, (list, tuple, dict)) for x in obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        return "[" + nl + (sep + nl).join(dumps(x, indent, _level + 1) for x in obj) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- decoding ---------------------------------------------------------------

def _number(x, field: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{field}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise SchemaError(f"{field}: non-finite value")
    return x


def decode_complex(x, field: str) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(_number(x[0], field), _number(x[1], field))
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(_number(x, field), 0.0)
    raise SchemaError(f"{field}: expected [re, im] pair, got {x!r}")


def decode_vector(v, field: str) -> np.ndarray:
    if not isinstance(v, list):
        raise SchemaError(f"{field}: expected a list of [re, im] pairs")
    return np.array([decode_complex(z, f"{field}[{i}]") for i, z in enumerate(v)], dtype=np.complex128)


def decode_matrix(M, field: str) -> np.ndarray:
    if not isinstance(M, list) or not M or not all(isinstance(r, list) for r in M):
        raise SchemaError(f"{field}: expected a non-empty nested list (rows of [re, im] pairs)")
    rows = [decode_vector(r, f"{field}[{i}]") for i, r in enumerate(M)]
    if len({r.size for r in rows}) != 1:
        raise SchemaError(f"{field}: rows have unequal lengths")
    return np.vstack(rows)


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text() if str(path) != "-" else sys.stdin.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return data


def _dim(x, field: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise SchemaError(f"{field}: expected a positive integer, got {x!r}")
    return x


# -- maps -------------------------------------------------------------------

def map_to_dict(B: BFormMap, repr: str = "bform") -> dict:
    """Serialize a map; ``repr`` is ``bform``, ``kraus`` or ``builtin``."""
    out: dict = {"format": MAP_FORMAT, "dim": B.dim}
    if repr == "builtin":
        if B.origin is None:
            raise ValueError("map has no builtin origin")
        name, params = B.origin
        out["builtin"] = {"name": name, "params": [float(p) for p in params]}
    elif repr == "bform":
        out["bform"] = encode_matrix(B.matrix)
    elif repr == "kraus":
        dec = canonical_decompose(B)
        out["kraus"] = [{"weight": float(w), "matrix": encode_matrix(L)}
                        for w, L in zip(dec.eigenvalues, dec.kraus)]
    else:
        raise ValueError(f"unknown map representation {repr!r}")
    return out


def map_from_dict(data: dict) -> BFormMap:
    if data.get("format") != MAP_FORMAT:
        raise SchemaError(f"format: expected {MAP_FORMAT!r}, got {data.get('format')!r}")
    dim = _dim(data.get("dim"), "dim")
    present = [k for k in _MAP_REPRS if k in data]
    if len(present) != 1:
        raise SchemaError(f"exactly one of {', '.join(_MAP_REPRS)} must be present, found {present or 'none'}")
    kind = present[0]
    if kind == "builtin":
        spec = data["builtin"]
        if not isinstance(spec, dict) or not isinstance(spec.get("name"), str):
            raise SchemaError("builtin.name: expected a string")
        params = spec.get("params", [])
        if not isinstance(params, list):
            raise SchemaError("builtin.params: expected a list of numbers")
        params = [_number(p, f"builtin.params[{i}]") for i, p in enumerate(params)]
        return builtin_map(spec["name"], dim, params)
    if kind == "bform":
        M = decode_matrix(data["bform"], "bform")
        if M.shape != (dim * dim, dim * dim):
            raise SchemaError(f"bform: expected {dim * dim}x{dim * dim} for dim={dim}, got {M.shape[0]}x{M.shape[1]}")
        return BFormMap(dim, M)
    terms = data["kraus"]
    if not isinstance(terms, list) or not terms:
        raise SchemaError("kraus: expected a non-empty list of {weight, matrix}")
    decoded = []
    for i, t in enumerate(terms):
        if not isinstance(t, dict) or "weight" not in t or "matrix" not in t:
            raise SchemaError(f"kraus[{i}]: expected an object with weight and matrix")
        K = decode_matrix(t["matrix"], f"kraus[{i}].matrix")
        if K.shape != (dim, dim):
            raise SchemaError(f"kraus[{i}].matrix: expected {dim}x{dim}, got {K.shape[0]}x{K.shape[1]}")
        decoded.append((_number(t["weight"], f"kraus[{i}].weight"), K))
    return bform_from_kraus(decoded)


def load_map(path) -> BFormMap:
    return map_from_dict(_load_json(path))


def save_map(B: BFormMap, path, repr: str = "bform") -> None:
    Path(path).write_text(dumps(map_to_dict(B, repr), indent=1) + "\n")


# -- states -----------------------------------------------------------------

def state_to_dict(state) -> dict:
    """Serialize a :class:`BipartitePureState` (as ``vector``) or ``(rho, dims)`` (as ``density``)."""
    if isinstance(state, BipartitePureState):
        return {"format": STATE_FORMAT, "dims": list(state.dims), "vector": encode_vector(state.amplitudes)}
    rho, dims = state
    return {"format": STATE_FORMAT, "dims": [int(d) for d in dims], "density": encode_matrix(rho)}


def state_from_dict(data: dict) -> tuple[np.ndarray, tuple[int, int], bool]:
    """Return ``(density, dims, is_pure)``; vectors are turned into projectors.

    Normalization is not checked here (callers validate the state).
    """
    if data.get("format") != STATE_FORMAT:
        raise SchemaError(f"format: expected {STATE_FORMAT!r}, got {data.get('format')!r}")
    dims = data.get("dims")
    if not isinstance(dims, list) or len(dims) != 2:
        raise SchemaError("dims: expected [N, m]")
    N, m = _dim(dims[0], "dims[0]"), _dim(dims[1], "dims[1]")
    present = [k for k in ("vector", "density") if k in data]
    if len(present) != 1:
        raise SchemaError(f"exactly one of vector, density must be present, found {present or 'none'}")
    if present[0] == "vector":
        v = decode_vector(data["vector"], "vector")
        if v.size != N * m:
            raise SchemaError(f"vector: expected length {N * m} for dims {[N, m]}, got {v.size}")
        return np.outer(v, v.conj()), (N, m), True
    rho = decode_matrix(data["density"], "density")
    if rho.shape != (N * m, N * m):
        raise SchemaError(f"density: expected {N * m}x{N * m} for dims {[N, m]}, got {rho.shape[0]}x{rho.shape[1]}")
    return rho, (N, m), False


def load_state(path):
    return state_from_dict(_load_json(path))


def save_state(state, path) -> None:
    Path(path).write_text(dumps(state_to_dict(state), indent=1) + "\n")
