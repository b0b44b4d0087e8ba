"""JSON interchange format for states and channels.

Complex entries are ``[re, im]`` pairs and matrices are row-major nested
lists::

    {"type": "pure_state", "d": 2, "f": 2, "coeffs": [[[0.7, 0.0], ...], ...]}
    {"type": "density_matrix", "d": 2, "f": 2, "matrix": [...]}
    {"type": "kraus_channel", "d": 2, "f": 2, "trace_preserving": true, "kraus": [[...], ...]}

For channels ``d`` and ``f`` are the input and output dimensions, which must
agree.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .states import DensityMatrix, KrausChannel, PureState


class FormatError(ValueError):
    """Raised for JSON documents that do not follow the interchange format."""


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix is not a nested list of [re, im] pairs: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"matrix must have shape (rows, cols, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def to_dict(obj) -> dict:
    if isinstance(obj, PureState):
        return {"type": "pure_state", "d": obj.d, "f": obj.f, "coeffs": encode_matrix(obj.coeffs)}
    if isinstance(obj, DensityMatrix):
        return {"type": "density_matrix", "d": obj.d, "f": obj.f,
                "normalized": obj.normalized, "matrix": encode_matrix(obj.matrix)}
    if isinstance(obj, KrausChannel):
        return {"type": "kraus_channel", "d": obj.dim, "f": obj.dim,
                "trace_preserving": obj.trace_preserving,
                "kraus": [encode_matrix(k) for k in obj.kraus]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_dict(data: dict):
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    kind = data.get("type")
    try:
        if kind == "pure_state":
            state = PureState(decode_matrix(data["coeffs"]))
            if (state.d, state.f) != (data["d"], data["f"]):
                raise FormatError("coefficient shape disagrees with d, f")
            return state
        if kind == "density_matrix":
            return DensityMatrix(decode_matrix(data["matrix"]), int(data["d"]), int(data["f"]),
                                 normalized=bool(data.get("normalized", True)))
        if kind == "kraus_channel":
            if data["d"] != data["f"]:
                raise FormatError("only square channels (d == f) are supported")
            ch = KrausChannel(tuple(decode_matrix(k) for k in data["kraus"]),
                              trace_preserving=bool(data["trace_preserving"]))
            if ch.dim != data["d"]:
                raise FormatError("Kraus operator size disagrees with d")
            return ch
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r} for type {kind!r}") from exc
    except FormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid {kind}: {exc}") from exc
    raise FormatError(f"unknown type {kind!r}")


def dumps(obj) -> str:
    return json.dumps(to_dict(obj))


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_dict(data)


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def load(path):
    return loads(Path(path).read_text())
