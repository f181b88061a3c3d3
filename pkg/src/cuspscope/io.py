"""Field and signal dumps, CSV exports.

Binary layout: an 8-byte little-endian unsigned header length, the UTF-8 JSON
header ``{dims, grid, scales, wavelet, convention, ...}``, then the values as
little-endian float64 ``(re, im)`` pairs in row-major order with the scale
axis outermost.  A signal is stored as a single-slice field.
"""
from __future__ import annotations

import csv
import json
import struct
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .engine import CONVENTION, GridSignal, HalfSpaceField, ScaleGrid
from .wavelets import WaveletSpec

__all__ = [
    "FormatError",
    "write_field",
    "read_field",
    "write_signal",
    "read_signal",
    "write_csv",
    "field_slice_rows",
    "dump_json",
]

_LEN = struct.Struct("<Q")
_DTYPE = np.dtype("<f8")


class FormatError(ValueError):
    """Malformed dump file."""


def dump_json(obj: Any) -> str:
    """Deterministic JSON (sorted keys, numpy scalars and arrays converted)."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, (tuple, set)):
        return list(o)
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _write(path, header: dict, values: np.ndarray) -> None:
    head = json.dumps(header, sort_keys=True, default=_default).encode()
    pairs = np.empty(values.shape + (2,), dtype=_DTYPE)
    pairs[..., 0] = values.real
    pairs[..., 1] = values.imag if np.iscomplexobj(values) else 0.0
    with open(path, "wb") as fh:
        fh.write(_LEN.pack(len(head)))
        fh.write(head)
        fh.write(pairs.tobytes(order="C"))


def _read(path) -> tuple[dict, np.ndarray]:
    raw = Path(path).read_bytes()
    if len(raw) < _LEN.size:
        raise FormatError("file too short")
    (n,) = _LEN.unpack_from(raw)
    try:
        header = json.loads(raw[_LEN.size:_LEN.size + n].decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad header: {exc}") from exc
    try:
        dims = tuple(int(d) for d in header["dims"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad header dims: {exc}") from exc
    body = np.frombuffer(raw, dtype=_DTYPE, offset=_LEN.size + n)
    if body.size != 2 * int(np.prod(dims)):
        raise FormatError(f"payload has {body.size} floats, expected {2 * int(np.prod(dims))}")
    pairs = body.reshape(dims + (2,))
    return header, pairs[..., 0] + 1j * pairs[..., 1]


def write_field(path, field: HalfSpaceField, extra: dict | None = None) -> None:
    """Dump a (materialized) field with its self-describing header."""
    header = field.metadata()
    header["meta"] = {k: v for k, v in field.meta.items() if _jsonable(v)}
    if extra:
        header["extra"] = extra
    _write(path, header, field.values)


def _jsonable(v) -> bool:
    try:
        json.dumps(v, default=_default)
        return True
    except TypeError:
        return False


def read_field(path) -> HalfSpaceField:
    header, values = _read(path)
    grid = header["grid"]
    sc = header["scales"]
    wavelet = None if header.get("wavelet") is None else WaveletSpec.from_dict(header["wavelet"])
    return HalfSpaceField(
        ScaleGrid(sc["a_min"], sc["a_max"], sc["count"]),
        grid["n_points"], grid["length"], grid["dimension"], grid["origin"],
        values=values, wavelet=wavelet, kind=header.get("kind", "transform"),
        meta=header.get("meta", {}),
    )


def write_signal(path, signal: GridSignal, extra: dict | None = None) -> None:
    header = {
        "dims": [1] + list(signal.samples.shape),
        "grid": {"n_points": signal.n_points, "length": signal.length,
                 "origin": list(signal.origin), "dimension": signal.dimension},
        "scales": None,
        "wavelet": None,
        "convention": CONVENTION,
        "kind": "signal",
        "real": not np.iscomplexobj(signal.samples),
    }
    if extra:
        header["extra"] = extra
    _write(path, header, signal.samples[None])


def read_signal(path) -> GridSignal:
    header, values = _read(path)
    if header.get("kind") != "signal":
        raise FormatError("not a signal dump")
    grid = header["grid"]
    samples = values[0]
    if header.get("real", False):
        samples = samples.real.copy()
    return GridSignal(samples, grid["length"], grid["origin"])


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def field_slice_rows(field: HalfSpaceField) -> tuple[list[str], list[tuple]]:
    """``|W|`` slices as long-format rows ``(a, x[, y], absW)``."""
    dim = field.dimension
    axes = [field.axis(i) for i in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    cols = ["a"] + ["x", "y"][:dim] + ["absW"]
    rows = []
    for _, a, sl in field.iter_slices():
        flat = [m.ravel() for m in mesh]
        mag = np.abs(sl).ravel()
        rows.extend(zip([float(a)] * mag.size, *[f.tolist() for f in flat], mag.tolist()))
    return cols, rows
