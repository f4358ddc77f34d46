"""Field container (binary) and CSV exports.

Binary layout, all little-endian:

    magic   4 bytes  b"RADF"
    version u4       1
    endian  1 byte   b"<"
    pad     3 bytes
    R       f8
    M       u8
    data    (M-1) complex samples of g = r f, interleaved re, im as f8
"""
from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .radial_spectral import RadialField, RadialGrid

MAGIC = b"RADF"
VERSION = 1
_HEADER = struct.Struct("<4sI1s3xdQ")


class FormatError(ValueError):
    pass


def write_field(path, field: RadialField) -> None:
    g = field.grid
    data = np.empty(2 * g.n, dtype="<f8")
    data[0::2] = field.samples.real
    data[1::2] = field.samples.imag
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, b"<", float(g.R), int(g.M)))
        fh.write(data.tobytes())


def read_field(path) -> RadialField:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError("file shorter than the header")
    magic, version, endian, R, M = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if endian != b"<":
        raise FormatError(f"unsupported endian tag {endian!r}")
    grid = RadialGrid(R, int(M))
    data = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if data.size != 2 * grid.n:
        raise FormatError(f"expected {2 * grid.n} values, found {data.size}")
    return RadialField(grid, data[0::2] + 1j * data[1::2])


def field_to_csv(path, field: RadialField) -> None:
    """Columns r, re, im of the physical values f(r)."""
    vals = field.values
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "re", "im"])
        for r, v in zip(field.grid.r, vals):
            w.writerow([repr(float(r)), repr(float(v.real)), repr(float(v.imag))])


def rows_to_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
