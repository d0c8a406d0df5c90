"""File formats: complex-matrix binary, 16-bit PGM images, CSV reports.

The matrix format is deliberately trivial to parse from any language:

    bytes 0..11   magic ``FIMLFMMATRIX``
    bytes 12..15  format version, u32 little-endian (currently 1)
    bytes 16..23  rows, u64 little-endian
    bytes 24..31  cols, u64 little-endian
    then rows*cols row-major (re, im) float32 little-endian pairs

Axis metadata travels in a ``<file>.meta`` sidecar of ``key = value``
lines.  Images are raw portable graymaps (P5, 16-bit, big-endian sample
order as Netpbm requires), magnitude in dB below peak clipped to a floor.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

MAGIC = b"FIMLFMMATRIX"
VERSION = 1
_HEADER = struct.Struct("<12sIQQ")

DB_IMAGE_FLOOR = -60.0


def write_matrix(path: str | Path, data: np.ndarray, meta: Mapping[str, object] | None = None) -> None:
    """Write a 2-D complex matrix and, optionally, its ``.meta`` sidecar."""
    data = np.asarray(data)
    if data.ndim != 2:
        raise ValueError(f"need a 2-D matrix, got shape {data.shape}")
    rows, cols = data.shape
    payload = np.ascontiguousarray(data.astype(np.complex64)).view(np.float32)
    if payload.dtype.byteorder not in ("<", "="):  # big-endian hosts
        payload = payload.astype("<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, rows, cols))
        fh.write(payload.tobytes())
    if meta is not None:
        write_meta(Path(str(path) + ".meta"), meta)


def read_matrix(path: str | Path) -> np.ndarray:
    """Read a matrix written by :func:`write_matrix` (complex64)."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, rows, cols = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ValueError(f"{path}: not a {MAGIC.decode()} file")
    if version != VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    expect = rows * cols * 8
    body = blob[_HEADER.size :]
    if len(body) != expect:
        raise ValueError(f"{path}: payload is {len(body)} bytes, expected {expect}")
    flat = np.frombuffer(body, dtype="<f4").astype(np.float32)
    return flat.view(np.complex64).reshape(rows, cols)


def _fmt(value: object) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_meta(path: str | Path, meta: Mapping[str, object]) -> None:
    lines = [f"{key} = {_fmt(value)}" for key, value in meta.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_meta(path: str | Path) -> dict[str, str]:
    table: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        table[key.strip()] = value.strip()
    return table


def write_pgm(path: str | Path, image: np.ndarray, floor_db: float = DB_IMAGE_FLOOR) -> None:
    """Write |image| in dB below its peak as a 16-bit raw PGM.

    The dB scale is clipped to [floor_db, 0] and mapped linearly to
    [0, 65535]; an all-zero image maps to all-black.
    """
    if floor_db >= 0:
        raise ValueError("floor_db must be negative")
    mag = np.abs(np.asarray(image))
    if mag.ndim != 2:
        raise ValueError(f"need a 2-D image, got shape {mag.shape}")
    peak = mag.max()
    if peak == 0.0:
        levels = np.zeros(mag.shape, dtype=">u2")
    else:
        with np.errstate(divide="ignore"):
            db = 20.0 * np.log10(mag / peak)
        db = np.clip(db, floor_db, 0.0)
        levels = np.round((db - floor_db) / -floor_db * 65535.0).astype(">u2")
    header = f"P5\n{mag.shape[1]} {mag.shape[0]}\n65535\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(levels.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a raw 16-bit PGM back as levels in [0, 65535]."""
    blob = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:  # magic, width, height, maxval
        while pos < len(blob) and blob[pos : pos + 1].isspace():
            pos += 1
        if blob[pos : pos + 1] == b"#":
            pos = blob.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(blob) and not blob[pos : pos + 1].isspace():
            pos += 1
        fields.append(blob[start:pos])
    if fields[0] != b"P5":
        raise ValueError(f"{path}: not a raw PGM")
    width, height, maxval = (int(f) for f in fields[1:])
    if maxval != 65535:
        raise ValueError(f"{path}: expected 16-bit samples, maxval {maxval}")
    pos += 1  # single whitespace after maxval
    data = np.frombuffer(blob, dtype=">u2", offset=pos, count=width * height)
    return data.reshape(height, width).astype(np.uint16)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    """Write an RFC-4180-style CSV (CRLF, header row, repr-precision floats)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])
