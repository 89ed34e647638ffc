"""Standalone parser for the simulator's binary snapshot files.

Layout (little-endian): 32-byte header of magic "GN2D", format version u32,
nx u32, ny u32, field count u32, 4 pad bytes, time f64; then `nfields`
row-major float64 planes of shape (nx, ny), in order zeta, v1, v2.

Kept independent of the simulator package on purpose: this component only
reads its published file formats.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"GN2D"
SUPPORTED_VERSION = 1
HEADER = struct.Struct("<4sIIIIxxxxd")

FIELD_INDEX = {"zeta": 0, "v1": 1, "v2": 2}


@dataclass
class Snapshot:
    version: int
    nx: int
    ny: int
    nfields: int
    t: float
    planes: list


class SnapshotParseError(ValueError):
    pass


def read_snapshot(path) -> Snapshot:
    with open(path, "rb") as fh:
        raw = fh.read(HEADER.size)
        if len(raw) < HEADER.size:
            raise SnapshotParseError(f"{path}: truncated header "
                                     f"({len(raw)} of {HEADER.size} bytes)")
        magic, version, nx, ny, nfields, t = HEADER.unpack(raw)
        if magic != MAGIC:
            raise SnapshotParseError(f"{path}: bad magic {magic!r}")
        if version != SUPPORTED_VERSION:
            raise SnapshotParseError(f"{path}: unsupported version {version}")
        if nx <= 0 or ny <= 0 or nfields <= 0:
            raise SnapshotParseError(f"{path}: nonsensical header "
                                     f"nx={nx} ny={ny} nfields={nfields}")
        planes = []
        nbytes = 8 * nx * ny
        for i in range(nfields):
            buf = fh.read(nbytes)
            if len(buf) < nbytes:
                raise SnapshotParseError(
                    f"{path}: truncated plane {i} ({len(buf)} of {nbytes} bytes)")
            planes.append(np.frombuffer(buf, dtype="<f8").reshape(nx, ny).copy())
    return Snapshot(version, nx, ny, nfields, t, planes)


def centered_curl(v1: np.ndarray, v2: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """curl = d(v2)/dx - d(v1)/dy via periodic centered differences."""
    d1v2 = (np.roll(v2, -1, axis=0) - np.roll(v2, 1, axis=0)) / (2 * dx)
    d2v1 = (np.roll(v1, -1, axis=1) - np.roll(v1, 1, axis=1)) / (2 * dy)
    return d1v2 - d2v1
