"""Binary field snapshots.

Layout (little-endian): a 32-byte header -- magic "GN2D", format version
u32, nx u32, ny u32, field-count u32, 4 padding bytes, time as binary64 --
followed by row-major binary64 planes in order zeta, V1, V2.
"""

from __future__ import annotations

import struct

import numpy as np

from .fields import State
from .grid import Grid, field, vector

MAGIC = b"GN2D"
VERSION = 1
HEADER = struct.Struct("<4sIIIIxxxxd")
assert HEADER.size == 32


def write_snapshot(path, state: State):
    g = state.grid
    planes = (state.zeta.values, state.v.v1.values, state.v.v2.values)
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, g.nx, g.ny, len(planes), state.t))
        for plane in planes:
            fh.write(np.ascontiguousarray(plane, dtype="<f8").tobytes())


def read_snapshot(path) -> tuple[dict, list[np.ndarray]]:
    """Internal reader used by round-trip tests; the plotting component
    carries its own independent parser."""
    with open(path, "rb") as fh:
        raw = fh.read(HEADER.size)
        if len(raw) < HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, nx, ny, nfields, t = HEADER.unpack(raw)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        planes = []
        for i in range(nfields):
            buf = fh.read(8 * nx * ny)
            if len(buf) < 8 * nx * ny:
                raise ValueError(f"{path}: truncated plane {i}")
            planes.append(np.frombuffer(buf, dtype="<f8").reshape(nx, ny).copy())
    header = {"version": version, "nx": nx, "ny": ny, "nfields": nfields, "t": t}
    return header, planes
