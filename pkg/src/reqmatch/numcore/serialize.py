"""Binary tensor payloads.

Layout per tensor: shape header (uint32 LE rank, then each dim as
uint32 LE) followed by the row-major float32 data, little-endian. Files
holding several tensors concatenate payloads; the name table lives in
the surrounding manifest, in payload order.
"""

from __future__ import annotations

import struct
from typing import BinaryIO

import numpy as np

from ..errors import DataError


def write_tensor(fh: BinaryIO, arr: np.ndarray) -> None:
    data = np.ascontiguousarray(arr, dtype="<f4")
    fh.write(struct.pack("<I", data.ndim))
    fh.write(struct.pack(f"<{data.ndim}I", *data.shape))
    fh.write(data.tobytes())


def read_tensor(fh: BinaryIO) -> np.ndarray:
    head = fh.read(4)
    if len(head) != 4:
        raise DataError("tensor payload truncated: missing rank")
    (rank,) = struct.unpack("<I", head)
    if rank > 8:
        raise DataError(f"tensor payload corrupt: rank {rank}")
    dims_raw = fh.read(4 * rank)
    if len(dims_raw) != 4 * rank:
        raise DataError("tensor payload truncated: missing dims")
    shape = struct.unpack(f"<{rank}I", dims_raw)
    count = int(np.prod(shape)) if rank else 1
    body = fh.read(4 * count)
    if len(body) != 4 * count:
        raise DataError("tensor payload truncated: missing data")
    arr = np.frombuffer(body, dtype="<f4").reshape(shape).astype(np.float32)
    if not np.all(np.isfinite(arr)):
        raise DataError("tensor payload contains non-finite values")
    return arr


def write_named_tensors(path, named: dict[str, np.ndarray]) -> list[str]:
    """Write payloads in dict order; returns the name table for the manifest."""
    names = list(named)
    with open(path, "wb") as fh:
        for name in names:
            write_tensor(fh, named[name])
    return names


def read_named_tensors(path, names: list[str]) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    with open(path, "rb") as fh:
        for name in names:
            out[name] = read_tensor(fh)
        if fh.read(1):
            raise DataError("tensor payload has trailing bytes")
    return out
