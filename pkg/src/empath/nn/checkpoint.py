"""Binary checkpoint container shared by both models.

Layout: magic "EMPC", format version (u32), model kind as a length-prefixed
UTF-8 string ("SER" or "REC"), then one record per parameter: name length
(u32) + UTF-8 name, rank (u32), dims (u32 each), values as little-endian
float64. Records are read until end of file; round trips are bit-exact.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import CheckpointError

_MAGIC = b"EMPC"
_VERSION = 1
_KINDS = ("SER", "REC")


def save_checkpoint(path: str, kind: str, params: dict[str, np.ndarray]) -> None:
    if kind not in _KINDS:
        raise CheckpointError(f"unknown model kind {kind!r}")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _VERSION))
        kind_bytes = kind.encode("utf-8")
        fh.write(struct.pack("<I", len(kind_bytes)) + kind_bytes)
        for name, tensor in params.items():
            tensor = np.asarray(tensor, dtype=np.float64)
            name_bytes = name.encode("utf-8")
            fh.write(struct.pack("<I", len(name_bytes)) + name_bytes)
            fh.write(struct.pack("<I", tensor.ndim))
            fh.write(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
            fh.write(tensor.astype("<f8").tobytes())


def load_checkpoint(path: str) -> tuple[str, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 8 or blob[:4] != _MAGIC:
        raise CheckpointError("not a checkpoint file")
    (version,) = struct.unpack_from("<I", blob, 4)
    if version != _VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")

    offset = 8
    kind, offset = _read_string(blob, offset)
    if kind not in _KINDS:
        raise CheckpointError(f"unknown model kind {kind!r}")

    params: dict[str, np.ndarray] = {}
    while offset < len(blob):
        name, offset = _read_string(blob, offset)
        if name in params:
            raise CheckpointError(f"duplicate parameter {name!r}")
        if offset + 4 > len(blob):
            raise CheckpointError("truncated parameter record")
        (rank,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if offset + 4 * rank > len(blob):
            raise CheckpointError("truncated shape record")
        shape = struct.unpack_from(f"<{rank}I", blob, offset)
        offset += 4 * rank
        count = 1
        for d in shape:
            count *= d
        nbytes = count * 8
        if offset + nbytes > len(blob):
            raise CheckpointError(f"truncated values for parameter {name!r}")
        values = np.frombuffer(blob, dtype="<f8", count=count, offset=offset).copy()
        offset += nbytes
        params[name] = values.reshape(shape)
    return kind, params


def _read_string(blob: bytes, offset: int) -> tuple[str, int]:
    if offset + 4 > len(blob):
        raise CheckpointError("truncated string length")
    (length,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    if offset + length > len(blob):
        raise CheckpointError("truncated string payload")
    return blob[offset : offset + length].decode("utf-8"), offset + length
