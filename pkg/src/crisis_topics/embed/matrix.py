"""Embedding matrix type and its binary file format.

Layout: magic ``EMB1``, little-endian u32 row count, u32 column count,
u16 model-id byte length, the UTF-8 model id, the row-major float32 payload,
then the xxhash64 of the payload as a little-endian u64. Values are stored
verbatim; writing and re-reading a file is bit-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import xxhash

from ..errors import EmbeddingFormatError

_MAGIC = b"EMB1"


@dataclass
class EmbeddingMatrix:
    """Float32 rows aligned to a document order; ids travel separately when
    the source provides them."""

    values: np.ndarray
    model_id: str
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float32)
        if self.values.ndim != 2:
            raise EmbeddingFormatError("embedding matrix must be 2-dimensional")
        if not np.isfinite(self.values).all():
            raise EmbeddingFormatError("embedding matrix contains NaN or Inf")
        if self.ids is not None and len(self.ids) != self.values.shape[0]:
            raise EmbeddingFormatError("id list length does not match row count")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def normalized(self) -> "EmbeddingMatrix":
        """Rows scaled to unit L2 norm (zero rows left untouched)."""
        norms = np.linalg.norm(self.values, axis=1, keepdims=True)
        safe = np.where(norms == 0.0, 1.0, norms)
        return EmbeddingMatrix(self.values / safe, self.model_id, self.ids)


def write_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> None:
    model_bytes = matrix.model_id.encode("utf-8")
    if len(model_bytes) > 0xFFFF:
        raise EmbeddingFormatError("model id too long for format header")
    payload = matrix.values.astype("<f4").tobytes()
    checksum = xxhash.xxh64(payload).intdigest()
    header = _MAGIC + struct.pack("<IIH", matrix.n, matrix.dim, len(model_bytes))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as handle:
        handle.write(header)
        handle.write(model_bytes)
        handle.write(payload)
        handle.write(struct.pack("<Q", checksum))


def load_embeddings(path: str | Path) -> EmbeddingMatrix:
    data = Path(path).read_bytes()
    if len(data) < 14 or data[:4] != _MAGIC:
        raise EmbeddingFormatError(f"{path}: not an EMB1 file")
    n, dim, model_len = struct.unpack("<IIH", data[4:14])
    offset = 14 + model_len
    if len(data) < offset:
        raise EmbeddingFormatError(f"{path}: truncated model id")
    model_id = data[14:offset].decode("utf-8")
    expected_payload = n * dim * 4
    expected_total = offset + expected_payload + 8
    if len(data) != expected_total:
        raise EmbeddingFormatError(
            f"{path}: expected {expected_total} bytes for {n}x{dim}, got {len(data)}")
    payload = data[offset:offset + expected_payload]
    (recorded,) = struct.unpack("<Q", data[offset + expected_payload:])
    actual = xxhash.xxh64(payload).intdigest()
    if recorded != actual:
        raise EmbeddingFormatError(
            f"{path}: payload checksum mismatch "
            f"(recorded {recorded:016x}, computed {actual:016x})")
    values = np.frombuffer(payload, dtype="<f4").reshape(n, dim)
    if not np.isfinite(values).all():
        raise EmbeddingFormatError(f"{path}: payload contains NaN or Inf")
    return EmbeddingMatrix(values=values.copy(), model_id=model_id)
