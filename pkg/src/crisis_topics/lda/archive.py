"""Model archive: one zip with a JSON manifest and raw count matrices.

Matrices are little-endian 32-bit integers, row-major. Reloading an archive
reproduces identical top-term output; per-token assignments are chain state,
not part of the estimate, and are not archived.
"""

from __future__ import annotations

import io
import json
import zipfile
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..ioutil import sha256_text
from .gibbs import LdaConfig, LdaModel

_FORMAT = "lda-archive/1"


def _matrix_bytes(matrix: np.ndarray) -> bytes:
    return np.ascontiguousarray(matrix, dtype="<i4").tobytes()


def _matrix_from_bytes(data: bytes, shape: tuple[int, ...]) -> np.ndarray:
    expected = int(np.prod(shape)) * 4
    if len(data) != expected:
        raise ConfigError(f"matrix payload is {len(data)} bytes, expected {expected}")
    return np.frombuffer(data, dtype="<i4").reshape(shape).astype(np.int32)


def vocabulary_hash(terms: tuple[str, ...]) -> str:
    return sha256_text("\n".join(terms))


def save_model(model: LdaModel, path: str | Path) -> None:
    if not model.vocab_terms:
        raise ConfigError("refusing to archive a model without vocabulary terms")
    manifest = {
        "format": _FORMAT,
        "config": {
            "num_topics": model.config.num_topics,
            "iterations": model.config.iterations,
            "burn_in": model.config.burn_in,
            "alpha": model.config.alpha,
            "beta": model.config.beta,
            "seed": model.config.seed,
            "average_after_burn_in": model.config.average_after_burn_in,
        },
        "vocab_hash": vocabulary_hash(model.vocab_terms),
        "dims": {
            "num_topics": int(model.num_topics),
            "num_terms": int(model.num_terms),
            "num_docs": int(model.doc_topic_counts.shape[0]),
        },
        "matrix_encoding": "int32 little-endian row-major",
    }
    buffer = io.BytesIO()
    # Fixed timestamps keep archive bytes identical across reruns.
    stamp = (1980, 1, 1, 0, 0, 0)
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        def add(name: str, data: bytes) -> None:
            info = zipfile.ZipInfo(name, date_time=stamp)
            info.compress_type = zipfile.ZIP_DEFLATED
            archive.writestr(info, data)

        add("manifest.json", json.dumps(manifest, sort_keys=True, indent=2).encode())
        add("vocabulary.json", json.dumps(list(model.vocab_terms)).encode())
        add("doc_ids.json", json.dumps(list(model.doc_ids)).encode())
        add("topic_word.bin", _matrix_bytes(model.topic_word_counts))
        add("doc_topic.bin", _matrix_bytes(model.doc_topic_counts))
        add("topic_totals.bin", _matrix_bytes(model.topic_totals))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_bytes(buffer.getvalue())


def load_model(path: str | Path) -> LdaModel:
    with zipfile.ZipFile(path, "r") as archive:
        manifest = json.loads(archive.read("manifest.json"))
        if manifest.get("format") != _FORMAT:
            raise ConfigError(f"unsupported archive format {manifest.get('format')!r}")
        terms = tuple(json.loads(archive.read("vocabulary.json")))
        doc_ids = tuple(json.loads(archive.read("doc_ids.json")))
        dims = manifest["dims"]
        if vocabulary_hash(terms) != manifest["vocab_hash"]:
            raise ConfigError("vocabulary does not match its recorded hash")
        config = LdaConfig(**manifest["config"])
        model = LdaModel(
            config=config,
            doc_ids=doc_ids,
            vocab_terms=terms,
            topic_word_counts=_matrix_from_bytes(
                archive.read("topic_word.bin"),
                (dims["num_topics"], dims["num_terms"])),
            doc_topic_counts=_matrix_from_bytes(
                archive.read("doc_topic.bin"),
                (dims["num_docs"], dims["num_topics"])),
            topic_totals=_matrix_from_bytes(
                archive.read("topic_totals.bin"), (dims["num_topics"],)),
        )
    model.check_invariants()
    return model
