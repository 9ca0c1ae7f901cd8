"""Embedding acquisition: HTTP service client plus an offline fallback.

The toolkit never runs a neural model in-process. Vectors come either from
an HTTP endpoint (``POST {texts, model} -> {vectors}``) or from a
content-hash pseudo-embedder good enough for plumbing tests and offline toy
runs. Both paths return unit-normalized rows, and both cache to the binary
format keyed by (model id, corpus hash) so a warm rerun makes no requests.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from ..errors import EmbeddingProviderError
from ..ingest.records import CleanDoc, corpus_content_hash
from .matrix import EmbeddingMatrix, load_embeddings, write_embeddings

logger = logging.getLogger(__name__)

DEFAULT_MODEL = "all-mpnet-base-v2"


class Provider(Protocol):
    model_id: str

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray: ...


@dataclass
class HttpEmbeddingProvider:
    """Client for a sentence-embedding HTTP service with retry and backoff."""

    url: str | None = None
    api_key: str | None = None
    model_id: str = DEFAULT_MODEL
    max_retries: int = 3
    backoff_base: float = 0.5
    timeout: float = 60.0
    session: object | None = None
    request_count: int = 0

    def _session(self):
        if self.session is None:
            import requests

            self.session = requests.Session()
        return self.session

    def resolved_url(self) -> str:
        url = self.url or os.environ.get("EMBED_API_URL")
        if not url:
            raise EmbeddingProviderError(
                "no embedding endpoint configured (set EMBED_API_URL)")
        return url

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        url = self.resolved_url()
        key = self.api_key or os.environ.get("EMBED_API_KEY")
        headers = {"Content-Type": "application/json"}
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {"texts": list(texts), "model": self.model_id}

        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                self.request_count += 1
                response = self._session().post(
                    url, json=payload, headers=headers, timeout=self.timeout)
                status = getattr(response, "status_code", 200)
                if status >= 500:
                    raise EmbeddingProviderError(f"server error {status}")
                if status >= 400:
                    # Client errors will not heal on retry.
                    raise _Fatal(f"request rejected with status {status}")
                vectors = response.json()["vectors"]
                return np.asarray(vectors, dtype=np.float32)
            except _Fatal as exc:
                raise EmbeddingProviderError(str(exc)) from exc
            except Exception as exc:  # noqa: BLE001 - network failures vary widely
                last_error = exc
                logger.warning("embedding request failed (attempt %d): %s",
                               attempt + 1, exc)
        raise EmbeddingProviderError(
            f"embedding request failed after {self.max_retries + 1} attempts: {last_error}")


class _Fatal(Exception):
    pass


@dataclass
class HashingProvider:
    """Deterministic offline embeddings by word-hash random indexing.

    Every token owns a fixed pseudo-random unit direction seeded from its
    SHA-256; a text embeds as the normalized sum of its token directions.
    Lexical overlap therefore translates into vector similarity, which is
    enough structure for plumbing tests and offline toy pipelines, with no
    model download and full reproducibility.
    """

    dim: int = 64
    model_id: str = field(default="hash-64")
    request_count: int = 0

    def __post_init__(self):
        if self.model_id == "hash-64" and self.dim != 64:
            self.model_id = f"hash-{self.dim}"
        self._token_cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._token_cache.get(token)
        if vec is None:
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
            vec = rng.standard_normal(self.dim).astype(np.float64)
            self._token_cache[token] = vec
        return vec

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        import re

        self.request_count += 1
        rows = np.empty((len(texts), self.dim), dtype=np.float32)
        for i, text in enumerate(texts):
            tokens = re.findall(r"[a-z0-9]+", text.lower())
            if not tokens:
                tokens = [text or "\x00empty"]
            total = np.zeros(self.dim, dtype=np.float64)
            for token in tokens:
                total += self._token_vector(token)
            norm = np.linalg.norm(total)
            rows[i] = (total / norm if norm > 0 else total).astype(np.float32)
        return rows


def cache_path_for(cache_dir: str | Path, model_id: str, corpus_hash: str) -> Path:
    slug = model_id.replace("/", "_").replace(" ", "_")
    return Path(cache_dir) / f"{slug}_{corpus_hash[:16]}.emb"


def fetch_embeddings(
    docs: Sequence[CleanDoc],
    provider: Provider,
    cache_dir: str | Path | None = None,
    batch_size: int = 64,
) -> EmbeddingMatrix:
    """Embed docs in order, one row each, with transparent batching.

    Results are cached keyed by (model id, corpus hash); a warm cache is
    served without touching the provider. Partial results are never cached
    or returned: any batch failure propagates with the failed batch index.
    """
    texts = [doc.text for doc in docs]
    ids = tuple(doc.id for doc in docs)
    corpus_hash = corpus_content_hash(docs)

    cache_file = None
    if cache_dir is not None:
        cache_file = cache_path_for(cache_dir, provider.model_id, corpus_hash)
        if cache_file.is_file():
            cached = load_embeddings(cache_file)
            if cached.n == len(texts) and cached.model_id == provider.model_id:
                logger.info("embedding cache hit: %s", cache_file)
                cached.ids = ids
                return cached
            logger.warning("embedding cache entry mismatched, refetching")

    chunks: list[np.ndarray] = []
    dim: int | None = None
    for batch_index, start in enumerate(range(0, len(texts), batch_size)):
        batch = texts[start:start + batch_size]
        try:
            vectors = provider.embed_batch(batch)
        except EmbeddingProviderError as exc:
            exc.failed_batches.append(batch_index)
            raise
        if vectors.ndim != 2 or vectors.shape[0] != len(batch):
            raise EmbeddingProviderError(
                f"batch {batch_index}: provider returned shape {vectors.shape} "
                f"for {len(batch)} texts", failed_batches=[batch_index])
        if dim is None:
            dim = int(vectors.shape[1])
        elif vectors.shape[1] != dim:
            raise EmbeddingProviderError(
                f"batch {batch_index}: dimension changed from {dim} to "
                f"{vectors.shape[1]}", failed_batches=[batch_index])
        chunks.append(vectors.astype(np.float32))

    if not chunks:
        matrix = EmbeddingMatrix(np.zeros((0, 0), dtype=np.float32),
                                 provider.model_id, ids)
        return matrix

    matrix = EmbeddingMatrix(np.vstack(chunks), provider.model_id, ids).normalized()
    if cache_file is not None:
        write_embeddings(matrix, cache_file)
    return matrix
