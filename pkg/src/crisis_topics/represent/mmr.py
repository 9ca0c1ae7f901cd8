"""Greedy keyword diversification by maximal marginal relevance.

Score of an unselected candidate d against the selected set S:

    lambda * relevance(d) - (1 - lambda) * max_{s in S} sim(d, s)

Candidates whose embedding exactly duplicates a selected one are skipped
while distinct candidates remain, so the output never carries duplicate
vectors unless nothing else is left to fill the requested count.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..errors import ConfigError


def mmr_select(
    candidates: Sequence[tuple[str, float]],
    embeddings: Mapping[str, np.ndarray],
    lam: float = 0.4,
    n: int = 10,
) -> list[str]:
    """Pick up to n diverse keywords; the first pick is the most relevant.

    Embeddings must be unit-normalized; similarity is their dot product.
    Ties break by higher relevance, then lexicographically.
    """
    if not candidates:
        raise ConfigError("mmr_select needs at least one candidate")
    if not (0.0 <= lam <= 1.0):
        raise ConfigError("lambda must be in [0, 1]")
    missing = [term for term, _ in candidates if term not in embeddings]
    if missing:
        raise ConfigError(f"candidates missing embeddings: {missing[:3]}")

    terms = [term for term, _ in candidates]
    relevance = {term: float(score) for term, score in candidates}
    vectors = {term: np.asarray(embeddings[term], dtype=np.float64) for term in terms}

    def is_duplicate(term: str, chosen: list[str]) -> bool:
        return any(np.array_equal(vectors[term], vectors[s]) for s in chosen)

    selected: list[str] = []
    remaining = list(terms)
    budget = min(n, len(candidates))
    while remaining and len(selected) < budget:
        fresh = [t for t in remaining if not is_duplicate(t, selected)]
        pool = fresh if fresh else remaining

        def score(term: str) -> float:
            if not selected:
                return relevance[term]
            worst = max(float(vectors[term] @ vectors[s]) for s in selected)
            return lam * relevance[term] - (1.0 - lam) * worst

        best = min(pool, key=lambda t: (-score(t), -relevance[t], t))
        selected.append(best)
        remaining.remove(best)
    return selected
