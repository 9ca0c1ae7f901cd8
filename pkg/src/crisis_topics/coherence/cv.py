"""C_v topic coherence: NPMI context vectors compared by cosine.

For a topic with top words ``w_1..w_N``, every word gets a context vector of
NPMI values against all N topic words, the topic vector is the sum of member
vectors, and the topic score is the mean cosine between each member vector
and the topic vector. Scores live in [-1, 1].
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .windows import WindowStats, sliding_windows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoherenceConfig:
    window_size: int = 110
    top_n: int = 10
    epsilon: float = 1e-12

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError("window_size must be >= 1")
        if self.top_n < 2:
            raise ValueError("top_n must be >= 2")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def npmi(term_i: str, term_j: str, stats: WindowStats, epsilon: float = 1e-12) -> float:
    """Normalized pointwise mutual information in [-1, 1], symmetric.

    ``ln((P(i,j)+eps) / (P(i)P(j))) / -ln(P(i,j)+eps)`` with window-relative
    probabilities; epsilon guards never-co-occurring pairs.
    """
    m = stats.num_windows
    if m == 0:
        return 0.0
    p_i = stats.count(term_i) / m
    p_j = stats.count(term_j) / m
    p_ij = stats.pair_count(term_i, term_j) / m
    if p_i == 0.0 or p_j == 0.0:
        return 0.0
    numerator = math.log((p_ij + epsilon) / (p_i * p_j))
    denominator = -math.log(p_ij + epsilon)
    if denominator == 0.0:
        # Pair present in every window: mutual information is saturated.
        return 1.0
    value = numerator / denominator
    return max(-1.0, min(1.0, value))


@dataclass
class TopicScore:
    topic_id: int
    score: float | None
    dropped_words: list[str]


@dataclass
class CoherenceReport:
    per_topic: list[TopicScore]
    mean: float | None

    def to_dict(self) -> dict:
        return {
            "per_topic": [
                {"topic_id": t.topic_id, "score": t.score,
                 "dropped_words": t.dropped_words}
                for t in self.per_topic
            ],
            "mean": self.mean,
        }


def _context_vectors(words: list[str], stats: WindowStats, epsilon: float) -> np.ndarray:
    vectors = np.zeros((len(words), len(words)))
    for i, w_i in enumerate(words):
        for j, w_j in enumerate(words):
            if j < i:
                vectors[i, j] = vectors[j, i]
            else:
                vectors[i, j] = npmi(w_i, w_j, stats, epsilon)
    return vectors


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def cv_coherence(
    topics: Sequence[Sequence[str]],
    reference_corpus: Sequence[Sequence[str]],
    config: CoherenceConfig | None = None,
    topic_ids: Sequence[int] | None = None,
    stats: WindowStats | None = None,
) -> CoherenceReport:
    """Score each topic's top words against the reference token streams.

    Words absent from the reference corpus are dropped with a warning; a
    topic reduced below two words is excluded from the mean. Precomputed
    ``stats`` may be passed when scoring many topic sets against one corpus.
    """
    if config is None:
        config = CoherenceConfig()
    ids = list(topic_ids) if topic_ids is not None else list(range(len(topics)))

    truncated = [list(words)[: config.top_n] for words in topics]
    if stats is None:
        tracked = {w for words in truncated for w in words}
        stats = sliding_windows(reference_corpus, config.window_size, terms=tracked)

    per_topic: list[TopicScore] = []
    for topic_id, words in zip(ids, truncated):
        present = [w for w in words if stats.count(w) > 0]
        dropped = [w for w in words if stats.count(w) == 0]
        if dropped:
            logger.warning("topic %d: dropped %d absent words %s",
                           topic_id, len(dropped), dropped)
        if len(present) < 2:
            logger.warning("topic %d: fewer than 2 scoreable words, excluded", topic_id)
            per_topic.append(TopicScore(topic_id, None, dropped))
            continue
        vectors = _context_vectors(present, stats, config.epsilon)
        topic_vector = vectors.sum(axis=0)
        sims = [_cosine(vectors[i], topic_vector) for i in range(len(present))]
        score = float(np.mean(sims))
        per_topic.append(TopicScore(topic_id, max(-1.0, min(1.0, score)), dropped))

    scored = [t.score for t in per_topic if t.score is not None]
    mean = float(np.mean(scored)) if scored else None
    return CoherenceReport(per_topic=per_topic, mean=mean)
