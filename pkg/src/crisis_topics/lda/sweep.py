"""Topic-count sweep: one chain per K, scored by a coherence evaluator."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import ConfigError
from .gibbs import LdaConfig, LdaModel, top_terms, train_lda

logger = logging.getLogger(__name__)


@dataclass
class TopicCountSweep:
    best_k: int
    scores: dict[int, float]
    failures: dict[int, str]
    models: dict[int, LdaModel]


def sweep_topic_count(
    corpus: Sequence[tuple[str, Sequence[int]]],
    num_terms: int,
    base_config: LdaConfig,
    evaluator: Callable[[LdaModel], float],
    k_min: int = 5,
    k_max: int = 30,
    keep_models: bool = False,
) -> TopicCountSweep:
    """Train one model per K in [k_min, k_max] and return the argmax.

    Every chain reuses the base config (same seed policy) with only
    ``num_topics`` replaced. An evaluator failure marks that K as failed and
    excludes it from the argmax; ties prefer the smallest K.
    """
    if k_min > k_max:
        raise ConfigError(f"k_min={k_min} exceeds k_max={k_max}")
    if k_min < 1:
        raise ConfigError("k_min must be >= 1")

    scores: dict[int, float] = {}
    failures: dict[int, str] = {}
    models: dict[int, LdaModel] = {}
    for k in range(k_min, k_max + 1):
        config = dataclasses.replace(base_config, num_topics=k)
        model = train_lda(corpus, num_terms, config)
        try:
            scores[k] = float(evaluator(model))
        except Exception as exc:  # an evaluator bug must not sink the sweep
            logger.warning("evaluator failed for K=%d: %s", k, exc)
            failures[k] = str(exc)
            continue
        if keep_models:
            models[k] = model

    if not scores:
        raise ConfigError("every sweep configuration failed evaluation")
    best_k = max(sorted(scores), key=lambda k: (scores[k], -k))
    return TopicCountSweep(best_k=best_k, scores=scores, failures=failures, models=models)


def coherence_evaluator(
    reference_corpus: Sequence[Sequence[str]],
    vocab_terms: Sequence[str],
    top_n: int = 10,
    window_size: int = 110,
):
    """Evaluator scoring a model's top-N topic words by mean C_v coherence."""
    from ..coherence import CoherenceConfig, cv_coherence

    config = CoherenceConfig(window_size=window_size, top_n=top_n)

    def evaluate(model: LdaModel) -> float:
        if not model.vocab_terms:
            model = dataclasses.replace(model, vocab_terms=tuple(vocab_terms))
        topics = [
            [term for term, _ in top_terms(model, topic, top_n).terms]
            for topic in range(model.num_topics)
        ]
        report = cv_coherence(topics, reference_corpus, config)
        if report.mean is None:
            raise ValueError("no scoreable topics")
        return report.mean

    return evaluate
