"""Collapsed Gibbs sampling for latent Dirichlet allocation.

The sampler integrates out the topic-word and document-topic distributions
and resamples one token's topic at a time from

    P(z = k | rest)  proportional to  (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)

where the counts exclude the token being resampled.

Reproducibility contract: every document owns an RNG stream seeded from
(config seed, document id), and sweeps visit documents in doc-id order
regardless of input order. Two consequences: identical seed/config/corpus
gives bit-identical assignments, and permuting document order leaves every
document's assignments unchanged.

Point estimates are taken from the final sample's counts (no averaging) so
that serialized models are exactly reproducible; enable
``average_after_burn_in`` to estimate topic-word weights from post-burn-in
sample accumulation instead.
"""

from __future__ import annotations

import hashlib
import logging
import math
import random
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LdaConfig:
    num_topics: int
    iterations: int = 200
    burn_in: int = 0
    alpha: float | None = None  # defaults to 50 / num_topics
    beta: float = 0.01
    seed: int = 0
    average_after_burn_in: bool = False

    def __post_init__(self):
        if self.num_topics < 1:
            raise ConfigError("num_topics must be >= 1")
        if not (self.iterations > self.burn_in >= 0):
            raise ConfigError("need iterations > burn_in >= 0")
        if self.alpha is not None and self.alpha <= 0:
            raise ConfigError("alpha must be positive")
        if self.beta <= 0:
            raise ConfigError("beta must be positive")

    @property
    def effective_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.num_topics


@dataclass(frozen=True)
class TopicTermList:
    topic_id: int
    terms: tuple[tuple[str, float], ...]


def _doc_stream_seed(seed: int, doc_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{doc_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class LdaModel:
    """Count state of a trained collapsed-Gibbs chain."""

    config: LdaConfig
    doc_ids: tuple[str, ...]
    vocab_terms: tuple[str, ...]
    topic_word_counts: np.ndarray  # (K, V) int32
    doc_topic_counts: np.ndarray   # (D, K) int32
    topic_totals: np.ndarray       # (K,) int32
    assignments: tuple[tuple[int, ...], ...] | None = None
    topic_word_average: np.ndarray | None = None
    doc_lengths: tuple[int, ...] = field(default_factory=tuple)

    @property
    def num_topics(self) -> int:
        return self.topic_word_counts.shape[0]

    @property
    def num_terms(self) -> int:
        return self.topic_word_counts.shape[1]

    def check_invariants(self) -> None:
        """Count conservation: rows and totals must match token counts."""
        doc_sums = self.doc_topic_counts.sum(axis=1)
        if self.doc_lengths and not np.array_equal(
                doc_sums, np.asarray(self.doc_lengths, dtype=doc_sums.dtype)):
            raise AssertionError("doc_topic_counts rows do not sum to doc lengths")
        word_sums = self.topic_word_counts.sum(axis=1)
        if not np.array_equal(word_sums, self.topic_totals):
            raise AssertionError("topic_word rows do not sum to topic_totals")
        if int(self.topic_totals.sum()) != int(doc_sums.sum()):
            raise AssertionError("topic totals do not sum to corpus token count")

    def phi(self) -> np.ndarray:
        """Topic-word probabilities, (K, V), rows summing to 1."""
        if self.config.average_after_burn_in and self.topic_word_average is not None:
            counts = self.topic_word_average
            totals = counts.sum(axis=1, keepdims=True)
        else:
            counts = self.topic_word_counts.astype(np.float64)
            totals = self.topic_totals.astype(np.float64)[:, None]
        beta = self.config.beta
        return (counts + beta) / (totals + self.num_terms * beta)

    def theta(self) -> np.ndarray:
        """Document-topic probabilities, (D, K), rows summing to 1."""
        alpha = self.config.effective_alpha
        counts = self.doc_topic_counts.astype(np.float64)
        lengths = counts.sum(axis=1, keepdims=True)
        return (counts + alpha) / (lengths + self.num_topics * alpha)

    def dominant_topics(self) -> np.ndarray:
        """Per-document argmax topic; ties resolve to the smallest index."""
        return self.doc_topic_counts.argmax(axis=1)


def train_lda(
    corpus: Sequence[tuple[str, Sequence[int]]],
    num_terms: int,
    config: LdaConfig,
    check_every_sweep: bool = False,
) -> LdaModel:
    """Run the collapsed Gibbs chain over (doc_id, token_ids) pairs.

    ``check_every_sweep`` validates count conservation after every sweep,
    for test harnesses; it does not change the chain.
    """
    if not corpus:
        raise ConfigError("cannot train LDA on an empty corpus")
    doc_ids = [doc_id for doc_id, _ in corpus]
    if len(set(doc_ids)) != len(doc_ids):
        raise ConfigError("duplicate document ids in LDA corpus")
    token_lists = []
    for doc_id, token_ids in corpus:
        tokens = list(token_ids)
        if not tokens:
            raise ConfigError(f"document {doc_id!r} is empty")
        bad = [w for w in tokens if not (0 <= w < num_terms)]
        if bad:
            raise ConfigError(f"document {doc_id!r} has out-of-range token ids {bad[:3]}")
        token_lists.append(tokens)

    k = config.num_topics
    total_tokens = sum(len(t) for t in token_lists)
    if k > total_tokens:
        warnings.warn(
            f"num_topics={k} exceeds corpus token count {total_tokens}; proceeding",
            stacklevel=2,
        )

    alpha = config.effective_alpha
    beta = config.beta
    v_beta = num_terms * beta

    topic_word = [[0] * num_terms for _ in range(k)]
    topic_totals = [0] * k
    doc_topic = [[0] * k for _ in range(len(corpus))]
    assignments: list[list[int]] = [[0] * len(t) for t in token_lists]
    rngs = [random.Random(_doc_stream_seed(config.seed, doc_id)) for doc_id in doc_ids]
    order = sorted(range(len(corpus)), key=lambda d: doc_ids[d])

    for d in order:
        rng = rngs[d]
        z_d = assignments[d]
        dt = doc_topic[d]
        for pos, w in enumerate(token_lists[d]):
            topic = rng.randrange(k)
            z_d[pos] = topic
            dt[topic] += 1
            topic_word[topic][w] += 1
            topic_totals[topic] += 1

    average = np.zeros((k, num_terms), dtype=np.float64) if config.average_after_burn_in else None
    averaged_samples = 0
    topic_range = range(k)

    for sweep in range(config.iterations):
        for d in order:
            rng_random = rngs[d].random
            z_d = assignments[d]
            dt = doc_topic[d]
            tokens = token_lists[d]
            for pos in range(len(tokens)):
                w = tokens[pos]
                old = z_d[pos]
                dt[old] -= 1
                topic_word[old][w] -= 1
                topic_totals[old] -= 1

                cumulative = 0.0
                cuts = []
                for topic in topic_range:
                    cumulative += (
                        (dt[topic] + alpha)
                        * (topic_word[topic][w] + beta)
                        / (topic_totals[topic] + v_beta)
                    )
                    cuts.append(cumulative)
                u = rng_random() * cumulative
                new = 0
                while cuts[new] < u:
                    new += 1

                z_d[pos] = new
                dt[new] += 1
                topic_word[new][w] += 1
                topic_totals[new] += 1
        if average is not None and sweep >= config.burn_in:
            average += np.asarray(topic_word, dtype=np.float64)
            averaged_samples += 1
        if check_every_sweep:
            _check_counts(token_lists, doc_topic, topic_word, topic_totals)

    if average is not None and averaged_samples:
        average /= averaged_samples

    model = LdaModel(
        config=config,
        doc_ids=tuple(doc_ids),
        vocab_terms=(),
        topic_word_counts=np.asarray(topic_word, dtype=np.int32),
        doc_topic_counts=np.asarray(doc_topic, dtype=np.int32),
        topic_totals=np.asarray(topic_totals, dtype=np.int32),
        assignments=tuple(tuple(z) for z in assignments),
        topic_word_average=average,
        doc_lengths=tuple(len(t) for t in token_lists),
    )
    model.check_invariants()
    return model


def _check_counts(token_lists, doc_topic, topic_word, topic_totals) -> None:
    for d, tokens in enumerate(token_lists):
        if sum(doc_topic[d]) != len(tokens):
            raise AssertionError(f"doc {d} topic counts do not sum to its length")
    for k_i, row in enumerate(topic_word):
        if sum(row) != topic_totals[k_i]:
            raise AssertionError(f"topic {k_i} word counts do not sum to its total")
    if sum(topic_totals) != sum(len(t) for t in token_lists):
        raise AssertionError("topic totals do not sum to corpus size")


def infer_doc_topics(
    model: LdaModel,
    token_ids: Sequence[int],
    iterations: int = 30,
    seed: int | None = None,
) -> tuple[np.ndarray, bool]:
    """Fold-in inference with frozen topic-word counts.

    Returns the document-topic probability vector and an out-of-vocabulary
    flag; a document with no in-vocabulary tokens gets the uniform vector.
    """
    k = model.num_topics
    tokens = [w for w in token_ids if 0 <= w < model.num_terms]
    all_oov = len(tokens) == 0
    if all_oov:
        warnings.warn("document has no in-vocabulary tokens; returning uniform topics",
                      stacklevel=2)
        return np.full(k, 1.0 / k), True
    if k == 1:
        return np.array([1.0]), False

    alpha = model.config.effective_alpha
    beta = model.config.beta
    v_beta = model.num_terms * beta
    topic_word = model.topic_word_counts
    topic_totals = model.topic_totals.astype(np.float64)

    base_seed = model.config.seed if seed is None else seed
    rng = random.Random(_doc_stream_seed(base_seed, "infer:" + ",".join(map(str, tokens))))

    dt = [0] * k
    z = []
    for w in tokens:
        topic = rng.randrange(k)
        z.append(topic)
        dt[topic] += 1

    for _ in range(iterations):
        for pos, w in enumerate(tokens):
            old = z[pos]
            dt[old] -= 1
            cumulative = 0.0
            cuts = []
            for topic in range(k):
                cumulative += (
                    (dt[topic] + alpha)
                    * (float(topic_word[topic, w]) + beta)
                    / (topic_totals[topic] + v_beta)
                )
                cuts.append(cumulative)
            u = rng.random() * cumulative
            new = 0
            while cuts[new] < u:
                new += 1
            z[pos] = new
            dt[new] += 1

    theta = (np.asarray(dt, dtype=np.float64) + alpha) / (len(tokens) + k * alpha)
    return theta / theta.sum(), False


def top_terms(model: LdaModel, topic: int, n: int) -> TopicTermList:
    """Highest-probability terms for one topic; ties break lexicographically."""
    if not (0 <= topic < model.num_topics):
        raise ConfigError(f"topic {topic} out of range [0, {model.num_topics})")
    if not model.vocab_terms:
        raise ConfigError("model has no attached vocabulary terms")
    probs = model.phi()[topic]
    order = sorted(range(model.num_terms), key=lambda w: (-probs[w], model.vocab_terms[w]))
    chosen = order[: min(n, model.num_terms)]
    return TopicTermList(
        topic_id=topic,
        terms=tuple((model.vocab_terms[w], float(probs[w])) for w in chosen),
    )


def perplexity(model: LdaModel, corpus: Sequence[tuple[str, Sequence[int]]]) -> float:
    """exp of the negative mean per-token log likelihood under theta @ phi."""
    phi = model.phi()
    theta = model.theta()
    by_id = {doc_id: i for i, doc_id in enumerate(model.doc_ids)}
    log_likelihood = 0.0
    token_count = 0
    for doc_id, token_ids in corpus:
        row = theta[by_id[doc_id]]
        for w in token_ids:
            p = float(row @ phi[:, w])
            log_likelihood += math.log(max(p, 1e-300))
            token_count += 1
    if token_count == 0:
        raise ConfigError("perplexity of an empty corpus is undefined")
    return math.exp(-log_likelihood / token_count)
