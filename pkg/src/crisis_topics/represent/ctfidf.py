"""Class-based TF-IDF keyword weighting over clustered documents.

Weight of term t in class c:

    W[c, t] = tf(t, c) * ln(1 + A / f_t)

with A the average token mass per class and f_t the corpus-wide frequency
of t, both measured over the vectorized (n-gram, df-filtered) features.
Terms absent from a class weigh exactly zero.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConfigError


@dataclass(frozen=True)
class VectorizerConfig:
    ngram_range: tuple[int, int] = (1, 2)
    min_df: int = 2

    def __post_init__(self):
        lo, hi = self.ngram_range
        if not (1 <= lo <= hi):
            raise ConfigError(f"bad ngram_range {self.ngram_range}")
        if self.min_df < 1:
            raise ConfigError("min_df must be >= 1")


def ngrams(tokens: Sequence[str], ngram_range: tuple[int, int]) -> list[str]:
    """N-gram features; multi-word grams join with a single space."""
    lo, hi = ngram_range
    out: list[str] = []
    for size in range(lo, hi + 1):
        for start in range(len(tokens) - size + 1):
            gram = tokens[start] if size == 1 else " ".join(tokens[start:start + size])
            out.append(gram)
    return out


@dataclass
class CTfIdfModel:
    class_ids: tuple[int, ...]
    terms: tuple[str, ...]
    weights: np.ndarray            # (classes, terms)
    class_token_totals: tuple[int, ...]
    corpus_term_frequencies: tuple[int, ...]
    average_tokens_per_class: float

    def __post_init__(self):
        self._term_index = {t: i for i, t in enumerate(self.terms)}
        self._class_index = {c: i for i, c in enumerate(self.class_ids)}

    def class_vector(self, class_id: int) -> np.ndarray:
        return self.weights[self._class_index[class_id]]

    def term_index(self, term: str) -> int | None:
        return self._term_index.get(term)

    def top_terms(self, class_id: int, n: int = 10) -> list[tuple[str, float]]:
        """Highest-weight terms for one class; ties break lexicographically."""
        row = self.class_vector(class_id)
        order = sorted(range(len(self.terms)), key=lambda i: (-row[i], self.terms[i]))
        return [(self.terms[i], float(row[i])) for i in order[:n] if row[i] > 0.0]

    def encode(self, tokens: Sequence[str], ngram_range: tuple[int, int]) -> np.ndarray:
        """Term-frequency vector of a document over the model's term space."""
        vec = np.zeros(len(self.terms))
        for gram, count in Counter(ngrams(tokens, ngram_range)).items():
            idx = self._term_index.get(gram)
            if idx is not None:
                vec[idx] = count
        return vec


def fit_ctfidf(
    docs_tokens: Sequence[Sequence[str]],
    labels: Sequence[int],
    config: VectorizerConfig | None = None,
) -> CTfIdfModel:
    """Fit class-level keyword weights; label -1 marks noise and is excluded.

    ``min_df`` filters features by document frequency before any class
    aggregation, mirroring the usual count-vectorizer behavior.
    """
    if config is None:
        config = VectorizerConfig()
    if len(docs_tokens) != len(labels):
        raise ConfigError("docs and labels must align")

    doc_grams = [ngrams(tokens, config.ngram_range) for tokens in docs_tokens]
    df: Counter = Counter()
    for grams in doc_grams:
        df.update(set(grams))
    kept = {t for t, count in df.items() if count >= config.min_df}
    if not kept:
        raise ConfigError(f"no features survive min_df={config.min_df}")

    class_counts: dict[int, Counter] = {}
    for grams, label in zip(doc_grams, labels):
        if label == -1:
            continue
        bag = class_counts.setdefault(int(label), Counter())
        for gram in grams:
            if gram in kept:
                bag[gram] += 1
    if not class_counts:
        raise ConfigError("no classes: every document is noise")

    class_ids = tuple(sorted(class_counts))
    # Features surviving min_df but appearing only in noise docs carry no
    # class signal; the model's term space is the class-occupied features.
    terms = tuple(sorted({t for bag in class_counts.values() for t in bag}))
    if not terms:
        raise ConfigError("no classes: every document is noise")
    term_index = {t: i for i, t in enumerate(terms)}

    tf = np.zeros((len(class_ids), len(terms)))
    for row, class_id in enumerate(class_ids):
        for gram, count in class_counts[class_id].items():
            tf[row, term_index[gram]] = count

    class_totals = tf.sum(axis=1)
    corpus_freq = tf.sum(axis=0)
    average = float(class_totals.mean())

    idf = np.zeros(len(terms))
    positive = corpus_freq > 0
    idf[positive] = np.log1p(average / corpus_freq[positive])
    weights = tf * idf[None, :]

    return CTfIdfModel(
        class_ids=class_ids,
        terms=terms,
        weights=weights,
        class_token_totals=tuple(int(x) for x in class_totals),
        corpus_term_frequencies=tuple(int(x) for x in corpus_freq),
        average_tokens_per_class=average,
    )
