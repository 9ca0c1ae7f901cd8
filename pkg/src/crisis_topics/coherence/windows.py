"""Boolean sliding-window statistics over a tokenized reference corpus.

Each window counts at most once per term (presence, not frequency). Windows
advance one token at a time within a document; a document shorter than the
window contributes exactly one window. Pair counts are symmetric.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from ..errors import ConfigError


@dataclass
class WindowStats:
    """Window occurrence and co-occurrence counts for a set of terms."""

    num_windows: int = 0
    term_counts: Counter = field(default_factory=Counter)
    pair_counts: Counter = field(default_factory=Counter)

    def count(self, term: str) -> int:
        return self.term_counts.get(term, 0)

    def pair_count(self, term_a: str, term_b: str) -> int:
        if term_a == term_b:
            return self.count(term_a)
        return self.pair_counts.get(_pair_key(term_a, term_b), 0)

    def check(self) -> None:
        """Sanity: a pair never co-occurs more often than either member."""
        for (a, b), c_ab in self.pair_counts.items():
            if c_ab > min(self.term_counts[a], self.term_counts[b]):
                raise AssertionError(f"pair count for ({a}, {b}) exceeds member count")
        if self.term_counts and max(self.term_counts.values()) > self.num_windows:
            raise AssertionError("term count exceeds window count")


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def sliding_windows(
    token_streams: Iterable[Sequence[str]],
    window_size: int,
    terms: Iterable[str] | None = None,
) -> WindowStats:
    """Count windows containing each term (and term pair) at least once.

    ``terms`` restricts counting to the given terms, which keeps pair
    bookkeeping quadratic in the topic size instead of the vocabulary size;
    with ``terms=None`` every term in the corpus is tracked.
    """
    if window_size < 1:
        raise ConfigError(f"window_size must be >= 1, got {window_size}")
    wanted = None if terms is None else frozenset(terms)

    stats = WindowStats()
    saw_any_doc = False
    for tokens in token_streams:
        saw_any_doc = True
        n = len(tokens)
        if n == 0:
            continue
        spans = range(max(1, n - window_size + 1))
        for start in spans:
            window = tokens[start:start + window_size]
            present = {t for t in window if wanted is None or t in wanted}
            stats.num_windows += 1
            for term in present:
                stats.term_counts[term] += 1
            for a, b in combinations(sorted(present), 2):
                stats.pair_counts[(a, b)] += 1
    if not saw_any_doc:
        raise ConfigError("cannot build window statistics from an empty corpus")
    return stats
