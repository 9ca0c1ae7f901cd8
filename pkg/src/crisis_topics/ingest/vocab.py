"""Modeling tokens and vocabulary construction.

Tokenization is the shared front end for the LDA bag-of-words, the c-TF-IDF
vectorizer, and the coherence reference corpus, so it is deliberately dumb
and deterministic: lowercase, split on non-alphanumeric runs, drop single
characters and stopwords. The stopword list ships with the package so runs
are reproducible from the repo alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
import re

from ..errors import ConfigError
from .records import CleanDoc

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the pinned English stopword list, or a caller-supplied file."""
    if path is None:
        ref = resources.files("crisis_topics.ingest") / "data" / "stopwords_en.txt"
        text = ref.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class TokenizerConfig:
    stopwords: frozenset[str] = field(default_factory=load_stopwords)
    min_token_len: int = 2


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[str]:
    """Lowercased alphanumeric tokens with stopwords and short tokens dropped."""
    if config is None:
        config = TokenizerConfig()
    tokens = _TOKEN_RE.findall(text.lower())
    return [
        tok for tok in tokens
        if len(tok) >= config.min_token_len and tok not in config.stopwords
    ]


@dataclass(frozen=True)
class Vocabulary:
    """Dense term index ordered by (document frequency desc, term asc)."""

    terms: tuple[str, ...]
    index: dict[str, int]
    document_frequencies: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def encode(self, tokens: list[str]) -> list[int]:
        """Token ids for the in-vocabulary tokens, preserving order."""
        return [self.index[t] for t in tokens if t in self.index]

    def content_hash(self) -> str:
        from ..ioutil import sha256_text

        return sha256_text("\n".join(self.terms))


def build_vocabulary(
    token_docs: list[list[str]],
    min_df: int = 1,
    max_df_ratio: float = 1.0,
) -> Vocabulary:
    """Build the retained-term index from tokenized docs.

    A term stays when ``min_df <= df`` and ``df / N <= max_df_ratio``. An
    empty result is a configuration error, not an empty vocabulary.
    """
    if not token_docs:
        raise ConfigError("cannot build a vocabulary from zero documents")
    n_docs = len(token_docs)
    df: dict[str, int] = {}
    for tokens in token_docs:
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1

    kept = [
        (term, count)
        for term, count in df.items()
        if count >= min_df and count / n_docs <= max_df_ratio
    ]
    if not kept:
        raise ConfigError(
            f"vocabulary empty after df filtering (min_df={min_df}, "
            f"max_df_ratio={max_df_ratio}, {n_docs} docs)"
        )
    kept.sort(key=lambda pair: (-pair[1], pair[0]))
    terms = tuple(term for term, _ in kept)
    return Vocabulary(
        terms=terms,
        index={term: i for i, term in enumerate(terms)},
        document_frequencies=tuple(count for _, count in kept),
    )


def docs_to_token_lists(
    docs: list[CleanDoc], config: TokenizerConfig | None = None
) -> list[list[str]]:
    return [tokenize(doc.text, config) for doc in docs]
