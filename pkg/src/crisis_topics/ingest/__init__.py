"""Corpus loading, cleaning, and vocabulary construction."""

from .cleaning import (
    EmojiTable,
    Rejection,
    convert_emojis,
    extract_urls,
    normalize_url,
    preprocess,
    strip_markup,
    url_domain,
)
from .records import (
    CleanDoc,
    CorpusLoad,
    RawRecord,
    UrlMention,
    corpus_content_hash,
    load_corpus,
    read_clean_docs,
    write_clean_docs,
)
from .vocab import (
    TokenizerConfig,
    Vocabulary,
    build_vocabulary,
    docs_to_token_lists,
    load_stopwords,
    tokenize,
)

__all__ = [
    "CleanDoc",
    "CorpusLoad",
    "EmojiTable",
    "RawRecord",
    "Rejection",
    "TokenizerConfig",
    "UrlMention",
    "Vocabulary",
    "build_vocabulary",
    "convert_emojis",
    "corpus_content_hash",
    "docs_to_token_lists",
    "extract_urls",
    "load_corpus",
    "load_stopwords",
    "normalize_url",
    "preprocess",
    "read_clean_docs",
    "strip_markup",
    "tokenize",
    "url_domain",
    "write_clean_docs",
]
