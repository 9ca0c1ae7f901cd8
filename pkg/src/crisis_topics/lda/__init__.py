"""Collapsed-Gibbs LDA over the post corpus."""

from .archive import load_model, save_model, vocabulary_hash
from .gibbs import (
    LdaConfig,
    LdaModel,
    TopicTermList,
    infer_doc_topics,
    perplexity,
    top_terms,
    train_lda,
)
from .sweep import TopicCountSweep, coherence_evaluator, sweep_topic_count

__all__ = [
    "LdaConfig",
    "LdaModel",
    "TopicCountSweep",
    "TopicTermList",
    "coherence_evaluator",
    "infer_doc_topics",
    "load_model",
    "perplexity",
    "save_model",
    "sweep_topic_count",
    "top_terms",
    "train_lda",
    "vocabulary_hash",
]
