"""Cluster-to-topic representation: keywords, exemplars, labels."""

from .ctfidf import CTfIdfModel, VectorizerConfig, fit_ctfidf, ngrams
from .mmr import mmr_select
from .topics import (
    DEFAULT_LLM_MODEL,
    LlmClient,
    TopicRepresentation,
    fallback_label,
    llm_label,
    load_prompt_template,
    representative_docs,
)

__all__ = [
    "CTfIdfModel",
    "DEFAULT_LLM_MODEL",
    "LlmClient",
    "TopicRepresentation",
    "VectorizerConfig",
    "fallback_label",
    "fit_ctfidf",
    "llm_label",
    "load_prompt_template",
    "mmr_select",
    "ngrams",
    "representative_docs",
]
