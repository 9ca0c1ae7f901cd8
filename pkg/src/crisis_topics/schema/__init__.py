"""Hierarchical SA/CN label schema, rule mapping, and review overrides."""

from .mapping import (
    apply_review,
    fallback_sa_category,
    flag_grief_mh,
    load_overrides,
    map_topic,
    rule_fires,
    topic_tokens,
)
from .model import (
    CN_CATEGORIES,
    GRIEF_FLAG,
    MENTAL_HEALTH_FLAG,
    SA_CATEGORIES,
    InstanceLabels,
    MappingRule,
    Schema,
    TopicLabelSet,
    keyword_tokens,
    load_lexicon,
    load_rules,
    load_schema,
)
from .propagate import PropagationResult, default_label_set, propagate_labels

__all__ = [
    "CN_CATEGORIES",
    "GRIEF_FLAG",
    "InstanceLabels",
    "MENTAL_HEALTH_FLAG",
    "MappingRule",
    "PropagationResult",
    "SA_CATEGORIES",
    "Schema",
    "TopicLabelSet",
    "apply_review",
    "default_label_set",
    "fallback_sa_category",
    "flag_grief_mh",
    "keyword_tokens",
    "load_lexicon",
    "load_overrides",
    "load_rules",
    "load_schema",
    "map_topic",
    "propagate_labels",
    "rule_fires",
    "topic_tokens",
]
