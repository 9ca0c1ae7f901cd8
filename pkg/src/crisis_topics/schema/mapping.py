"""Rule evaluation, flag lexicons, and human review overrides.

Keyword matching is exact-token after case folding, never substring; a
multi-word keyword matches when all of its tokens are present. Rules
accumulate (multi-label); priorities only order evaluation and reporting,
so permuting them cannot change the resulting label set.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import SchemaError
from ..ioutil import read_json
from .model import (
    CN_CATEGORIES,
    GRIEF_FLAG,
    SA_CATEGORIES,
    SA_FAMILY,
    MappingRule,
    Schema,
    TopicLabelSet,
    keyword_tokens,
)

logger = logging.getLogger(__name__)


def _keyword_matches(keyword: str, tokens: frozenset[str]) -> bool:
    parts = keyword_tokens(keyword)
    return bool(parts) and all(part in tokens for part in parts)


def rule_fires(rule: MappingRule, tokens: frozenset[str]) -> bool:
    if rule.all_keywords and not all(
            _keyword_matches(k, tokens) for k in rule.all_keywords):
        return False
    if rule.any_keywords and not any(
            _keyword_matches(k, tokens) for k in rule.any_keywords):
        return False
    return True


def topic_tokens(keywords: Sequence[str], label: str = "") -> frozenset[str]:
    tokens: set[str] = set()
    for keyword in keywords:
        tokens.update(keyword_tokens(keyword))
    tokens.update(keyword_tokens(label))
    return frozenset(tokens)


def fallback_sa_category(tokens: frozenset[str], schema: Schema) -> str:
    """Highest seed-token overlap; ties prefer specific categories, with
    loss_damage ranked last as the most generic."""
    def overlap(category: str) -> int:
        seed_tokens: set[str] = set()
        for seed in schema.sa_seeds[category]:
            seed_tokens.update(keyword_tokens(seed))
        return len(seed_tokens & tokens)

    ranked = sorted(
        SA_CATEGORIES,
        key=lambda c: (-overlap(c), c == "loss_damage", SA_CATEGORIES.index(c)),
    )
    return ranked[0]


def map_topic(
    topic_id: int,
    keywords: Sequence[str],
    label: str,
    rules: Sequence[MappingRule],
    schema: Schema,
) -> TopicLabelSet:
    """Evaluate rules against a topic's keywords and label tokens.

    All firing targets accumulate. A topic that fires no SA rule still gets
    one provisional SA category (seed-overlap fallback) and is flagged for
    review, keeping SA coverage total.
    """
    if not keywords:
        raise SchemaError(f"topic {topic_id}: unrepresentable, no keywords")
    tokens = topic_tokens(keywords, label)

    sa: set[str] = set()
    cn: set[str] = set()
    grief = False
    mental_health = False
    matched: list[str] = []
    for rule in sorted(rules, key=lambda r: r.priority):
        if not rule_fires(rule, tokens):
            continue
        matched.append(rule.rule_id)
        if rule.flag is not None:
            if rule.flag == GRIEF_FLAG:
                grief = True
            else:
                mental_health = True
        elif rule.family == SA_FAMILY:
            sa.add(rule.category)
        else:
            cn.add(rule.category)

    needs_review = False
    if not sa:
        fallback = fallback_sa_category(tokens, schema)
        sa.add(fallback)
        matched.append(f"fallback:{fallback}")
        needs_review = True

    return TopicLabelSet(
        topic_id=topic_id,
        sa_labels=frozenset(sa),
        cn_labels=frozenset(cn),
        grief=grief,
        mental_health=mental_health,
        provenance="auto",
        matched_rules=tuple(matched),
        needs_review=needs_review,
    )


def flag_grief_mh(
    texts: Iterable[str],
    keywords: Sequence[str],
    grief_lexicon: Sequence[str],
    mental_health_lexicon: Sequence[str],
) -> tuple[bool, bool]:
    """Independent binary flags from lexicon hits in any text or keyword.

    A multi-word lexicon entry must find all of its tokens inside a single
    text (or the keyword set) to count.
    """
    token_sets = [frozenset(keyword_tokens(text)) for text in texts]
    token_sets.append(topic_tokens(keywords))

    def any_hit(lexicon: Sequence[str]) -> bool:
        return any(
            _keyword_matches(entry, tokens)
            for entry in lexicon
            for tokens in token_sets
        )

    return any_hit(grief_lexicon), any_hit(mental_health_lexicon)


def load_overrides(path: str | Path) -> dict[int, dict]:
    """Parse and validate an override file: topic id -> replacement labels."""
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise SchemaError("override file must be a JSON object")
    overrides: dict[int, dict] = {}
    for key, body in obj.items():
        try:
            topic_id = int(key)
        except ValueError as exc:
            raise SchemaError(f"override key {key!r} is not a topic id") from exc
        sa = body.get("sa", [])
        cn = body.get("cn", [])
        bad_sa = sorted(set(sa) - set(SA_CATEGORIES))
        bad_cn = sorted(set(cn) - set(CN_CATEGORIES))
        if bad_sa or bad_cn:
            raise SchemaError(
                f"override for topic {topic_id} uses unknown categories: "
                f"{bad_sa + bad_cn}")
        if not sa:
            raise SchemaError(f"override for topic {topic_id} has an empty SA set")
        overrides[topic_id] = {
            "sa": frozenset(sa),
            "cn": frozenset(cn),
            "grief": bool(body.get("grief", False)),
            "mental_health": bool(body.get("mental_health", False)),
        }
    return overrides


def apply_review(
    auto: dict[int, TopicLabelSet],
    overrides: dict[int, dict],
) -> dict[int, TopicLabelSet]:
    """Replace whole label sets for overridden topics; keep the rest.

    Idempotent: reapplying the same override file changes nothing. Unknown
    topic ids fail loudly, listing every offender.
    """
    unknown = sorted(set(overrides) - set(auto))
    if unknown:
        raise SchemaError(f"override references unknown topic ids: {unknown}")
    final: dict[int, TopicLabelSet] = {}
    for topic_id, auto_set in auto.items():
        if topic_id in overrides:
            body = overrides[topic_id]
            final[topic_id] = TopicLabelSet(
                topic_id=topic_id,
                sa_labels=body["sa"],
                cn_labels=body["cn"],
                grief=body["grief"],
                mental_health=body["mental_health"],
                provenance="human",
                matched_rules=auto_set.matched_rules,
                needs_review=False,
            )
        else:
            final[topic_id] = auto_set
    return final
