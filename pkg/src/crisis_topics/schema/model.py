"""Label schema types and data-file loaders.

The schema is a fixed two-family hierarchy: six situational-awareness
categories and four crisis-narrative categories, each with seed keywords.
Rules, lexicons, and overrides are JSON files validated on load.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import SchemaError
from ..ioutil import read_json

SA_FAMILY = "sa"
CN_FAMILY = "cn"

SA_CATEGORIES = (
    "fire_operations",
    "public_health_safety",
    "emergency_resources",
    "recovery",
    "loss_damage",
    "influential_figures",
)
CN_CATEGORIES = ("blame", "renewal", "victim", "hero")

GRIEF_FLAG = "grief"
MENTAL_HEALTH_FLAG = "mental_health"


def _data_path(name: str):
    return resources.files("crisis_topics.schema") / "data" / name


def keyword_tokens(text: str) -> tuple[str, ...]:
    """Case-folded alphanumeric tokens of a keyword, label, or seed."""
    import re

    return tuple(re.findall(r"[a-z0-9]+", text.lower()))


@dataclass(frozen=True)
class Schema:
    sa_seeds: dict[str, tuple[str, ...]]
    cn_seeds: dict[str, tuple[str, ...]]
    display_names: dict[str, str] = field(default_factory=dict)

    def seeds_for(self, family: str, category: str) -> tuple[str, ...]:
        table = self.sa_seeds if family == SA_FAMILY else self.cn_seeds
        return table[category]

    def to_dict(self) -> dict:
        return {
            "situational_awareness": {
                c: {"display": self.display_names.get(c, c),
                    "seeds": list(self.sa_seeds[c])}
                for c in SA_CATEGORIES
            },
            "crisis_narrative": {
                c: {"display": self.display_names.get(c, c),
                    "seeds": list(self.cn_seeds[c])}
                for c in CN_CATEGORIES
            },
        }


def load_schema(path: str | Path | None = None) -> Schema:
    """Load and validate the category schema (bundled file by default)."""
    if path is None:
        with resources.as_file(_data_path("schema.json")) as bundled:
            obj = read_json(bundled)
    else:
        obj = read_json(path)

    for key in ("situational_awareness", "crisis_narrative"):
        if key not in obj:
            raise SchemaError(f"schema missing {key!r} section")

    def section(raw: dict, expected: tuple[str, ...], family_name: str):
        found = list(raw)
        if len(found) != len(set(found)):
            raise SchemaError(f"duplicate categories in {family_name}")
        unknown = sorted(set(found) - set(expected))
        if unknown:
            raise SchemaError(f"unknown {family_name} categories: {unknown}")
        missing = sorted(set(expected) - set(found))
        if missing:
            raise SchemaError(f"missing {family_name} categories: {missing}")
        seeds = {}
        display = {}
        for category, body in raw.items():
            entry = tuple(body.get("seeds", ()))
            if not entry:
                raise SchemaError(f"category {category!r} has no seeds")
            seeds[category] = entry
            display[category] = body.get("display", category)
        return seeds, display

    sa_seeds, sa_display = section(obj["situational_awareness"], SA_CATEGORIES,
                                   "situational_awareness")
    cn_seeds, cn_display = section(obj["crisis_narrative"], CN_CATEGORIES,
                                   "crisis_narrative")
    return Schema(sa_seeds=sa_seeds, cn_seeds=cn_seeds,
                  display_names={**sa_display, **cn_display})


@dataclass(frozen=True)
class MappingRule:
    rule_id: str
    priority: int
    any_keywords: tuple[str, ...] = ()
    all_keywords: tuple[str, ...] = ()
    family: str | None = None      # sa | cn when targeting a category
    category: str | None = None
    flag: str | None = None        # grief | mental_health when targeting a flag

    def __post_init__(self):
        if not self.any_keywords and not self.all_keywords:
            raise SchemaError(f"rule {self.rule_id}: no keywords")
        targets_category = self.category is not None
        targets_flag = self.flag is not None
        if targets_category == targets_flag:
            raise SchemaError(
                f"rule {self.rule_id}: must target exactly one of category or flag")
        if targets_category and self.family not in (SA_FAMILY, CN_FAMILY):
            raise SchemaError(f"rule {self.rule_id}: bad family {self.family!r}")
        if targets_flag and self.flag not in (GRIEF_FLAG, MENTAL_HEALTH_FLAG):
            raise SchemaError(f"rule {self.rule_id}: bad flag {self.flag!r}")


def load_rules(path: str | Path | None = None, schema: Schema | None = None) -> list[MappingRule]:
    """Load mapping rules sorted by priority; priorities must be unique and
    every category target must exist in the schema."""
    if path is None:
        with resources.as_file(_data_path("rules.json")) as bundled:
            obj = read_json(bundled)
    else:
        obj = read_json(path)
    rules = []
    for raw in obj.get("rules", []):
        target = raw.get("target", {})
        rules.append(MappingRule(
            rule_id=raw["rule_id"],
            priority=int(raw["priority"]),
            any_keywords=tuple(raw.get("any_keywords", ())),
            all_keywords=tuple(raw.get("all_keywords", ())),
            family=target.get("family"),
            category=target.get("category"),
            flag=target.get("flag"),
        ))
    priorities = [r.priority for r in rules]
    if len(priorities) != len(set(priorities)):
        raise SchemaError("rule priorities must be unique")
    if schema is not None:
        for rule in rules:
            if rule.category is None:
                continue
            known = SA_CATEGORIES if rule.family == SA_FAMILY else CN_CATEGORIES
            if rule.category not in known:
                raise SchemaError(
                    f"rule {rule.rule_id}: unknown category {rule.category!r}")
    return sorted(rules, key=lambda r: r.priority)


def load_lexicon(path: str | Path | None = None, bundled_name: str | None = None) -> tuple[str, ...]:
    """Load a flag lexicon; a missing file is an error, not a silent skip."""
    if path is None:
        if bundled_name is None:
            raise SchemaError("no lexicon path given")
        with resources.as_file(_data_path(bundled_name)) as bundled:
            obj = read_json(bundled)
    else:
        if not Path(path).is_file():
            raise SchemaError(f"lexicon file not found: {path}")
        obj = read_json(path)
    entries = tuple(obj.get("entries", ()))
    if not entries:
        raise SchemaError("lexicon has no entries")
    return entries


@dataclass
class TopicLabelSet:
    """Multi-label assignment for one latent topic."""

    topic_id: int
    sa_labels: frozenset[str]
    cn_labels: frozenset[str]
    grief: bool
    mental_health: bool
    provenance: str = "auto"  # auto | human
    matched_rules: tuple[str, ...] = ()
    needs_review: bool = False

    def to_dict(self) -> dict:
        return {
            "topic_id": self.topic_id,
            "sa": sorted(self.sa_labels),
            "cn": sorted(self.cn_labels),
            "grief": self.grief,
            "mental_health": self.mental_health,
            "provenance": self.provenance,
            "matched_rules": list(self.matched_rules),
            "needs_review": self.needs_review,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TopicLabelSet":
        return cls(
            topic_id=int(obj["topic_id"]),
            sa_labels=frozenset(obj["sa"]),
            cn_labels=frozenset(obj["cn"]),
            grief=bool(obj["grief"]),
            mental_health=bool(obj["mental_health"]),
            provenance=obj.get("provenance", "auto"),
            matched_rules=tuple(obj.get("matched_rules", ())),
            needs_review=bool(obj.get("needs_review", False)),
        )


@dataclass
class InstanceLabels:
    """Labels propagated to one post or comment."""

    instance_id: str
    kind: str
    topic_id: int                 # dominant topic for posts, cluster for comments
    sa_labels: frozenset[str]
    cn_labels: frozenset[str]
    grief: bool
    mental_health: bool
    inherited: bool

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "kind": self.kind,
            "topic_id": self.topic_id,
            "sa": sorted(self.sa_labels),
            "cn": sorted(self.cn_labels),
            "grief": self.grief,
            "mental_health": self.mental_health,
            "inherited": self.inherited,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "InstanceLabels":
        return cls(
            instance_id=obj["instance_id"],
            kind=obj["kind"],
            topic_id=int(obj["topic_id"]),
            sa_labels=frozenset(obj["sa"]),
            cn_labels=frozenset(obj["cn"]),
            grief=bool(obj["grief"]),
            mental_health=bool(obj["mental_health"]),
            inherited=bool(obj["inherited"]),
        )
