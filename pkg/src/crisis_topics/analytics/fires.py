"""Partition instances by which fire event they discuss.

Classification unions two signals: the subreddit's home fire and fire-name
keyword mentions in the text. Mentioning both major fires lands in ``both``;
mentioning only minor fires, or nothing recognizable, lands in ``other``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..ioutil import read_json
from ..schema.model import keyword_tokens

EATON = "eaton"
PALISADES = "palisades"

CLASSES = ("eaton_only", "palisades_only", "both", "other")


@dataclass(frozen=True)
class FireMap:
    """Subreddit and keyword attribution for fire events."""

    subreddit_fires: Mapping[str, str]        # subreddit (lower) -> fire key
    keyword_fires: Mapping[str, str]          # token -> fire key

    @classmethod
    def bundled(cls) -> "FireMap":
        ref = resources.files("crisis_topics.analytics") / "data" / "fire_map.json"
        with resources.as_file(ref) as path:
            return cls.from_file(path)

    @classmethod
    def from_file(cls, path: str | Path) -> "FireMap":
        obj = read_json(path)
        return cls(
            subreddit_fires={k.lower(): v for k, v in obj["subreddits"].items()},
            keyword_fires={k.lower(): v for k, v in obj["keywords"].items()},
        )


@dataclass
class FirePartition:
    assignments: dict[str, str]
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.counts:
            self.counts = {c: 0 for c in CLASSES}
            for cls_name in self.assignments.values():
                self.counts[cls_name] += 1


def classify_fire(
    subreddit: str,
    tokens: frozenset[str],
    fire_map: FireMap,
) -> str:
    fires: set[str] = set()
    home = fire_map.subreddit_fires.get(subreddit.lower())
    if home:
        fires.add(home)
    for token in tokens:
        hit = fire_map.keyword_fires.get(token)
        if hit:
            fires.add(hit)
    majors = fires & {EATON, PALISADES}
    if majors == {EATON, PALISADES}:
        return "both"
    if majors == {EATON}:
        return "eaton_only"
    if majors == {PALISADES}:
        return "palisades_only"
    return "other"


def partition_by_fire(
    instances: Sequence[tuple[str, str, str]],
    fire_map: FireMap | None = None,
) -> FirePartition:
    """Classify (id, subreddit, text) triples into the four fire classes."""
    if fire_map is None:
        fire_map = FireMap.bundled()
    assignments = {}
    for instance_id, subreddit, text in instances:
        tokens = frozenset(keyword_tokens(text))
        assignments[instance_id] = classify_fire(subreddit, tokens, fire_map)
    return FirePartition(assignments=assignments)
