"""Domain ranking of cited URLs per situational-awareness category.

Mentions join to labeled instances by source id; an instance carrying
several SA labels contributes its domains to each of them. Rankings are
stable: count descending, then domain ascending.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..ingest.records import UrlMention
from ..schema.model import SA_CATEGORIES, InstanceLabels


def load_health_domains(path: str | Path | None = None) -> frozenset[str]:
    if path is None:
        ref = resources.files("crisis_topics.analytics") / "data" / "health_domains.txt"
        text = ref.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    domains = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            domains.add(line)
    return frozenset(domains)


@dataclass
class UrlReport:
    per_category: dict[str, list[tuple[str, int]]]
    overall: list[tuple[str, int]]
    health_domains: frozenset[str]

    def top(self, category: str, n: int = 3) -> list[str]:
        return [domain for domain, _ in self.per_category.get(category, [])[:n]]

    def is_health(self, domain: str) -> bool:
        return domain in self.health_domains

    def health_distribution(self) -> dict[str, int]:
        """Health-domain mention counts per SA category."""
        return {
            category: sum(c for d, c in ranked if self.is_health(d))
            for category, ranked in self.per_category.items()
        }


def _ranked(counter: Counter) -> list[tuple[str, int]]:
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def url_rank(
    mentions: Sequence[UrlMention],
    labels_by_instance: Mapping[str, InstanceLabels],
    health_domains: frozenset[str] | None = None,
) -> UrlReport:
    """Rank cited domains overall and per SA category of the citing instance.

    Mentions whose source instance is unlabeled only count toward the
    overall ranking.
    """
    if health_domains is None:
        health_domains = load_health_domains()
    per_category: dict[str, Counter] = {c: Counter() for c in SA_CATEGORIES}
    overall: Counter = Counter()
    for mention in mentions:
        domain = mention.domain or "unknown"
        overall[domain] += 1
        labeled = labels_by_instance.get(mention.source_id)
        if labeled is None:
            continue
        for category in labeled.sa_labels:
            per_category[category][domain] += 1
    return UrlReport(
        per_category={c: _ranked(per_category[c]) for c in SA_CATEGORIES},
        overall=_ranked(overall),
        health_domains=health_domains,
    )
