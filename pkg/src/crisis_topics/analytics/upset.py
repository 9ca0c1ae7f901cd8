"""Exclusive set-intersection counts for multi-label instances.

An instance counts toward exactly one intersection: the one equal to its
full label set. Set sizes (instances carrying a category at all) are then
recoverable as sums over the intersections containing that category.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import ConfigError
from ..schema.model import CN_CATEGORIES, SA_CATEGORIES


@dataclass
class IntersectionTable:
    family: str  # sa | cn
    categories: tuple[str, ...]
    set_sizes: dict[str, int]
    exclusive: list[tuple[tuple[str, ...], int]]  # sorted by count desc

    def exclusive_count(self, labels: Iterable[str]) -> int:
        key = tuple(sorted(labels))
        for combo, count in self.exclusive:
            if combo == key:
                return count
        return 0

    def total_labeled(self) -> int:
        return sum(count for _, count in self.exclusive)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "set_sizes": {c: self.set_sizes[c] for c in self.categories},
            "exclusive": [
                {"labels": list(combo), "count": count}
                for combo, count in self.exclusive
            ],
        }


def upset_intersections(
    label_sets: Sequence[Iterable[str]],
    family: str,
) -> IntersectionTable:
    """Count exact label-set combinations; instances with no label in the
    family are excluded from every count."""
    if family == "sa":
        categories = SA_CATEGORIES
    elif family == "cn":
        categories = CN_CATEGORIES
    else:
        raise ConfigError(f"unknown label family {family!r}")
    allowed = set(categories)

    combos: Counter = Counter()
    set_sizes = {c: 0 for c in categories}
    for labels in label_sets:
        label_tuple = tuple(sorted(set(labels)))
        if not label_tuple:
            continue
        stray = [l for l in label_tuple if l not in allowed]
        if stray:
            raise ConfigError(f"labels outside family {family!r}: {stray}")
        combos[label_tuple] += 1
        for label in label_tuple:
            set_sizes[label] += 1

    # Category canonical order breaks count ties for stable output.
    def combo_sort_key(item):
        combo, count = item
        return (-count, len(combo), tuple(categories.index(c) for c in combo))

    exclusive = sorted(combos.items(), key=combo_sort_key)
    table = IntersectionTable(
        family=family,
        categories=categories,
        set_sizes=set_sizes,
        exclusive=exclusive,
    )
    _check_bijection(table)
    return table


def _check_bijection(table: IntersectionTable) -> None:
    reconstructed = {c: 0 for c in table.categories}
    for combo, count in table.exclusive:
        for category in combo:
            reconstructed[category] += count
    if reconstructed != table.set_sizes:
        raise AssertionError("set sizes do not reconstruct from intersections")
