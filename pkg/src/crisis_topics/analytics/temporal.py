"""Temporal aggregation: local-civil-day series and time-of-day segments.

Percentages are computed over instances carrying at least one
crisis-narrative label (the qualitative flags annotate that subset); pass
``denominator="all"`` to rate against everything instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

from ..errors import ConfigError
from ..schema.model import InstanceLabels

DEFAULT_TIMEZONE = "America/Los_Angeles"

# (name, first hour, last hour) inclusive; conventional civil partition.
DEFAULT_SEGMENTS = (
    ("night", 0, 5),
    ("morning", 6, 11),
    ("afternoon", 12, 17),
    ("evening", 18, 23),
)


def _zone(timezone_id: str) -> ZoneInfo:
    try:
        return ZoneInfo(timezone_id)
    except (ZoneInfoNotFoundError, ValueError) as exc:
        raise ConfigError(f"unknown timezone {timezone_id!r}") from exc


@dataclass
class DayBucket:
    total: int = 0
    cn_total: int = 0
    grief_count: int = 0
    mh_count: int = 0

    def grief_pct(self, denominator: str) -> float:
        base = self.cn_total if denominator == "cn" else self.total
        return 100.0 * self.grief_count / base if base else 0.0

    def mh_pct(self, denominator: str) -> float:
        base = self.cn_total if denominator == "cn" else self.total
        return 100.0 * self.mh_count / base if base else 0.0


@dataclass
class TimeSeries:
    timezone_id: str
    days: dict[str, DayBucket]
    denominator: str = "cn"

    def rows(self) -> list[tuple[str, int, float, float]]:
        out = []
        for day in sorted(self.days):
            bucket = self.days[day]
            out.append((day, bucket.cn_total,
                        bucket.grief_pct(self.denominator),
                        bucket.mh_pct(self.denominator)))
        return out


def temporal_bins(
    instances: Sequence[InstanceLabels],
    created_utc: dict[str, int],
    timezone_id: str = DEFAULT_TIMEZONE,
    denominator: str = "cn",
) -> TimeSeries:
    """Bucket instances by local civil date.

    ``created_utc`` maps instance ids to epoch seconds; flags contribute to
    a day's percentages only for instances with at least one CN label.
    """
    zone = _zone(timezone_id)
    days: dict[str, DayBucket] = {}
    for labeled in instances:
        if labeled.instance_id not in created_utc:
            raise ConfigError(f"no timestamp for instance {labeled.instance_id!r}")
        stamp = datetime.fromtimestamp(created_utc[labeled.instance_id],
                                       tz=timezone.utc).astimezone(zone)
        key = stamp.date().isoformat()
        bucket = days.setdefault(key, DayBucket())
        bucket.total += 1
        if labeled.cn_labels:
            bucket.cn_total += 1
            bucket.grief_count += int(labeled.grief)
            bucket.mh_count += int(labeled.mental_health)
    return TimeSeries(timezone_id=timezone_id, days=days, denominator=denominator)


@dataclass
class SegmentSummary:
    timezone_id: str
    segments: dict[str, DayBucket]
    denominator: str = "cn"

    def rows(self) -> list[tuple[str, int, float, float]]:
        order = [name for name, _, _ in DEFAULT_SEGMENTS]
        names = [n for n in order if n in self.segments] + [
            n for n in sorted(self.segments) if n not in order]
        out = []
        for name in names:
            bucket = self.segments[name]
            out.append((name, bucket.cn_total,
                        bucket.grief_pct(self.denominator),
                        bucket.mh_pct(self.denominator)))
        return out

    def total(self) -> int:
        return sum(b.total for b in self.segments.values())


def _validate_segments(boundaries: Sequence[tuple[str, int, int]]) -> None:
    covered = [False] * 24
    for name, first, last in boundaries:
        if not (0 <= first <= last <= 23):
            raise ConfigError(f"segment {name!r} has bad hour range")
        for hour in range(first, last + 1):
            if covered[hour]:
                raise ConfigError(f"segments overlap at hour {hour}")
            covered[hour] = True
    if not all(covered):
        missing = [h for h, seen in enumerate(covered) if not seen]
        raise ConfigError(f"segments leave hours uncovered: {missing}")


def time_of_day_segments(
    instances: Sequence[InstanceLabels],
    created_utc: dict[str, int],
    timezone_id: str = DEFAULT_TIMEZONE,
    boundaries: Sequence[tuple[str, int, int]] = DEFAULT_SEGMENTS,
    denominator: str = "cn",
) -> SegmentSummary:
    """Totals and flag percentages for each local time-of-day segment."""
    _validate_segments(boundaries)
    zone = _zone(timezone_id)
    segments = {name: DayBucket() for name, _, _ in boundaries}

    def segment_of(hour: int) -> str:
        for name, first, last in boundaries:
            if first <= hour <= last:
                return name
        raise AssertionError(f"hour {hour} fell through validated segments")

    for labeled in instances:
        if labeled.instance_id not in created_utc:
            raise ConfigError(f"no timestamp for instance {labeled.instance_id!r}")
        stamp = datetime.fromtimestamp(created_utc[labeled.instance_id],
                                       tz=timezone.utc).astimezone(zone)
        bucket = segments[segment_of(stamp.hour)]
        bucket.total += 1
        if labeled.cn_labels:
            bucket.cn_total += 1
            bucket.grief_count += int(labeled.grief)
            bucket.mh_count += int(labeled.mental_health)
    return SegmentSummary(timezone_id=timezone_id, segments=segments,
                          denominator=denominator)
