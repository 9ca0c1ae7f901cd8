"""Quantitative analyses over labeled instances."""

from .fires import CLASSES, FireMap, FirePartition, classify_fire, partition_by_fire
from .report import REPORT_FILES, emit_report
from .temporal import (
    DEFAULT_SEGMENTS,
    DEFAULT_TIMEZONE,
    SegmentSummary,
    TimeSeries,
    temporal_bins,
    time_of_day_segments,
)
from .upset import IntersectionTable, upset_intersections
from .urls import UrlReport, load_health_domains, url_rank

__all__ = [
    "CLASSES",
    "DEFAULT_SEGMENTS",
    "DEFAULT_TIMEZONE",
    "FireMap",
    "FirePartition",
    "IntersectionTable",
    "REPORT_FILES",
    "SegmentSummary",
    "TimeSeries",
    "UrlReport",
    "classify_fire",
    "emit_report",
    "load_health_domains",
    "partition_by_fire",
    "temporal_bins",
    "time_of_day_segments",
    "upset_intersections",
    "url_rank",
]
