"""Deterministic CSV artifacts for the computed analytics.

Rendering figures is the consumer's job; these files carry the underlying
numbers with stable ordering so identical inputs produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

from ..ioutil import atomic_write_text
from .fires import CLASSES, FirePartition
from .temporal import SegmentSummary, TimeSeries
from .upset import IntersectionTable
from .urls import UrlReport

REPORT_FILES = (
    "upset_sa.csv",
    "upset_cn.csv",
    "timeseries.csv",
    "segments.csv",
    "fire_partition.csv",
    "url_rank.csv",
)


def _upset_csv(table: IntersectionTable) -> str:
    lines = ["labels,count"]
    for combo, count in table.exclusive:
        lines.append(f"{'|'.join(combo)},{count}")
    return "\n".join(lines) + "\n"


def _timeseries_csv(series: TimeSeries) -> str:
    lines = ["date,total,grief_pct,mh_pct"]
    for day, total, grief_pct, mh_pct in series.rows():
        lines.append(f"{day},{total},{grief_pct:.4f},{mh_pct:.4f}")
    return "\n".join(lines) + "\n"


def _segments_csv(summary: SegmentSummary) -> str:
    lines = ["segment,total,grief_pct,mh_pct"]
    for name, total, grief_pct, mh_pct in summary.rows():
        lines.append(f"{name},{total},{grief_pct:.4f},{mh_pct:.4f}")
    return "\n".join(lines) + "\n"


def _fire_partition_csv(partition: FirePartition) -> str:
    lines = ["class,count"]
    for name in CLASSES:
        lines.append(f"{name},{partition.counts.get(name, 0)}")
    return "\n".join(lines) + "\n"


def _url_rank_csv(report: UrlReport) -> str:
    lines = ["category,domain,count,is_health"]
    for category in sorted(report.per_category):
        for domain, count in report.per_category[category]:
            flag = "true" if report.is_health(domain) else "false"
            lines.append(f"{category},{domain},{count},{flag}")
    for domain, count in report.overall:
        flag = "true" if report.is_health(domain) else "false"
        lines.append(f"overall,{domain},{count},{flag}")
    return "\n".join(lines) + "\n"


def emit_report(
    out_dir: str | Path,
    upset_sa: IntersectionTable,
    upset_cn: IntersectionTable,
    timeseries: TimeSeries,
    segments: SegmentSummary,
    fire_partition: FirePartition,
    url_report: UrlReport,
) -> list[Path]:
    """Write the six report files; reruns on identical inputs are
    byte-identical."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    contents = {
        "upset_sa.csv": _upset_csv(upset_sa),
        "upset_cn.csv": _upset_csv(upset_cn),
        "timeseries.csv": _timeseries_csv(timeseries),
        "segments.csv": _segments_csv(segments),
        "fire_partition.csv": _fire_partition_csv(fire_partition),
        "url_rank.csv": _url_rank_csv(url_report),
    }
    written = []
    for name in REPORT_FILES:
        path = out_dir / name
        atomic_write_text(path, contents[name])
        written.append(path)
    return written
