import itertools
from collections import Counter

import numpy as np
import pytest

from crisis_topics.analytics import (
    FireMap,
    classify_fire,
    emit_report,
    partition_by_fire,
    temporal_bins,
    time_of_day_segments,
    upset_intersections,
    url_rank,
)
from crisis_topics.analytics.temporal import DEFAULT_SEGMENTS
from crisis_topics.errors import ConfigError
from crisis_topics.ingest.records import UrlMention
from crisis_topics.schema.model import CN_CATEGORIES, SA_CATEGORIES, InstanceLabels


def make_instance(instance_id, sa=("fire_operations",), cn=(), grief=False,
                  mh=False, kind="comment"):
    return InstanceLabels(
        instance_id=instance_id, kind=kind, topic_id=0,
        sa_labels=frozenset(sa), cn_labels=frozenset(cn),
        grief=grief, mental_health=mh, inherited=False,
    )


class TestUpset:
    def test_hand_case(self):
        a, b = "fire_operations", "recovery"
        table = upset_intersections([{a}, {a, b}, {b}], "sa")
        assert table.exclusive_count([a]) == 1
        assert table.exclusive_count([a, b]) == 1
        assert table.exclusive_count([b]) == 1
        assert table.set_sizes[a] == 2
        assert table.set_sizes[b] == 2

    def test_exclusive_semantics(self):
        a, b = "victim", "blame"
        table = upset_intersections([{a, b}] * 5 + [{a}] * 2, "cn")
        assert table.exclusive_count([a, b]) == 5
        assert table.exclusive_count([a]) == 2
        assert table.exclusive_count([b]) == 0

    def test_label_outside_family_rejected(self):
        with pytest.raises(ConfigError):
            upset_intersections([{"victim"}], "sa")

    def test_unknown_family_rejected(self):
        with pytest.raises(ConfigError):
            upset_intersections([], "nope")

    def test_sorted_by_count_desc(self):
        sets = [{"victim"}] * 3 + [{"blame"}] * 5 + [{"hero"}]
        table = upset_intersections(sets, "cn")
        counts = [count for _, count in table.exclusive]
        assert counts == sorted(counts, reverse=True)

    @pytest.mark.parametrize("seed", range(50))
    def test_bijection_against_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        family, categories = (("sa", SA_CATEGORIES) if seed % 2 == 0
                              else ("cn", CN_CATEGORIES))
        n = int(rng.integers(1, 1000))
        label_sets = []
        for _ in range(n):
            size = int(rng.integers(0, len(categories) + 1))
            label_sets.append(set(rng.choice(categories, size=size, replace=False)))
        table = upset_intersections(label_sets, family)

        # Brute force: count exact combinations and memberships directly.
        combos = Counter(tuple(sorted(s)) for s in label_sets if s)
        memberships = Counter(c for s in label_sets for c in s)
        assert dict(table.exclusive) == dict(combos)
        assert table.total_labeled() == sum(1 for s in label_sets if s)
        for category in categories:
            rebuilt = sum(count for combo, count in table.exclusive
                          if category in combo)
            assert rebuilt == memberships.get(category, 0)
            assert table.set_sizes[category] == memberships.get(category, 0)


class TestTemporal:
    def test_local_date_conversion(self):
        # 16:00Z and next-day 02:00Z both fall on Jan 8 in UTC-8.
        instances = [make_instance("a", cn=("victim",)),
                     make_instance("b", cn=("victim",), grief=True)]
        stamps = {"a": 1736352000, "b": 1736388000}  # 2025-01-08T16:00Z, 2025-01-09T02:00Z
        series = temporal_bins(instances, stamps, "America/Los_Angeles")
        assert list(series.days) == ["2025-01-08"]
        bucket = series.days["2025-01-08"]
        assert bucket.total == 2
        assert bucket.grief_count == 1

    def test_utc_midnight_rolls_back_a_day_in_la(self):
        instances = [make_instance("a")]
        series = temporal_bins(instances, {"a": 1736294400}, "America/Los_Angeles")
        # 2025-01-08T00:00Z is 16:00 PST on Jan 7.
        assert list(series.days) == ["2025-01-07"]

    def test_empty_series(self):
        series = temporal_bins([], {}, "America/Los_Angeles")
        assert series.days == {}
        assert series.rows() == []

    def test_unknown_timezone(self):
        with pytest.raises(ConfigError):
            temporal_bins([], {}, "Mars/Olympus_Mons")

    def test_percentages_over_cn_subset(self):
        instances = [
            make_instance("a", cn=("victim",), grief=True, mh=True),
            make_instance("b", cn=("blame",)),
            make_instance("c"),  # no CN labels: excluded from percentages
        ]
        stamps = {"a": 1736352000, "b": 1736352060, "c": 1736352120}
        series = temporal_bins(instances, stamps)
        bucket = series.days["2025-01-08"]
        assert bucket.cn_total == 2
        assert bucket.grief_pct("cn") == pytest.approx(50.0)
        assert bucket.mh_pct("cn") == pytest.approx(50.0)
        assert bucket.grief_pct("all") == pytest.approx(100.0 / 3)


class TestSegments:
    def test_evening_boundary(self):
        # 2025-01-08T20:30 PST == 2025-01-09T04:30Z
        instances = [make_instance("a", cn=("victim",))]
        summary = time_of_day_segments(instances, {"a": 1736397000})
        assert summary.segments["evening"].total == 1

    def test_segment_totals_sum_to_instance_total(self):
        rng = np.random.default_rng(0)
        instances = [make_instance(f"i{k}") for k in range(200)]
        stamps = {f"i{k}": int(rng.integers(1736100000, 1738700000))
                  for k in range(200)}
        summary = time_of_day_segments(instances, stamps)
        assert summary.total() == 200

    def test_every_hour_covered_once(self):
        from crisis_topics.analytics.temporal import _validate_segments

        _validate_segments(DEFAULT_SEGMENTS)

    def test_overlapping_boundaries_rejected(self):
        instances = [make_instance("a")]
        bad = (("x", 0, 12), ("y", 12, 23))
        with pytest.raises(ConfigError, match="overlap"):
            time_of_day_segments(instances, {"a": 1736397000}, boundaries=bad)

    def test_uncovered_hours_rejected(self):
        bad = (("x", 0, 10), ("y", 12, 23))
        with pytest.raises(ConfigError, match="uncovered"):
            time_of_day_segments([], {}, boundaries=bad)

    def test_timezone_totality(self):
        rng = np.random.default_rng(7)
        stamps = {f"i{k}": int(rng.integers(1704067200, 1767225600))
                  for k in range(300)}
        instances = [make_instance(key) for key in stamps]
        series = temporal_bins(instances, stamps)
        summary = time_of_day_segments(instances, stamps)
        assert sum(b.total for b in series.days.values()) == 300
        assert summary.total() == 300


@pytest.fixture(scope="module")
def fire_map():
    return FireMap.bundled()


class TestFirePartition:

    def test_altadena_eaton_only(self, fire_map):
        assert classify_fire("altadena", frozenset({"eaton", "smoke"}),
                             fire_map) == "eaton_only"

    def test_both_fires_mentioned(self, fire_map):
        assert classify_fire("LosAngeles", frozenset({"eaton", "palisades"}),
                             fire_map) == "both"

    def test_subreddit_and_keyword_union(self, fire_map):
        # Home subreddit implies eaton; text mentions palisades: union is both.
        assert classify_fire("altadena", frozenset({"palisades"}),
                             fire_map) == "both"

    def test_minor_fire_is_other(self, fire_map):
        assert classify_fire("LosAngeles", frozenset({"hughes"}),
                             fire_map) == "other"

    def test_no_signal_is_other(self, fire_map):
        assert classify_fire("LosAngeles", frozenset({"weather"}),
                             fire_map) == "other"

    def test_partition_exhaustive_and_disjoint(self):
        rng = np.random.default_rng(1)
        words = ["eaton", "palisades", "hughes", "rain", "smoke", "help"]
        instances = []
        for k in range(500):
            text = " ".join(rng.choice(words, size=rng.integers(0, 4)))
            sub = str(rng.choice(["altadena", "pasadena", "PacificPalisades",
                                  "LosAngeles"]))
            instances.append((f"i{k}", sub, text))
        partition = partition_by_fire(instances)
        assert len(partition.assignments) == 500
        assert sum(partition.counts.values()) == 500
        assert set(partition.counts) == {"eaton_only", "palisades_only",
                                         "both", "other"}


class TestUrlRank:
    def test_counting_and_top(self):
        labels = {
            "i1": make_instance("i1", sa=("fire_operations",)),
            "i2": make_instance("i2", sa=("recovery",)),
        }
        mentions = [
            UrlMention("https://watchduty.org/a", "watchduty.org", "i1"),
            UrlMention("https://watchduty.org/b", "watchduty.org", "i1"),
            UrlMention("https://watchduty.org/c", "watchduty.org", "i1"),
            UrlMention("https://gofundme.com/x", "gofundme.com", "i2"),
        ]
        report = url_rank(mentions, labels)
        assert report.top("fire_operations", 1) == ["watchduty.org"]
        assert report.top("recovery", 1) == ["gofundme.com"]
        assert report.overall[0] == ("watchduty.org", 3)

    def test_multi_label_instance_counts_in_both(self):
        labels = {"i1": make_instance(
            "i1", sa=("fire_operations", "public_health_safety"))}
        mentions = [UrlMention("https://airnow.gov", "airnow.gov", "i1")]
        report = url_rank(mentions, labels)
        assert report.per_category["fire_operations"] == [("airnow.gov", 1)]
        assert report.per_category["public_health_safety"] == [("airnow.gov", 1)]

    def test_health_flag(self):
        labels = {"i1": make_instance("i1")}
        mentions = [UrlMention("https://airnow.gov", "airnow.gov", "i1")]
        report = url_rank(mentions, labels)
        assert report.is_health("airnow.gov")
        assert not report.is_health("imgur.com")
        assert report.health_distribution()["fire_operations"] == 1

    def test_ranking_stable_on_ties(self):
        labels = {"i1": make_instance("i1")}
        mentions = [
            UrlMention("https://bbb.org", "bbb.org", "i1"),
            UrlMention("https://aaa.org", "aaa.org", "i1"),
        ]
        report = url_rank(mentions, labels)
        assert report.per_category["fire_operations"] == [
            ("aaa.org", 1), ("bbb.org", 1)]

    def test_unlabeled_source_only_overall(self):
        mentions = [UrlMention("https://a.org", "a.org", "ghost")]
        report = url_rank(mentions, {})
        assert report.overall == [("a.org", 1)]
        assert all(not ranked for ranked in report.per_category.values())


class TestEmitReport:
    def build_inputs(self, instances, stamps, mentions):
        labels = {x.instance_id: x for x in instances}
        return dict(
            upset_sa=upset_intersections([x.sa_labels for x in instances], "sa"),
            upset_cn=upset_intersections([x.cn_labels for x in instances], "cn"),
            timeseries=temporal_bins(instances, stamps),
            segments=time_of_day_segments(instances, stamps),
            fire_partition=partition_by_fire(
                [(x.instance_id, "altadena", "eaton fire") for x in instances]),
            url_report=url_rank(mentions, labels),
        )

    def test_files_and_headers(self, tmp_path):
        instances = [make_instance("a", cn=("victim",), grief=True)]
        inputs = self.build_inputs(instances, {"a": 1736352000},
                                   [UrlMention("https://x.org", "x.org", "a")])
        written = emit_report(tmp_path, **inputs)
        names = [p.name for p in written]
        assert names == ["upset_sa.csv", "upset_cn.csv", "timeseries.csv",
                         "segments.csv", "fire_partition.csv", "url_rank.csv"]
        assert (tmp_path / "upset_sa.csv").read_text().splitlines()[0] == "labels,count"
        assert (tmp_path / "timeseries.csv").read_text().splitlines()[0] == \
            "date,total,grief_pct,mh_pct"
        assert (tmp_path / "segments.csv").read_text().splitlines()[0] == \
            "segment,total,grief_pct,mh_pct"
        assert (tmp_path / "fire_partition.csv").read_text().splitlines()[0] == \
            "class,count"
        assert (tmp_path / "url_rank.csv").read_text().splitlines()[0] == \
            "category,domain,count,is_health"

    def test_rerun_byte_identical(self, tmp_path):
        instances = [make_instance("a", cn=("victim",)), make_instance("b")]
        stamps = {"a": 1736352000, "b": 1736352060}
        mentions = [UrlMention("https://watchduty.org", "watchduty.org", "a")]
        first_dir, second_dir = tmp_path / "one", tmp_path / "two"
        emit_report(first_dir, **self.build_inputs(instances, stamps, mentions))
        emit_report(second_dir, **self.build_inputs(instances, stamps, mentions))
        for name in ("upset_sa.csv", "upset_cn.csv", "timeseries.csv",
                     "segments.csv", "fire_partition.csv", "url_rank.csv"):
            assert (first_dir / name).read_bytes() == (second_dir / name).read_bytes()

    def test_empty_inputs_headers_only(self, tmp_path):
        inputs = self.build_inputs([], {}, [])
        emit_report(tmp_path, **inputs)
        assert (tmp_path / "upset_sa.csv").read_text() == "labels,count\n"
        assert (tmp_path / "timeseries.csv").read_text() == \
            "date,total,grief_pct,mh_pct\n"
