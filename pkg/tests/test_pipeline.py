import json

import pytest

from corpus_fixtures import make_toy_corpus, write_toy_config
from crisis_topics.errors import StaleInputError
from crisis_topics.ioutil import sha256_file
from crisis_topics.pipeline import (
    PipelineConfig,
    PipelineManifest,
    STAGES,
    run_all,
    run_stage,
)
from crisis_topics.pipeline.cli import main as cli_main

ARTIFACT_SAMPLE = (
    "clean_docs.jsonl", "ingest_stats.json", "url_mentions.jsonl",
    "lda_model.zip", "lda_topics.json", "post_topics.json",
    "embeddings.emb", "reduced.npy", "clusters.json", "topics.json",
    "coherence_posts.json", "coherence_comments.json",
    "topic_labels_auto.json", "topic_labels_final.json",
    "instance_labels.jsonl", "upset_sa.csv", "upset_cn.csv",
    "timeseries.csv", "segments.csv", "fire_partition.csv", "url_rank.csv",
)


@pytest.fixture(scope="module")
def toy_run(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("toy")
    corpus = tmp / "corpus.jsonl"
    make_toy_corpus(corpus)
    config_path = tmp / "config.json"
    write_toy_config(config_path, corpus)
    config = PipelineConfig.load(config_path)
    out = tmp / "artifacts"
    manifest = run_all(config, out)
    return config, out, manifest


class TestFullChain:
    def test_manifest_has_all_eight_stages(self, toy_run):
        _, _, manifest = toy_run
        assert sorted(manifest.stages) == sorted(STAGES)
        assert len(manifest.stages) == 8

    def test_all_artifacts_exist(self, toy_run):
        _, out, _ = toy_run
        for name in ARTIFACT_SAMPLE:
            assert (out / name).is_file(), name

    def test_manifest_hashes_match_disk(self, toy_run):
        _, out, manifest = toy_run
        for record in manifest.stages.values():
            for name, recorded in record.outputs.items():
                assert sha256_file(out / name) == recorded

    def test_ingest_stats_shape(self, toy_run):
        _, out, _ = toy_run
        stats = json.loads((out / "ingest_stats.json").read_text())
        for key in ("posts_in", "posts_kept", "comments_in", "comments_kept",
                    "deleted", "unique_urls"):
            assert key in stats
        assert stats["posts_kept"] <= stats["posts_in"]
        assert stats["comments_kept"] <= stats["comments_in"]

    def test_instance_labels_sa_total(self, toy_run):
        _, out, _ = toy_run
        with open(out / "instance_labels.jsonl") as handle:
            for line in handle:
                obj = json.loads(line)
                assert obj["sa"], obj


class TestDeterminism:
    def test_rerun_in_fresh_dir_byte_identical(self, toy_run, tmp_path):
        config, first_out, _ = toy_run
        second_out = tmp_path / "again"
        run_all(config, second_out)
        for name in ARTIFACT_SAMPLE:
            assert (first_out / name).read_bytes() == \
                (second_out / name).read_bytes(), name

    def test_rerun_analyze_identical_hash(self, toy_run):
        config, out, _ = toy_run
        before = {name: sha256_file(out / name)
                  for name in ("upset_sa.csv", "timeseries.csv", "url_rank.csv")}
        run_stage("analyze", config, out)
        for name, digest in before.items():
            assert sha256_file(out / name) == digest


class TestStaleness:
    def make_fresh(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        make_toy_corpus(corpus)
        config_path = tmp_path / "config.json"
        write_toy_config(config_path, corpus)
        return PipelineConfig.load(config_path), tmp_path / "artifacts"

    def test_lda_without_ingest_names_missing_stage(self, tmp_path):
        config, out = self.make_fresh(tmp_path)
        with pytest.raises(StaleInputError) as err:
            run_stage("lda", config, out)
        assert err.value.stage == "ingest"
        assert "ingest" in str(err.value)

    def test_changed_upstream_artifact_detected(self, tmp_path):
        config, out = self.make_fresh(tmp_path)
        run_stage("ingest", config, out)
        clean = out / "clean_docs.jsonl"
        clean.write_text(clean.read_text() )  # identical content: still fresh
        run_stage("lda", config, out)
        # Now genuinely corrupt it.
        clean.write_text(clean.read_text() + "\n")
        with pytest.raises(StaleInputError) as err:
            run_stage("lda", config, out)
        assert "clean_docs.jsonl" in str(err.value)

    def test_remediation_hint_present(self, tmp_path):
        config, out = self.make_fresh(tmp_path)
        with pytest.raises(StaleInputError) as err:
            run_stage("analyze", config, out)
        assert "crisis-topics" in str(err.value)


class TestManifestCrashSafety:
    def test_manifest_never_truncated(self, toy_run):
        _, out, _ = toy_run
        manifest = PipelineManifest.load(out)
        # A reload parses cleanly and reflects the last acknowledged write.
        assert sorted(manifest.stages) == sorted(STAGES)


class TestCli:
    def test_stage_and_exit_codes(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        make_toy_corpus(corpus)
        config_path = tmp_path / "config.json"
        write_toy_config(config_path, corpus)
        out = tmp_path / "artifacts"

        assert cli_main(["ingest", "--config", str(config_path),
                         "--out", str(out)]) == 0
        # Stale: analyze requires map.
        assert cli_main(["analyze", "--config", str(config_path),
                         "--out", str(out)]) == 3
        # Config error: missing config file.
        assert cli_main(["ingest", "--config", str(tmp_path / "nope.json"),
                         "--out", str(out)]) == 2

    def test_config_error_on_bad_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli_main(["ingest", "--config", str(bad),
                         "--out", str(tmp_path / "o")]) == 2

    def test_seed_override_changes_manifest_seed(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        make_toy_corpus(corpus)
        config_path = tmp_path / "config.json"
        write_toy_config(config_path, corpus)
        out = tmp_path / "artifacts"
        assert cli_main(["--seed", "99", "ingest", "--config", str(config_path),
                         "--out", str(out)]) == 0
        manifest = PipelineManifest.load(out)
        assert manifest.stages["ingest"].seed == 99


class TestSweepCli:
    def test_grid_sweep_writes_table(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        make_toy_corpus(corpus)
        config_path = tmp_path / "config.json"
        write_toy_config(config_path, corpus)
        out = tmp_path / "artifacts"
        for stage in ("ingest", "lda", "embed"):
            assert cli_main([stage, "--config", str(config_path),
                             "--out", str(out)]) == 0
        grid_path = tmp_path / "grid.json"
        grid_path.write_text(json.dumps({
            "n_neighbors": [10], "min_dist": [0.0],
            "min_cluster_size": [12, 20]}))
        assert cli_main(["sweep", "--grid", str(grid_path),
                         "--config", str(config_path), "--out", str(out)]) == 0
        table = (out / "sweep_grid.csv").read_text().splitlines()
        assert table[0] == ("n_neighbors,min_dist,min_cluster_size,min_samples,"
                            "num_topics,coherence,outlier_fraction")
        assert len(table) == 3
