import numpy as np
import pytest

from corpus_fixtures import make_planted_corpus, shuffled
from crisis_topics.errors import ConfigError
from crisis_topics.lda import (
    LdaConfig,
    infer_doc_topics,
    load_model,
    perplexity,
    save_model,
    sweep_topic_count,
    top_terms,
    train_lda,
)


@pytest.fixture(scope="module")
def planted():
    corpus, terms, block_of_term, dominant = make_planted_corpus(
        n_docs=200, tokens_per_doc=20, seed=3)
    config = LdaConfig(num_topics=2, iterations=80, seed=42)
    model = train_lda(corpus, len(terms), config)
    model.vocab_terms = tuple(terms)
    return corpus, terms, block_of_term, dominant, model


class TestTrainLda:
    def test_planted_block_purity(self, planted):
        _, terms, block_of_term, _, model = planted
        for topic in range(2):
            top = top_terms(model, topic, 10)
            blocks = {block_of_term[terms.index(t)] for t, _ in top.terms}
            assert len(blocks) == 1
        # The two topics must claim different blocks.
        first = {t for t, _ in top_terms(model, 0, 10).terms}
        second = {t for t, _ in top_terms(model, 1, 10).terms}
        assert first.isdisjoint(second)

    def test_count_invariants_every_sweep(self):
        corpus, terms, _, _ = make_planted_corpus(n_docs=30, tokens_per_doc=10, seed=5)
        config = LdaConfig(num_topics=3, iterations=10, seed=1)
        model = train_lda(corpus, len(terms), config, check_every_sweep=True)
        model.check_invariants()

    def test_bit_identical_rerun(self):
        corpus, terms, _, _ = make_planted_corpus(n_docs=40, tokens_per_doc=12, seed=9)
        config = LdaConfig(num_topics=4, iterations=15, seed=99)
        a = train_lda(corpus, len(terms), config)
        b = train_lda(corpus, len(terms), config)
        assert a.assignments == b.assignments
        assert np.array_equal(a.topic_word_counts, b.topic_word_counts)

    def test_seed_changes_assignments(self):
        corpus, terms, _, _ = make_planted_corpus(n_docs=40, tokens_per_doc=12, seed=9)
        a = train_lda(corpus, len(terms), LdaConfig(num_topics=4, iterations=15, seed=1))
        b = train_lda(corpus, len(terms), LdaConfig(num_topics=4, iterations=15, seed=2))
        assert a.assignments != b.assignments

    def test_document_order_exchangeability(self):
        corpus, terms, _, _ = make_planted_corpus(n_docs=30, tokens_per_doc=10, seed=21)
        config = LdaConfig(num_topics=3, iterations=12, seed=5)
        base = train_lda(corpus, len(terms), config)
        permuted_corpus = shuffled(corpus, seed=123)
        permuted = train_lda(permuted_corpus, len(terms), config)
        by_id_base = dict(zip(base.doc_ids, base.assignments))
        by_id_perm = dict(zip(permuted.doc_ids, permuted.assignments))
        assert by_id_base == by_id_perm

    def test_k1_degenerate(self):
        corpus = [("d1", [0, 1, 2]), ("d2", [2, 2])]
        model = train_lda(corpus, 3, LdaConfig(num_topics=1, iterations=5, seed=0))
        assert np.allclose(model.theta(), 1.0)

    def test_count_conservation_tiny_doc(self):
        model = train_lda([("d", [0, 0, 1])], 2,
                          LdaConfig(num_topics=2, iterations=3, seed=0))
        assert int(model.doc_topic_counts.sum()) == 3

    def test_empty_corpus_rejected(self):
        with pytest.raises(ConfigError):
            train_lda([], 5, LdaConfig(num_topics=2, iterations=2, seed=0))

    def test_empty_document_rejected(self):
        with pytest.raises(ConfigError):
            train_lda([("d", [])], 5, LdaConfig(num_topics=2, iterations=2, seed=0))

    def test_k_exceeding_tokens_warns_but_runs(self):
        with pytest.warns(UserWarning):
            model = train_lda([("d", [0, 1])], 2,
                              LdaConfig(num_topics=5, iterations=2, seed=0))
        model.check_invariants()

    def test_invalid_configs(self):
        with pytest.raises(ConfigError):
            LdaConfig(num_topics=0, iterations=5)
        with pytest.raises(ConfigError):
            LdaConfig(num_topics=2, iterations=5, burn_in=5)
        with pytest.raises(ConfigError):
            LdaConfig(num_topics=2, iterations=5, beta=0.0)


class TestInference:
    def test_reinference_matches_dominant(self, planted):
        corpus, _, _, _, model = planted
        hits = 0
        for (doc_id, tokens), trained_dominant in zip(corpus, model.dominant_topics()):
            theta, oov = infer_doc_topics(model, tokens, iterations=20)
            assert not oov
            hits += int(np.argmax(theta) == trained_dominant)
        assert hits / len(corpus) >= 0.90

    def test_all_oov_uniform(self, planted):
        _, _, _, _, model = planted
        with pytest.warns(UserWarning):
            theta, oov = infer_doc_topics(model, [10_000, 10_001])
        assert oov
        assert np.allclose(theta, 0.5)

    def test_sums_to_one(self, planted):
        _, _, _, _, model = planted
        theta, _ = infer_doc_topics(model, [0, 1, 2, 21])
        assert abs(theta.sum() - 1.0) < 1e-9

    def test_k1(self):
        model = train_lda([("d", [0, 1])], 2,
                          LdaConfig(num_topics=1, iterations=2, seed=0))
        theta, _ = infer_doc_topics(model, [0])
        assert theta.tolist() == [1.0]

    def test_deterministic(self, planted):
        _, _, _, _, model = planted
        first, _ = infer_doc_topics(model, [0, 1, 2], iterations=15)
        second, _ = infer_doc_topics(model, [0, 1, 2], iterations=15)
        assert np.array_equal(first, second)


class TestTopTerms:
    def test_clamped_to_vocab(self, planted):
        _, terms, _, _, model = planted
        out = top_terms(model, 0, n=10_000)
        assert len(out.terms) == len(terms)

    def test_probabilities_normalize(self, planted):
        _, terms, _, _, model = planted
        out = top_terms(model, 0, n=len(terms))
        assert sum(p for _, p in out.terms) == pytest.approx(1.0, abs=1e-9)

    def test_descending_with_lexicographic_ties(self, planted):
        _, _, _, _, model = planted
        out = top_terms(model, 1, 10)
        probs = [p for _, p in out.terms]
        assert probs == sorted(probs, reverse=True)
        for (t1, p1), (t2, p2) in zip(out.terms, out.terms[1:]):
            if p1 == p2:
                assert t1 < t2

    def test_out_of_range_topic(self, planted):
        _, _, _, _, model = planted
        with pytest.raises(ConfigError):
            top_terms(model, 2, 5)


class TestConvergence:
    def test_perplexity_declines_for_most_seeds(self):
        corpus, terms, _, _ = make_planted_corpus(
            n_docs=100, tokens_per_doc=15, seed=17)
        improved = 0
        seeds = range(20)
        for seed in seeds:
            early_cfg = LdaConfig(num_topics=2, iterations=3, seed=seed)
            late_cfg = LdaConfig(num_topics=2, iterations=25, burn_in=3, seed=seed)
            early = perplexity(train_lda(corpus, len(terms), early_cfg), corpus)
            late = perplexity(train_lda(corpus, len(terms), late_cfg), corpus)
            improved += int(late <= early)
        assert improved / len(list(seeds)) >= 0.95


class TestSweep:
    def make_corpus(self):
        return make_planted_corpus(n_docs=20, tokens_per_doc=8, seed=2)[:2]

    def test_injected_evaluator_argmax(self):
        corpus, terms = self.make_corpus()
        base = LdaConfig(num_topics=2, iterations=3, seed=0)
        result = sweep_topic_count(
            corpus, len(terms), base, evaluator=lambda m: -m.num_topics,
            k_min=2, k_max=6)
        assert result.best_k == 2
        assert set(result.scores) == {2, 3, 4, 5, 6}

    def test_singleton_sweep(self):
        corpus, terms = self.make_corpus()
        base = LdaConfig(num_topics=2, iterations=3, seed=0)
        result = sweep_topic_count(corpus, len(terms), base,
                                   evaluator=lambda m: 1.0, k_min=7, k_max=7)
        assert result.best_k == 7
        assert list(result.scores) == [7]

    def test_tie_prefers_smallest_k(self):
        corpus, terms = self.make_corpus()
        base = LdaConfig(num_topics=2, iterations=3, seed=0)
        result = sweep_topic_count(corpus, len(terms), base,
                                   evaluator=lambda m: 0.5, k_min=3, k_max=5)
        assert result.best_k == 3

    def test_evaluator_failure_excluded(self):
        corpus, terms = self.make_corpus()
        base = LdaConfig(num_topics=2, iterations=3, seed=0)

        def evaluator(model):
            if model.num_topics == 2:
                raise ValueError("boom")
            return -model.num_topics

        result = sweep_topic_count(corpus, len(terms), base, evaluator,
                                   k_min=2, k_max=4)
        assert result.best_k == 3
        assert 2 in result.failures


class TestArchive:
    def test_round_trip_top_terms(self, planted, tmp_path):
        _, _, _, _, model = planted
        path = tmp_path / "model.lda.zip"
        save_model(model, path)
        loaded = load_model(path)
        for topic in range(model.num_topics):
            assert top_terms(loaded, topic, 10) == top_terms(model, topic, 10)

    def test_archive_bytes_stable(self, planted, tmp_path):
        _, _, _, _, model = planted
        p1, p2 = tmp_path / "a.zip", tmp_path / "b.zip"
        save_model(model, p1)
        save_model(model, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_counts_survive(self, planted, tmp_path):
        _, _, _, _, model = planted
        path = tmp_path / "model.zip"
        save_model(model, path)
        loaded = load_model(path)
        assert np.array_equal(loaded.topic_word_counts, model.topic_word_counts)
        assert np.array_equal(loaded.doc_topic_counts, model.doc_topic_counts)
        assert np.array_equal(loaded.topic_totals, model.topic_totals)
        loaded.check_invariants()
