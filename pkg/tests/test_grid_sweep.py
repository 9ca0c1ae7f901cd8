import numpy as np
import pytest

from corpus_fixtures import make_blob_points
from crisis_topics.embed import ReducerConfig, SweepGrid, sweep_grid
from crisis_topics.errors import ConfigError


class TestSweepGrid:
    def test_reference_grid_enumerates_64(self):
        grid = SweepGrid.reference()
        points = list(grid.points())
        assert len(grid) == 64
        assert len(points) == 64
        assert len(set(points)) == 64

    def test_min_samples_half_cluster_size_everywhere(self):
        for _, _, size, samples in SweepGrid.reference().points():
            assert samples == size // 2

    def test_reference_axes(self):
        grid = SweepGrid.reference()
        assert grid.n_neighbors == (15, 20, 25, 30)
        assert grid.min_dist == (0.0, 0.01)
        assert grid.min_cluster_size == (50, 100, 150, 200, 250, 300, 350, 400)

    def test_empty_axis_rejected(self):
        with pytest.raises(ConfigError):
            SweepGrid((), (0.0,), (10,))


@pytest.fixture(scope="module")
def small_blobs():
    points, _ = make_blob_points(n_per_blob=40, n_blobs=3, dim=20,
                                 spread=0.1, seed=2)
    return points


class TestSweepRun:
    def test_injected_evaluator_argmax(self, small_blobs):
        grid = SweepGrid((8,), (0.0, 0.01), (10, 20))
        target = (8, 0.01, 20)

        def evaluator_factory():
            seen = []

            def evaluator(assignment):
                seen.append(assignment)
                index = len(seen) - 1
                points = list(grid.points())
                return 1.0 if points[index][:3] == target else 0.0

            return evaluator

        base = ReducerConfig(n_components=3, epochs=30, seed=0)
        result = sweep_grid(small_blobs, grid, evaluator_factory(), base)
        assert (result.best.n_neighbors, result.best.min_dist,
                result.best.min_cluster_size) == target
        assert result.best.min_samples == 10

    def test_all_rows_recorded_with_schema(self, small_blobs):
        grid = SweepGrid((8,), (0.0,), (10, 30))
        base = ReducerConfig(n_components=3, epochs=30, seed=0)
        result = sweep_grid(small_blobs, grid, lambda a: float(a.num_clusters), base)
        assert len(result.rows) == 2
        csv_text = result.to_csv()
        header = csv_text.splitlines()[0]
        assert header == ("n_neighbors,min_dist,min_cluster_size,min_samples,"
                          "num_topics,coherence,outlier_fraction")
        assert len(csv_text.splitlines()) == 3

    def test_failed_configs_excluded_from_argmax(self, small_blobs):
        grid = SweepGrid((8,), (0.0,), (10, 20))
        calls = []

        def evaluator(assignment):
            calls.append(assignment)
            if len(calls) == 1:
                raise RuntimeError("injected failure")
            return 1.0

        base = ReducerConfig(n_components=3, epochs=30, seed=0)
        result = sweep_grid(small_blobs, grid, evaluator, base)
        assert result.rows[0].error == "injected failure"
        assert result.rows[0].coherence is None
        assert result.best is result.rows[1]

    def test_tie_prefers_fewer_clusters_then_smaller_size(self, small_blobs):
        grid = SweepGrid((8,), (0.0,), (10, 20))
        base = ReducerConfig(n_components=3, epochs=30, seed=0)
        result = sweep_grid(small_blobs, grid, lambda a: 1.0, base)
        tied = [r for r in result.rows if r.error is None]
        expected = min(tied, key=lambda r: (r.num_topics, r.min_cluster_size))
        assert result.best is expected

    def test_deterministic(self, small_blobs):
        grid = SweepGrid((8,), (0.01,), (12,))
        base = ReducerConfig(n_components=3, epochs=30, seed=7)
        first = sweep_grid(small_blobs, grid, lambda a: a.outlier_fraction, base)
        second = sweep_grid(small_blobs, grid, lambda a: a.outlier_fraction, base)
        assert first.to_csv() == second.to_csv()
