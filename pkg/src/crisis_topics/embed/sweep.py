"""Hyperparameter grid sweep over the reduce-then-cluster pipeline.

Every grid point derives ``min_samples = floor(min_cluster_size / 2)``. One
full pipeline run is scored per configuration; failures are recorded and
excluded from the argmax. Ties prefer fewer clusters, then a smaller
min_cluster_size.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from ..errors import ConfigError
from .clusterer import ClusterAssignment, ClustererConfig, hdbscan
from .reducer import ReducerConfig, reduce_embeddings

logger = logging.getLogger(__name__)

PAPER_GRID_NEIGHBORS = (15, 20, 25, 30)
PAPER_GRID_MIN_DIST = (0.0, 0.01)
PAPER_GRID_MIN_CLUSTER_SIZE = (50, 100, 150, 200, 250, 300, 350, 400)


@dataclass(frozen=True)
class SweepGrid:
    n_neighbors: tuple[int, ...]
    min_dist: tuple[float, ...]
    min_cluster_size: tuple[int, ...]

    def __post_init__(self):
        if not (self.n_neighbors and self.min_dist and self.min_cluster_size):
            raise ConfigError("sweep grid axes must be non-empty")

    def __len__(self) -> int:
        return len(self.n_neighbors) * len(self.min_dist) * len(self.min_cluster_size)

    def points(self) -> Iterator[tuple[int, float, int, int]]:
        """(n_neighbors, min_dist, min_cluster_size, min_samples) tuples."""
        for neighbors in self.n_neighbors:
            for dist in self.min_dist:
                for size in self.min_cluster_size:
                    yield neighbors, dist, size, size // 2

    @classmethod
    def reference(cls) -> "SweepGrid":
        """The shipped 4 x 2 x 8 tuning grid."""
        return cls(PAPER_GRID_NEIGHBORS, PAPER_GRID_MIN_DIST,
                   PAPER_GRID_MIN_CLUSTER_SIZE)


@dataclass
class SweepRow:
    n_neighbors: int
    min_dist: float
    min_cluster_size: int
    min_samples: int
    num_topics: int | None
    coherence: float | None
    outlier_fraction: float | None
    error: str | None = None

    def csv_fields(self) -> list[str]:
        def fmt(value):
            return "" if value is None else f"{value:.6g}" if isinstance(value, float) else str(value)

        return [
            str(self.n_neighbors), fmt(float(self.min_dist)),
            str(self.min_cluster_size), str(self.min_samples),
            fmt(self.num_topics), fmt(self.coherence), fmt(self.outlier_fraction),
        ]


SWEEP_CSV_HEADER = "n_neighbors,min_dist,min_cluster_size,min_samples,num_topics,coherence,outlier_fraction"


@dataclass
class GridSweepResult:
    best: SweepRow | None
    rows: list[SweepRow]

    def to_csv(self) -> str:
        lines = [SWEEP_CSV_HEADER]
        lines.extend(",".join(row.csv_fields()) for row in self.rows)
        return "\n".join(lines) + "\n"


def sweep_grid(
    embeddings: np.ndarray,
    grid: SweepGrid,
    evaluator: Callable[[ClusterAssignment], float],
    base_reducer: ReducerConfig | None = None,
) -> GridSweepResult:
    """Run reduce + cluster for every grid point and score the clustering.

    The evaluator receives the :class:`ClusterAssignment` and returns a
    score to maximize (typically mean topic coherence).
    """
    if base_reducer is None:
        base_reducer = ReducerConfig()

    reduced_cache: dict[tuple[int, float], np.ndarray] = {}
    rows: list[SweepRow] = []
    for neighbors, dist, size, samples in grid.points():
        row = SweepRow(neighbors, dist, size, samples, None, None, None)
        try:
            key = (neighbors, dist)
            if key not in reduced_cache:
                reducer_config = dataclasses.replace(
                    base_reducer, n_neighbors=neighbors, min_dist=dist)
                reduced_cache[key] = reduce_embeddings(embeddings, reducer_config)
            assignment = hdbscan(
                reduced_cache[key],
                ClustererConfig(min_cluster_size=size, min_samples=samples))
            row.num_topics = assignment.num_clusters
            row.outlier_fraction = assignment.outlier_fraction
            row.coherence = float(evaluator(assignment))
        except Exception as exc:  # noqa: BLE001 - a bad config must not kill the sweep
            logger.warning("sweep point (%s, %s, %s) failed: %s",
                           neighbors, dist, size, exc)
            row.error = str(exc)
        rows.append(row)

    scored = [r for r in rows if r.error is None and r.coherence is not None]
    best = None
    if scored:
        best = max(
            scored,
            key=lambda r: (
                r.coherence,
                -(r.num_topics if r.num_topics is not None else 0),
                -r.min_cluster_size,
            ),
        )
    return GridSweepResult(best=best, rows=rows)
