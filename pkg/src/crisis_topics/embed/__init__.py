"""Comment-track pipeline: embeddings, reduction, density clustering, sweep."""

from .clusterer import (
    ClusterAssignment,
    ClustererConfig,
    CondensedTreeRow,
    hdbscan,
)
from .knn import knn_graph, pairwise_distances
from .matrix import EmbeddingMatrix, load_embeddings, write_embeddings
from .provider import (
    DEFAULT_MODEL,
    HashingProvider,
    HttpEmbeddingProvider,
    fetch_embeddings,
)
from .reducer import ReducerConfig, reduce_embeddings
from .sweep import GridSweepResult, SweepGrid, SweepRow, sweep_grid

__all__ = [
    "ClusterAssignment",
    "ClustererConfig",
    "CondensedTreeRow",
    "DEFAULT_MODEL",
    "EmbeddingMatrix",
    "GridSweepResult",
    "HashingProvider",
    "HttpEmbeddingProvider",
    "ReducerConfig",
    "SweepGrid",
    "SweepRow",
    "fetch_embeddings",
    "hdbscan",
    "knn_graph",
    "load_embeddings",
    "pairwise_distances",
    "reduce_embeddings",
    "sweep_grid",
    "write_embeddings",
]
