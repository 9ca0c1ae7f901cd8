"""Exact k-nearest-neighbor search by brute force.

Shared by the reducer (fuzzy neighborhood graph) and available to callers
that need core distances. Exactness and determinism beat index speed at this
corpus scale; distances within a row are non-decreasing and ties resolve to
the smaller point index.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError


def pairwise_distances(points: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Dense Euclidean distance matrix, computed in row chunks."""
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    sq = np.einsum("ij,ij->i", points, points)
    out = np.empty((n, n), dtype=np.float64)
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        gram = points[start:stop] @ points.T
        d2 = sq[start:stop, None] + sq[None, :] - 2.0 * gram
        np.maximum(d2, 0.0, out=d2)
        out[start:stop] = np.sqrt(d2)
    np.fill_diagonal(out, 0.0)
    return out


def knn_graph(points: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices and distances of each point's k nearest neighbors, self excluded.

    Returns ``(indices, distances)`` of shape (n, k); rows are sorted by
    distance then index. Requires ``k < n``.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k >= n:
        raise ConfigError(f"k={k} must be smaller than the point count {n}")
    if k < 1:
        raise ConfigError("k must be >= 1")

    distances = pairwise_distances(points)
    np.fill_diagonal(distances, np.inf)  # self excluded even at zero distance
    # Stable argsort on distance keeps equal-distance ties in index order.
    order = np.argsort(distances, axis=1, kind="stable")[:, :k]
    rows = np.arange(n)[:, None]
    return order.astype(np.int64), distances[rows, order]
