"""Neighbor-graph dimensionality reduction for clustering.

The standard recipe: per-point fuzzy neighborhood weights
``exp(-(d - rho_i) / sigma_i)`` with ``sigma_i`` solved so the weights sum
to ``log2(n_neighbors)``, fuzzy-union symmetrization ``a + b - a*b``, an
output kernel ``1 / (1 + a d^(2b))`` fitted from ``min_dist``, and
stochastic gradient descent with negative sampling over the weighted edges.

Reproducibility: rows are processed in a canonical order keyed by their
content hash, all RNG draws are keyed to (seed, epoch) against that order,
and per-epoch updates are accumulated then applied. Identical seed and
input give bit-identical output, and permuting input rows permutes the
output rows exactly.
"""

from __future__ import annotations

import hashlib
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from ..errors import ConfigError
from .knn import knn_graph

logger = logging.getLogger(__name__)

_SMOOTH_TOLERANCE = 1e-5
_MIN_DIST_SCALE = 1e-3  # repulsion denominator guard, as in common practice


@dataclass(frozen=True)
class ReducerConfig:
    n_neighbors: int = 15
    min_dist: float = 0.1
    n_components: int = 5
    epochs: int = 300
    seed: int = 0
    learning_rate: float = 1.0
    negative_samples: int = 5

    def __post_init__(self):
        if self.n_neighbors < 2:
            raise ConfigError("n_neighbors must be >= 2")
        if not (0.0 <= self.min_dist < 1.0):
            raise ConfigError("min_dist must be in [0, 1)")
        if self.n_components < 1:
            raise ConfigError("n_components must be >= 1")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")


def canonical_order(points: np.ndarray) -> np.ndarray:
    """Permutation sorting rows by the SHA-256 of their float64 bytes."""
    keys = [hashlib.sha256(np.ascontiguousarray(row, dtype=np.float64).tobytes())
            .hexdigest() for row in points]
    return np.array(sorted(range(len(keys)), key=lambda i: (keys[i], i)), dtype=np.int64)


def smooth_knn_weights(distances: np.ndarray, n_neighbors: int) -> np.ndarray:
    """Per-row fuzzy membership weights for the k-NN distances.

    ``rho`` is the distance to the nearest neighbor; ``sigma`` is found by
    binary search so each row's weights sum to log2(n_neighbors).
    """
    n, k = distances.shape
    target = math.log2(n_neighbors)
    weights = np.zeros_like(distances)
    for i in range(n):
        row = distances[i]
        rho = row[0]
        shifted = np.maximum(row - rho, 0.0)
        if shifted.max() == 0.0:
            weights[i] = 1.0
            continue
        lo, hi, sigma = 0.0, np.inf, 1.0
        for _ in range(64):
            total = float(np.exp(-shifted / sigma).sum())
            if abs(total - target) < _SMOOTH_TOLERANCE:
                break
            if total > target:
                hi = sigma
                sigma = (lo + hi) / 2.0
            else:
                lo = sigma
                sigma = sigma * 2.0 if hi == np.inf else (lo + hi) / 2.0
        weights[i] = np.exp(-shifted / sigma)
    return weights


def fuzzy_union_edges(
    neighbor_idx: np.ndarray, weights: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetrize directed memberships with a + b - a*b; returns unique
    undirected edges (heads, tails, weights) with heads < tails."""
    n, k = neighbor_idx.shape
    directed: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j_pos in range(k):
            j = int(neighbor_idx[i, j_pos])
            if i != j:
                directed[(i, j)] = float(weights[i, j_pos])
    merged: dict[tuple[int, int], float] = {}
    for i, j in directed:
        key = (i, j) if i < j else (j, i)
        if key not in merged:
            forward = directed.get(key, 0.0)
            backward = directed.get((key[1], key[0]), 0.0)
            merged[key] = forward + backward - forward * backward
    keys = sorted(merged)
    heads = np.array([k_[0] for k_ in keys], dtype=np.int64)
    tails = np.array([k_[1] for k_ in keys], dtype=np.int64)
    values = np.array([merged[k_] for k_ in keys], dtype=np.float64)
    return heads, tails, values


def fit_output_kernel(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Fit (a, b) so 1/(1 + a d^(2b)) tracks the min_dist plateau curve."""
    grid = np.linspace(0.0, spread * 3.0, 300)
    target = np.where(grid <= min_dist, 1.0,
                      np.exp(-(grid - min_dist) / spread))

    def kernel(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    params, _ = curve_fit(kernel, grid, target, p0=(1.0, 1.0), maxfev=10_000)
    return float(params[0]), float(params[1])


def _pca_init(points: np.ndarray, n_components: int) -> np.ndarray:
    centered = points - points.mean(axis=0, keepdims=True)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:n_components]
    # Deterministic sign: largest-magnitude loading of each axis is positive.
    for row in components:
        pivot = int(np.argmax(np.abs(row)))
        if row[pivot] < 0:
            row *= -1.0
    projected = centered @ components.T
    if projected.shape[1] < n_components:
        pad = np.zeros((projected.shape[0], n_components - projected.shape[1]))
        projected = np.hstack([projected, pad])
    peak = np.abs(projected).max()
    if peak > 0:
        projected = projected * (10.0 / peak)
    return projected.astype(np.float64)


def reduce_embeddings(points: np.ndarray, config: ReducerConfig) -> np.ndarray:
    """Project rows to ``config.n_components`` dimensions.

    Output rows align with input rows. All-identical input yields the zero
    matrix with a warning instead of a degenerate graph.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ConfigError("input must be a 2-d matrix")
    n = points.shape[0]
    if config.n_neighbors >= n:
        raise ConfigError(
            f"n_neighbors={config.n_neighbors} requires more than "
            f"{config.n_neighbors} points, got {n}")
    if not np.isfinite(points).all():
        raise ConfigError("input contains NaN or Inf")
    if np.all(points == points[0]):
        warnings.warn("all input rows identical; returning zero embedding",
                      stacklevel=2)
        return np.zeros((n, config.n_components), dtype=np.float64)

    order = canonical_order(points)
    inverse = np.empty_like(order)
    inverse[order] = np.arange(n)
    canon = points[order]

    neighbor_idx, neighbor_dist = knn_graph(canon, config.n_neighbors)
    weights = smooth_knn_weights(neighbor_dist, config.n_neighbors)
    heads, tails, edge_w = fuzzy_union_edges(neighbor_idx, weights)

    a, b = fit_output_kernel(config.min_dist)
    y = _pca_init(canon, config.n_components)

    max_w = edge_w.max()
    epochs_per_sample = np.where(edge_w > 0, max_w / np.maximum(edge_w, 1e-12), np.inf)
    next_due = epochs_per_sample.copy()

    lr0 = config.learning_rate
    for epoch in range(config.epochs):
        alpha = lr0 * (1.0 - epoch / config.epochs)
        due = next_due <= epoch + 1.0
        if not due.any():
            continue
        h = heads[due]
        t = tails[due]
        delta = np.zeros_like(y)

        diff = y[h] - y[t]
        d2 = np.einsum("ij,ij->i", diff, diff)
        with np.errstate(divide="ignore", invalid="ignore"):
            coeff = np.where(
                d2 > 0.0,
                (-2.0 * a * b * d2 ** (b - 1.0)) / (1.0 + a * d2 ** b),
                0.0,
            )
        grad = np.clip(coeff[:, None] * diff, -4.0, 4.0) * alpha
        np.add.at(delta, h, grad)
        np.add.at(delta, t, -grad)

        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence([config.seed, 0x0E6, epoch])))
        for anchor in (h, t):
            negs = rng.integers(0, n, size=(anchor.size, config.negative_samples))
            for column in range(config.negative_samples):
                other = negs[:, column]
                diff_n = y[anchor] - y[other]
                d2_n = np.einsum("ij,ij->i", diff_n, diff_n)
                coeff_n = (2.0 * b) / ((_MIN_DIST_SCALE + d2_n)
                                       * (1.0 + a * d2_n ** b))
                grad_n = np.where(
                    (d2_n > 0.0)[:, None],
                    np.clip(coeff_n[:, None] * diff_n, -4.0, 4.0),
                    4.0,
                )
                grad_n = np.where((anchor == other)[:, None], 0.0, grad_n) * alpha
                np.add.at(delta, anchor, grad_n)

        y += delta
        next_due[due] += epochs_per_sample[due]

    if not np.isfinite(y).all():
        raise AssertionError("reduction produced non-finite coordinates")
    return y[inverse]
