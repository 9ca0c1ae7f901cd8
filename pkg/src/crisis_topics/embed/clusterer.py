"""Hierarchical density-based clustering with stability-based selection.

Pipeline: core distance (distance to the min_samples-th other point),
mutual reachability ``max(core_a, core_b, d(a, b))``, minimum spanning tree
over that metric, single-linkage hierarchy, condensation at
min_cluster_size, then excess-of-mass cluster selection by stability
``sum(lambda_p - lambda_birth)`` with ``lambda = 1/distance``. The whole
dataset (hierarchy root) is never selected as a cluster.

Scale invariance: multiplying all coordinates by c > 0 rescales every
lambda by 1/c and leaves labels unchanged.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from .knn import pairwise_distances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClustererConfig:
    min_cluster_size: int
    min_samples: int | None = None  # defaults to floor(min_cluster_size / 2)
    metric: str = "euclidean"

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ConfigError("min_cluster_size must be >= 2")
        if self.metric != "euclidean":
            raise ConfigError(f"unsupported metric {self.metric!r}")
        if self.min_samples is not None and not (
                1 <= self.min_samples <= self.min_cluster_size):
            raise ConfigError("need 1 <= min_samples <= min_cluster_size")

    @property
    def effective_min_samples(self) -> int:
        if self.min_samples is not None:
            return self.min_samples
        return max(1, self.min_cluster_size // 2)


@dataclass
class CondensedTreeRow:
    parent: int
    child: int
    lam: float
    size: int

    def to_dict(self) -> dict:
        return {"parent": self.parent, "child": self.child,
                "lambda": self.lam, "size": self.size}


@dataclass
class ClusterAssignment:
    labels: np.ndarray
    num_clusters: int
    cluster_sizes: dict[int, int]
    stabilities: dict[int, float]
    condensed_tree: list[CondensedTreeRow] = field(default_factory=list)

    @property
    def noise_count(self) -> int:
        return int((self.labels == -1).sum())

    @property
    def outlier_fraction(self) -> float:
        return self.noise_count / len(self.labels) if len(self.labels) else 0.0

    def to_dict(self) -> dict:
        return {
            "labels": self.labels.tolist(),
            "num_clusters": self.num_clusters,
            "cluster_sizes": {str(k): v for k, v in sorted(self.cluster_sizes.items())},
            "stabilities": {str(k): v for k, v in sorted(self.stabilities.items())},
            "condensed_tree": [row.to_dict() for row in self.condensed_tree],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ClusterAssignment":
        return cls(
            labels=np.asarray(obj["labels"], dtype=np.int64),
            num_clusters=obj["num_clusters"],
            cluster_sizes={int(k): v for k, v in obj["cluster_sizes"].items()},
            stabilities={int(k): v for k, v in obj["stabilities"].items()},
            condensed_tree=[
                CondensedTreeRow(r["parent"], r["child"], r["lambda"], r["size"])
                for r in obj["condensed_tree"]
            ],
        )


def core_distances(distance_matrix: np.ndarray, min_samples: int) -> np.ndarray:
    """Distance to each point's min_samples-th nearest other point."""
    n = distance_matrix.shape[0]
    k = min(min_samples, n - 1)
    without_self = np.sort(
        distance_matrix + np.diag(np.full(n, np.inf)), axis=1)
    return without_self[:, k - 1]


def mutual_reachability(distance_matrix: np.ndarray, core: np.ndarray) -> np.ndarray:
    reach = np.maximum(distance_matrix, core[:, None])
    reach = np.maximum(reach, core[None, :])
    np.fill_diagonal(reach, 0.0)
    return reach


def minimum_spanning_tree(weights: np.ndarray) -> list[tuple[int, int, float]]:
    """Prim's algorithm over a dense symmetric weight matrix."""
    n = weights.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    source = np.zeros(n, dtype=np.int64)
    edges: list[tuple[int, int, float]] = []

    current = 0
    in_tree[0] = True
    for _ in range(n - 1):
        row = weights[current]
        better = (~in_tree) & (row < best)
        best[better] = row[better]
        source[better] = current
        candidates = np.where(~in_tree, best, np.inf)
        nxt = int(np.argmin(candidates))
        edges.append((int(source[nxt]), nxt, float(best[nxt])))
        in_tree[nxt] = True
        current = nxt
    return edges


def single_linkage(edges: list[tuple[int, int, float]], n: int) -> list[tuple[int, int, float, int]]:
    """Union-find merge of MST edges sorted by weight.

    Returns merge rows (left_node, right_node, distance, merged_size) with
    leaves 0..n-1 and internal nodes numbered n, n+1, ... in merge order.
    """
    ordered = sorted(edges, key=lambda e: (e[2], e[0], e[1]))
    parent = list(range(n))
    component_node = list(range(n))
    component_size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rows = []
    next_node = n
    for u, v, distance in ordered:
        ru, rv = find(u), find(v)
        rows.append((
            component_node[ru], component_node[rv], distance,
            component_size[ru] + component_size[rv],
        ))
        parent[ru] = rv
        component_node[rv] = next_node
        component_size[rv] = rows[-1][3]
        next_node += 1
    return rows


def condense_tree(
    linkage: list[tuple[int, int, float, int]], n: int, min_cluster_size: int
) -> list[CondensedTreeRow]:
    """Prune the dendrogram: components below min_cluster_size fall out of
    their parent cluster as points; clusters persist through small splits.

    Merges at exactly equal distances are treated as one simultaneous
    multi-way event. Mutual reachability is tie-heavy (every pair inside a
    point's core radius shares its core distance), and flattening makes the
    condensed tree a function of the lambda-indexed component structure
    rather than of the arbitrary binary merge order.
    """
    if not linkage:
        return []
    children: dict[int, tuple[int, int, float]] = {}
    for i, (left, right, distance, _) in enumerate(linkage):
        children[n + i] = (left, right, distance)

    sizes: dict[int, int] = {i: 1 for i in range(n)}
    for i, (_, _, _, size) in enumerate(linkage):
        sizes[n + i] = size

    def leaves_under(node: int) -> list[int]:
        stack, out = [node], []
        while stack:
            x = stack.pop()
            if x < n:
                out.append(x)
            else:
                left, right, _ = children[x]
                stack.extend((left, right))
        return out

    def flat_children(node: int) -> list[int]:
        """Children of the multi-way merge event at this node's distance."""
        distance = children[node][2]
        out: list[int] = []
        stack = [children[node][0], children[node][1]]
        while stack:
            child = stack.pop()
            if child >= n and children[child][2] == distance:
                stack.extend(children[child][:2])
            else:
                out.append(child)
        return out

    root = n + len(linkage) - 1
    rows: list[CondensedTreeRow] = []
    relabel = {root: n}
    next_label = n + 1
    stack = [root]
    while stack:
        node = stack.pop()
        cluster = relabel[node]
        distance = children[node][2]
        lam = 1.0 / distance if distance > 0.0 else np.inf
        parts = [(child, sizes[child]) for child in flat_children(node)]
        big = [p for p in parts if p[1] >= min_cluster_size]

        if len(big) >= 2:
            for child_node, child_size in parts:
                if child_size >= min_cluster_size:
                    rows.append(CondensedTreeRow(cluster, next_label, lam, child_size))
                    relabel[child_node] = next_label
                    next_label += 1
                    stack.append(child_node)
                else:
                    for point in leaves_under(child_node):
                        rows.append(CondensedTreeRow(cluster, point, lam, 1))
        else:
            for child_node, child_size in parts:
                if child_size >= min_cluster_size:
                    # Cluster continues through the split under the same label.
                    relabel[child_node] = cluster
                    stack.append(child_node)
                else:
                    for point in leaves_under(child_node):
                        rows.append(CondensedTreeRow(cluster, point, lam, 1))
    return rows


def compute_stabilities(rows: list[CondensedTreeRow], n: int) -> dict[int, float]:
    """Excess of mass per cluster: sum of (lambda_child - lambda_birth) * size."""
    births: dict[int, float] = {}
    for row in rows:
        if row.child >= n:
            births[row.child] = row.lam
    clusters = {row.parent for row in rows}
    stabilities = {c: 0.0 for c in clusters}
    for row in rows:
        birth = births.get(row.parent, 0.0)
        if not np.isfinite(birth):
            continue  # cluster born at zero distance: no measurable mass above it
        stabilities[row.parent] += (row.lam - birth) * row.size
    return stabilities


def select_clusters_eom(
    rows: list[CondensedTreeRow], stabilities: dict[int, float], n: int
) -> set[int]:
    """Bottom-up excess-of-mass selection; the root is never selected."""
    children_of: dict[int, list[int]] = {}
    for row in rows:
        if row.child >= n:
            children_of.setdefault(row.parent, []).append(row.child)
    clusters = sorted(stabilities, reverse=True)  # children have higher ids
    selected: dict[int, bool] = {}
    subtree: dict[int, float] = {}
    for cluster in clusters:
        kids = children_of.get(cluster, [])
        child_total = sum(subtree[k] for k in kids)
        if not kids or stabilities[cluster] >= child_total:
            selected[cluster] = True
            subtree[cluster] = stabilities[cluster]
        else:
            selected[cluster] = False
            subtree[cluster] = child_total

    root = n
    selected[root] = False

    chosen: set[int] = set()

    def walk(cluster: int, blocked: bool) -> None:
        mine = selected.get(cluster, False) and not blocked
        if mine:
            chosen.add(cluster)
        for kid in children_of.get(cluster, []):
            walk(kid, blocked or mine)

    walk(root, False)
    return chosen


def labels_from_selection(
    rows: list[CondensedTreeRow], chosen: set[int], n: int
) -> tuple[np.ndarray, dict[int, int]]:
    parent_of: dict[int, int] = {}
    for row in rows:
        if row.child >= n:
            parent_of[row.child] = row.parent

    resolve_cache: dict[int, int] = {}

    def resolve(cluster: int) -> int:
        if cluster in resolve_cache:
            return resolve_cache[cluster]
        node = cluster
        found = -1
        while True:
            if node in chosen:
                found = node
                break
            if node not in parent_of:
                break
            node = parent_of[node]
        resolve_cache[cluster] = found
        return found

    dense = {cluster: i for i, cluster in enumerate(sorted(chosen))}
    labels = np.full(n, -1, dtype=np.int64)
    for row in rows:
        if row.child < n:
            owner = resolve(row.parent)
            if owner != -1:
                labels[row.child] = dense[owner]
    return labels, dense


def hdbscan(points: np.ndarray, config: ClustererConfig) -> ClusterAssignment:
    """Cluster rows of ``points``; noise gets label -1.

    Fewer points than min_cluster_size is not an error: everything is noise,
    with a warning.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ConfigError("input must be a 2-d matrix")
    n = points.shape[0]
    if n < config.min_cluster_size or n < 2:
        warnings.warn(
            f"{n} points is fewer than min_cluster_size="
            f"{config.min_cluster_size}; labelling everything noise",
            stacklevel=2)
        return ClusterAssignment(
            labels=np.full(n, -1, dtype=np.int64),
            num_clusters=0, cluster_sizes={}, stabilities={}, condensed_tree=[])

    distance = pairwise_distances(points)
    core = core_distances(distance, config.effective_min_samples)
    reach = mutual_reachability(distance, core)
    mst = minimum_spanning_tree(reach)
    linkage = single_linkage(mst, n)
    condensed = condense_tree(linkage, n, config.min_cluster_size)
    stabilities = compute_stabilities(condensed, n)
    chosen = select_clusters_eom(condensed, stabilities, n)
    labels, dense = labels_from_selection(condensed, chosen, n)

    sizes = {dense[c]: int((labels == dense[c]).sum()) for c in chosen}
    assignment = ClusterAssignment(
        labels=labels,
        num_clusters=len(chosen),
        cluster_sizes=sizes,
        stabilities={dense[c]: float(stabilities[c]) for c in chosen},
        condensed_tree=condensed,
    )
    for cluster_id, size in assignment.cluster_sizes.items():
        if size < config.min_cluster_size:
            raise AssertionError(
                f"cluster {cluster_id} smaller than min_cluster_size")
    return assignment
