"""Brute-force density-clustering oracle, independent of the package code.

Builds the full mutual-reachability matrix with explicit loops, grows the
single-linkage hierarchy by repeated nearest-pair agglomeration, condenses
it recursively, and selects clusters by excess-of-mass stability. Slow on
purpose; used only to cross-check labels on small datasets.
"""

from __future__ import annotations

import math


def _euclid(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def oracle_hdbscan(points, min_cluster_size, min_samples):
    """Return labels (list of int, -1 noise) for the given points."""
    n = len(points)
    if n < min_cluster_size or n < 2:
        return [-1] * n

    dist = [[_euclid(points[i], points[j]) for j in range(n)] for i in range(n)]
    k = min(min_samples, n - 1)
    core = []
    for i in range(n):
        others = sorted(dist[i][j] for j in range(n) if j != i)
        core.append(others[k - 1])
    reach = [[max(core[i], core[j], dist[i][j]) if i != j else 0.0
              for j in range(n)] for i in range(n)]

    # Nearest-pair agglomeration under single linkage.
    active = {i: [i] for i in range(n)}          # component id -> members
    node_of = {i: i for i in range(n)}           # component id -> tree node
    cross = {}
    ids = list(active)
    for a_pos in range(len(ids)):
        for b_pos in range(a_pos + 1, len(ids)):
            a, b = ids[a_pos], ids[b_pos]
            cross[(a, b)] = reach[a][b]

    tree = {}                                     # node -> (left, right, dist)
    sizes = {i: 1 for i in range(n)}
    next_node = n
    while len(active) > 1:
        (a, b), d = min(cross.items(), key=lambda kv: (kv[1], kv[0]))
        left, right = node_of[a], node_of[b]
        tree[next_node] = (left, right, d)
        sizes[next_node] = sizes[left] + sizes[right]
        members = active.pop(b) + active.pop(a)
        for key in [key for key in cross if a in key or b in key]:
            del cross[key]
        active[a] = members
        node_of[a] = next_node
        for other in active:
            if other == a:
                continue
            best = min(reach[p][q] for p in members for q in active[other])
            cross[(min(a, other), max(a, other))] = best
        next_node += 1

    root = next_node - 1

    def leaves(node):
        if node < n:
            return [node]
        left, right, _ = tree[node]
        return leaves(left) + leaves(right)

    def event_children(node):
        """Flatten chains of equal-distance merges into one multi-way event;
        the lambda-level component structure does not depend on the binary
        merge order chosen among tied distances."""
        d = tree[node][2]
        out = []
        for child in tree[node][:2]:
            if child >= n and tree[child][2] == d:
                out.extend(event_children(child))
            else:
                out.append(child)
        return out

    # Condense: rows (parent_cluster, child, lam, size); clusters get fresh ids.
    rows = []
    cluster_counter = [n]

    def condense(node, cluster):
        if node < n:
            return
        d = tree[node][2]
        lam = (1.0 / d) if d > 0 else math.inf
        kids = event_children(node)
        big = [child for child in kids if sizes[child] >= min_cluster_size]
        if len(big) >= 2:
            for child in kids:
                if child in big:
                    cluster_counter[0] += 1
                    fresh = cluster_counter[0]
                    rows.append((cluster, fresh, lam, sizes[child]))
                    condense(child, fresh)
                else:
                    for point in leaves(child):
                        rows.append((cluster, point, lam, 1))
        else:
            for child in kids:
                if child in big:
                    condense(child, cluster)
                else:
                    for point in leaves(child):
                        rows.append((cluster, point, lam, 1))

    condense(root, n)

    births = {child: lam for _, child, lam, _ in rows if child >= n}
    stability = {}
    for parent, _, lam, size in rows:
        birth = births.get(parent, 0.0)
        if not math.isfinite(birth):
            continue
        stability[parent] = stability.get(parent, 0.0) + (lam - birth) * size

    kids = {}
    for parent, child, _, _ in rows:
        if child >= n:
            kids.setdefault(parent, []).append(child)

    def decide(cluster):
        """Return (selected_set, subtree_stability)."""
        own = stability.get(cluster, 0.0)
        child_sets, child_total = [], 0.0
        for child in kids.get(cluster, []):
            chosen, value = decide(child)
            child_sets.append(chosen)
            child_total += value
        if not kids.get(cluster):
            return {cluster}, own
        if own >= child_total:
            return {cluster}, own
        merged = set()
        for chosen in child_sets:
            merged |= chosen
        return merged, child_total

    selected = set()
    for top in kids.get(n, []):
        chosen, _ = decide(top)
        selected |= chosen
    # The root itself is never a cluster.

    parent_of = {child: parent for parent, child, _, _ in rows if child >= n}

    def owner(cluster):
        node = cluster
        while node is not None:
            if node in selected:
                return node
            node = parent_of.get(node)
        return None

    dense = {cluster: i for i, cluster in enumerate(sorted(selected))}
    labels = [-1] * n
    for parent, child, _, _ in rows:
        if child < n:
            own = owner(parent)
            if own is not None:
                labels[child] = dense[own]
    return labels


def same_partition(labels_a, labels_b):
    """True when the two labelings agree up to a bijection of cluster ids,
    with noise (-1) matching noise exactly."""
    if len(labels_a) != len(labels_b):
        return False
    forward, backward = {}, {}
    for a, b in zip(labels_a, labels_b):
        if (a == -1) != (b == -1):
            return False
        if a == -1:
            continue
        if forward.setdefault(a, b) != b:
            return False
        if backward.setdefault(b, a) != a:
            return False
    return True
