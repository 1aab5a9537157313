"""Hierarchical density clustering over reduced document vectors.

The contract, start to finish: core distances from the min_samples-th
nearest neighbour, mutual reachability distances, a minimum spanning
tree of the mutual reachability graph, a single-linkage dendrogram from
the ascending MST edges, condensation with min_cluster_size, and
excess-of-mass cluster selection. Points outside every selected cluster
are noise (-1). Everything is deterministic for a fixed point order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ClusterAssignment:
    labels: np.ndarray          # int, -1 noise, else 0..K-1
    n_clusters: int
    probabilities: np.ndarray   # membership strength in [0,1]

    def as_dict(self) -> dict:
        return {"labels": self.labels.tolist(),
                "n_clusters": self.n_clusters,
                "probabilities": self.probabilities.tolist()}


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def core_distances(points: np.ndarray, min_samples: int) -> np.ndarray:
    """Distance from each point to its min_samples-th nearest neighbour."""
    distances = pairwise_distances(points)
    n = len(points)
    k = min(min_samples, n - 1)
    ordered = np.sort(distances, axis=1)
    return ordered[:, k]  # column 0 is the point itself


def mutual_reachability(points: np.ndarray, min_samples: int) -> np.ndarray:
    distances = pairwise_distances(points)
    core = core_distances(points, min_samples)
    reach = np.maximum(distances, core[:, None])
    reach = np.maximum(reach, core[None, :])
    np.fill_diagonal(reach, 0.0)
    return reach


def minimum_spanning_tree(weights: np.ndarray) -> list[tuple[int, int, float]]:
    """Prim's algorithm on a dense weight matrix; ties take the lowest index."""
    n = len(weights)
    in_tree = np.zeros(n, dtype=bool)
    best_weight = np.full(n, np.inf)
    best_source = np.full(n, -1, dtype=int)
    in_tree[0] = True
    best_weight[:] = weights[0]
    best_source[:] = 0
    edges: list[tuple[int, int, float]] = []
    for _ in range(n - 1):
        candidates = np.where(~in_tree, best_weight, np.inf)
        nxt = int(np.argmin(candidates))
        edges.append((int(best_source[nxt]), nxt, float(best_weight[nxt])))
        in_tree[nxt] = True
        closer = weights[nxt] < best_weight
        update = closer & ~in_tree
        best_weight[update] = weights[nxt][update]
        best_source[update] = nxt
    return edges


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(2 * n - 1))
        self.size = [1] * n + [0] * (n - 1)
        self.next_label = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        label = self.next_label
        self.parent[a] = label
        self.parent[b] = label
        self.size[label] = self.size[a] + self.size[b]
        self.next_label += 1
        return label


def single_linkage_tree(edges: list[tuple[int, int, float]],
                        n: int) -> np.ndarray:
    """Scipy-style linkage rows (left, right, distance, size) from MST edges."""
    ordered = sorted(edges, key=lambda e: (e[2], e[0], e[1]))
    uf = _UnionFind(n)
    rows = np.zeros((n - 1, 4))
    for i, (u, v, weight) in enumerate(ordered):
        root_u, root_v = uf.find(u), uf.find(v)
        rows[i] = (root_u, root_v, weight, uf.size[root_u] + uf.size[root_v])
        uf.union(root_u, root_v)
    return rows


def _lambda_of(distance: float) -> float:
    return 1.0 / distance if distance > 0.0 else np.inf


def _lambda_diff(a: float, b: float) -> float:
    # both infinite means the cluster never thins out; no mass excess
    if np.isinf(a) and np.isinf(b):
        return 0.0
    return a - b


def condense_tree(linkage: np.ndarray, n: int,
                  min_cluster_size: int) -> list[tuple[int, int, float, int]]:
    """Prune the dendrogram into (parent, child, lambda, size) rows.

    Cluster ids start at n (the root). A child id below n is a point
    falling out of its parent cluster at the given lambda; otherwise it
    is a subcluster born from a true split.
    """
    root = 2 * n - 2
    relabel = {root: n}
    next_label = n + 1
    rows: list[tuple[int, int, float, int]] = []

    def node_points(node: int) -> list[int]:
        points, stack = [], [node]
        while stack:
            current = stack.pop()
            if current < n:
                points.append(current)
            else:
                row = linkage[current - n]
                stack.extend((int(row[0]), int(row[1])))
        return points

    stack = [root]
    while stack:
        node = stack.pop()
        if node < n:
            continue
        left, right, distance, _ = linkage[node - n]
        left, right = int(left), int(right)
        lam = _lambda_of(float(distance))
        cluster = relabel[node]
        left_size = 1 if left < n else int(linkage[left - n][3])
        right_size = 1 if right < n else int(linkage[right - n][3])

        if left_size >= min_cluster_size and right_size >= min_cluster_size:
            for child, size in ((left, left_size), (right, right_size)):
                relabel[child] = next_label
                rows.append((cluster, next_label, lam, size))
                next_label += 1
                stack.append(child)
        elif left_size < min_cluster_size and right_size < min_cluster_size:
            for child in (left, right):
                for point in node_points(child):
                    rows.append((cluster, point, lam, 1))
        elif left_size >= min_cluster_size:
            relabel[left] = cluster
            stack.append(left)
            for point in node_points(right):
                rows.append((cluster, point, lam, 1))
        else:
            relabel[right] = cluster
            stack.append(right)
            for point in node_points(left):
                rows.append((cluster, point, lam, 1))
    return rows


def _cluster_stabilities(condensed, n: int) -> dict[int, float]:
    births: dict[int, float] = {n: None}
    for parent, child, lam, _ in condensed:
        if child >= n:
            births[child] = lam
    # root's birth is the smallest lambda at which anything leaves it
    root_lambdas = [lam for parent, _, lam, _ in condensed if parent == n]
    births[n] = min(root_lambdas) if root_lambdas else 0.0

    stability: dict[int, float] = {c: 0.0 for c in births}
    for parent, child, lam, size in condensed:
        stability[parent] += _lambda_diff(lam, births[parent]) * size
    return stability


def cluster_hdbscan(points: np.ndarray, min_cluster_size: int = 15,
                    min_samples: int | None = None) -> ClusterAssignment:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.size == 0:
        raise ValueError("need at least one point")
    if not np.all(np.isfinite(points)):
        raise ValueError("points must be finite")
    if min_cluster_size < 2:
        raise ValueError("min_cluster_size must be >= 2")
    if min_samples is None:
        min_samples = min_cluster_size

    n = len(points)
    if n < min_cluster_size:
        return ClusterAssignment(labels=np.full(n, -1, dtype=int),
                                 n_clusters=0,
                                 probabilities=np.zeros(n))

    reach = mutual_reachability(points, min_samples)
    mst_edges = minimum_spanning_tree(reach)
    linkage = single_linkage_tree(mst_edges, n)
    condensed = condense_tree(linkage, n, min_cluster_size)
    stability = _cluster_stabilities(condensed, n)

    children: dict[int, list[int]] = {c: [] for c in stability}
    for parent, child, _, _ in condensed:
        if child >= n:
            children[parent].append(child)

    # bottom-up excess-of-mass: keep a cluster when it is at least as
    # stable as the sum of its selected subtrees
    selected: dict[int, bool] = {}
    subtree: dict[int, float] = {}
    for cluster in sorted(stability, reverse=True):
        if cluster == n:
            continue
        child_sum = sum(subtree[c] for c in children[cluster])
        if children[cluster] and child_sum > stability[cluster]:
            selected[cluster] = False
            subtree[cluster] = child_sum
        else:
            selected[cluster] = True
            subtree[cluster] = stability[cluster]

    # top-down sweep so a selected ancestor shadows its descendants
    final: list[int] = []
    queue = list(children[n])
    while queue:
        cluster = queue.pop()
        if selected[cluster]:
            final.append(cluster)
        else:
            queue.extend(children[cluster])

    if not final and not children[n]:
        # no split survived condensation: the whole data set is one cluster
        final = [n]
    final.sort()

    cluster_index = {c: i for i, c in enumerate(final)}
    parent_of: dict[int, int] = {}
    fell_from: dict[int, tuple[int, float]] = {}
    for parent, child, lam, _ in condensed:
        if child >= n:
            parent_of[child] = parent
        else:
            fell_from[child] = (parent, lam)

    labels = np.full(n, -1, dtype=int)
    point_lambda = np.zeros(n)
    for point in range(n):
        if point not in fell_from:
            continue
        cluster, lam = fell_from[point]
        while cluster not in cluster_index and cluster in parent_of:
            cluster = parent_of[cluster]
        if cluster in cluster_index:
            labels[point] = cluster_index[cluster]
            point_lambda[point] = lam

    probabilities = np.zeros(n)
    for idx in range(len(final)):
        member = labels == idx
        lams = point_lambda[member]
        finite = lams[np.isfinite(lams)]
        max_lambda = finite.max() if len(finite) else np.inf
        for point in np.where(member)[0]:
            lam = point_lambda[point]
            if np.isinf(lam) or max_lambda <= 0 or np.isinf(max_lambda):
                probabilities[point] = 1.0
            else:
                probabilities[point] = min(1.0, lam / max_lambda)

    return ClusterAssignment(labels=labels, n_clusters=len(final),
                             probabilities=probabilities)
