import bisect
import itertools
import math

import numpy as np
import pytest
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform
from sklearn.cluster import HDBSCAN as SkHDBSCAN

from reviewmonitor.topics.density import (cluster_hdbscan, condense_tree,
                                          core_distances,
                                          minimum_spanning_tree,
                                          mutual_reachability,
                                          pairwise_distances,
                                          single_linkage_tree)


def canonical(labels):
    """Relabel clusters by first appearance so partitions compare directly."""
    mapping, out = {}, []
    for label in labels:
        if label == -1:
            out.append(-1)
            continue
        mapping.setdefault(label, len(mapping))
        out.append(mapping[label])
    return out


def brute_force_mst_weight(weights):
    """Minimum spanning tree weight by enumerating all labelled trees.

    Cayley's formula via Prufer sequences: every sequence of length n-2
    over n labels decodes to a distinct spanning tree, and together they
    cover all of them. Usable for n <= 8.
    """
    n = len(weights)
    best = math.inf
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for node in seq:
            degree[node] += 1
        total = 0.0
        degree_now = list(degree)
        leaves = sorted(i for i in range(n) if degree_now[i] == 1)
        seq_iter = list(seq)
        for node in seq_iter:
            leaf = leaves.pop(0)
            total += weights[leaf][node]
            degree_now[node] -= 1
            if degree_now[node] == 1:
                bisect.insort(leaves, node)
        total += weights[leaves[0]][leaves[1]]
        best = min(best, total)
    return best


class TestDistances:
    def test_pairwise_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(10, 3))
        d = pairwise_distances(points)
        assert np.allclose(d, d.T)
        assert np.allclose(np.diag(d), 0.0)

    def test_core_distance_excludes_self(self):
        points = np.array([[0.0], [1.0], [10.0]])
        # 1st nearest neighbour of each point, not the point itself
        assert core_distances(points, 1).tolist() == [1.0, 1.0, 9.0]

    def test_mutual_reachability_hand_example(self):
        points = np.array([[0.0], [1.0], [10.0]])
        reach = mutual_reachability(points, 1)
        # cores are [1, 1, 9]; reach(i,j) = max(core_i, core_j, d(i,j))
        assert reach[0, 1] == 1.0
        assert reach[0, 2] == 10.0
        assert reach[1, 2] == 9.0


class TestMinimumSpanningTree:
    def test_hand_example(self):
        points = np.array([[0.0], [1.0], [10.0]])
        reach = mutual_reachability(points, 1)
        edges = sorted((min(u, v), max(u, v), w)
                       for u, v, w in minimum_spanning_tree(reach))
        assert edges == [(0, 1, 1.0), (1, 2, 9.0)]

    def test_weight_matches_brute_force(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            points = rng.normal(size=(6, 2))
            reach = mutual_reachability(points, 2)
            edges = minimum_spanning_tree(reach)
            got = sum(w for _, _, w in edges)
            assert got == pytest.approx(brute_force_mst_weight(reach),
                                        abs=1e-9)

    def test_edge_count_and_connectivity(self):
        rng = np.random.default_rng(2)
        points = rng.normal(size=(15, 2))
        edges = minimum_spanning_tree(pairwise_distances(points))
        assert len(edges) == 14
        seen = {0}
        for u, v, _ in edges:
            assert u in seen  # Prim grows one connected tree
            seen.add(v)
        assert seen == set(range(15))


class TestSingleLinkage:
    def test_matches_scipy_partitions(self):
        rng = np.random.default_rng(3)
        points = rng.normal(size=(25, 3))
        reach = mutual_reachability(points, 3)
        ours = single_linkage_tree(minimum_spanning_tree(reach), 25)
        theirs = linkage(squareform(reach, checks=False), method="single")
        assert np.allclose(np.sort(ours[:, 2]), np.sort(theirs[:, 2]))
        for t in np.quantile(theirs[:, 2], [0.25, 0.5, 0.75, 0.9]):
            a = canonical(fcluster(ours, t, criterion="distance"))
            b = canonical(fcluster(theirs, t, criterion="distance"))
            assert a == b

    def test_sizes_column(self):
        rng = np.random.default_rng(4)
        points = rng.normal(size=(12, 2))
        rows = single_linkage_tree(
            minimum_spanning_tree(pairwise_distances(points)), 12)
        assert rows[-1, 3] == 12
        assert np.all(rows[:, 3] >= 2)


class TestCondenseTree:
    def test_row_shape_and_root(self):
        rng = np.random.default_rng(5)
        points = np.vstack([rng.normal(0, 0.5, (10, 2)),
                            rng.normal(5, 0.5, (10, 2))])
        tree = single_linkage_tree(
            minimum_spanning_tree(mutual_reachability(points, 3)), 20)
        condensed = condense_tree(tree, 20, min_cluster_size=5)
        parents = {parent for parent, _, _, _ in condensed}
        assert min(parents) == 20  # root cluster id is n
        # two well separated blobs condense into two child clusters
        child_clusters = [c for _, c, _, _ in condensed if c >= 20]
        assert len(child_clusters) == 2

    def test_sizes_conserved(self):
        rng = np.random.default_rng(6)
        points = rng.normal(size=(30, 2))
        tree = single_linkage_tree(
            minimum_spanning_tree(mutual_reachability(points, 3)), 30)
        condensed = condense_tree(tree, 30, min_cluster_size=5)
        points_out = [c for _, c, _, _ in condensed if c < 30]
        assert sorted(points_out) == list(range(30))


class TestClusterHdbscan:
    def test_two_blobs_with_outliers(self):
        rng = np.random.default_rng(7)
        points = np.vstack([
            rng.normal((0.0, 0.0), 0.5, (30, 2)),
            rng.normal((10.0, 10.0), 0.5, (30, 2)),
            np.array([[40.0, -40.0], [-40.0, 40.0], [40.0, 40.0],
                      [-40.0, -40.0], [0.0, 80.0]]),
        ])
        result = cluster_hdbscan(points, min_cluster_size=10, min_samples=5)
        assert result.n_clusters == 2
        assert set(result.labels[:30]) == {result.labels[0]}
        assert set(result.labels[30:60]) == {result.labels[30]}
        assert result.labels[0] != result.labels[30]
        assert list(result.labels[60:]) == [-1] * 5
        assert np.all((result.probabilities >= 0)
                      & (result.probabilities <= 1))
        assert np.all(result.probabilities[60:] == 0.0)

    def test_fewer_points_than_min_cluster_size_is_all_noise(self):
        points = np.arange(8, dtype=float)[:, None]
        result = cluster_hdbscan(points, min_cluster_size=15)
        assert result.n_clusters == 0
        assert list(result.labels) == [-1] * 8

    def test_identical_points_form_one_cluster(self):
        points = np.zeros((8, 2))
        result = cluster_hdbscan(points, min_cluster_size=4, min_samples=2)
        assert result.n_clusters == 1
        assert list(result.labels) == [0] * 8
        assert np.all(result.probabilities == 1.0)

    def test_uniform_line_falls_back_to_single_cluster(self):
        points = np.linspace(0, 1, 30)[:, None]
        result = cluster_hdbscan(points, min_cluster_size=20, min_samples=3)
        assert result.n_clusters == 1
        assert -1 not in result.labels

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        points = rng.normal(size=(80, 5))
        a = cluster_hdbscan(points, min_cluster_size=10)
        b = cluster_hdbscan(points.copy(), min_cluster_size=10)
        assert np.array_equal(a.labels, b.labels)
        assert np.array_equal(a.probabilities, b.probabilities)

    def test_validation(self):
        with pytest.raises(ValueError):
            cluster_hdbscan(np.zeros((0, 2)))
        with pytest.raises(ValueError):
            cluster_hdbscan(np.zeros((5, 2)), min_cluster_size=1)
        with pytest.raises(ValueError):
            cluster_hdbscan(np.array([[np.nan, 0.0]]))

    def test_against_library_reference(self):
        """Partition agreement with an established implementation.

        The reference counts a point as its own neighbour when computing
        core distances, so its min_samples sits one above ours. Border
        points whose departure level ties a cluster birth can land either
        way, hence the one-point slack per data set.
        """
        total_points = 0
        disagreements = 0
        for seed in range(12):
            rng = np.random.default_rng(seed)
            blob_count = int(rng.integers(2, 4))
            parts = [rng.normal(rng.uniform(-20, 20, 2),
                                rng.uniform(0.5, 1.5),
                                (int(rng.integers(20, 50)), 2))
                     for _ in range(blob_count)]
            parts.append(rng.uniform(-30, 30, (int(rng.integers(0, 6)), 2)))
            points = np.vstack(parts)
            ours = cluster_hdbscan(points, min_cluster_size=10, min_samples=5)
            reference = SkHDBSCAN(min_cluster_size=10, min_samples=6)
            reference.fit(points)
            ref_clusters = len(set(reference.labels_) - {-1})
            assert ours.n_clusters == ref_clusters, f"seed {seed}"
            a = np.array(canonical(ours.labels))
            b = np.array(canonical(reference.labels_))
            mismatch = int(np.sum(a != b))
            assert mismatch <= 1, f"seed {seed}: {mismatch} points differ"
            total_points += len(points)
            disagreements += mismatch
        assert disagreements <= 3  # overwhelmingly identical overall
