import json
import math
import random

import numpy as np
import pytest

from reviewmonitor.topics.embedding import (AdapterError, embed,
                                            parse_adapter_vectors)
from reviewmonitor.topics.reduction import ReductionError, reduce_dims


def random_docs(seed, n_docs=40, vocab_size=25):
    rng = random.Random(seed)
    vocab = [f"stem{i}" for i in range(vocab_size)]
    return [[rng.choice(vocab) for _ in range(rng.randrange(3, 15))]
            for _ in range(n_docs)]


class TestEmbed:
    def test_rows_are_unit_length(self):
        matrix = embed(random_docs(1), lsa_dim=None)
        norms = np.linalg.norm(matrix.rows, axis=1)
        assert np.allclose(norms, 1.0)

    def test_full_vocab_dimension(self):
        docs = [["a", "b"], ["b", "c"], ["c", "d"]]
        matrix = embed(docs, lsa_dim=None)
        assert matrix.rows.shape == (3, 4)
        assert matrix.embedder_id == "builtin-tfidf"

    def test_order_independent_vocabulary(self):
        docs = [["kid", "scream"], ["crash", "bug"], ["kid", "crash"]]
        a = embed(docs, lsa_dim=None).rows
        # same docs, same order, rebuilt from scratch
        b = embed([list(d) for d in docs], lsa_dim=None).rows
        assert np.array_equal(a, b)

    def test_identical_docs_have_cosine_one(self):
        docs = [["kid", "scream"], ["kid", "scream"], ["crash", "bug"]]
        rows = embed(docs, lsa_dim=None).rows
        assert rows[0] @ rows[1] == pytest.approx(1.0)
        assert rows[0] @ rows[2] == pytest.approx(0.0)

    def test_lsa_projection(self):
        matrix = embed(random_docs(2), lsa_dim=8)
        assert matrix.rows.shape[1] == 8
        assert matrix.embedder_id == "builtin-tfidf-lsa8"
        assert np.allclose(np.linalg.norm(matrix.rows, axis=1), 1.0)

    def test_lsa_noop_when_vocab_small(self):
        docs = [["a", "b"], ["b", "c"], ["a", "c"]]
        matrix = embed(docs, lsa_dim=64)
        assert matrix.embedder_id == "builtin-tfidf"
        assert matrix.rows.shape[1] == 3

    def test_lsa_preserves_pairwise_geometry(self):
        docs = random_docs(3, n_docs=20, vocab_size=10)
        full = embed(docs, lsa_dim=None).rows
        # a full-rank "reduction" is a rotation: dot products survive
        projected = embed(docs, lsa_dim=10).rows
        if projected.shape[1] == 10:
            assert np.allclose(full @ full.T, projected @ projected.T,
                               atol=1e-8)

    def test_deterministic_across_runs(self):
        docs = random_docs(4)
        assert np.array_equal(embed(docs, lsa_dim=12).rows,
                              embed(docs, lsa_dim=12).rows)

    def test_too_few_docs(self):
        with pytest.raises(ValueError):
            embed([["only"]])


class TestParseAdapterVectors:
    def test_parses_in_expected_order(self):
        lines = [json.dumps({"id": "b", "vector": [0.0, 1.0]}),
                 json.dumps({"id": "a", "vector": [1.0, 0.0]})]
        matrix = parse_adapter_vectors(lines, ["a", "b"])
        assert np.array_equal(matrix, np.array([[1.0, 0.0], [0.0, 1.0]]))

    def test_missing_id(self):
        lines = [json.dumps({"id": "a", "vector": [1.0]})]
        with pytest.raises(AdapterError):
            parse_adapter_vectors(lines, ["a", "b"])

    def test_ragged_dimensions(self):
        lines = [json.dumps({"id": "a", "vector": [1.0]}),
                 json.dumps({"id": "b", "vector": [1.0, 2.0]})]
        with pytest.raises(AdapterError):
            parse_adapter_vectors(lines, ["a", "b"])

    def test_malformed_line(self):
        with pytest.raises(AdapterError):
            parse_adapter_vectors(["{broken"], ["a"])


class TestReduceDims:
    def test_shape_and_explained_variance(self):
        rng = np.random.default_rng(11)
        points = rng.normal(size=(50, 12))
        reduced = reduce_dims(points, target_dim=5)
        assert reduced.rows.shape == (50, 5)
        assert reduced.explained_variance.shape == (5,)
        assert np.all(np.diff(reduced.explained_variance) <= 1e-12)
        assert 0.0 < reduced.explained_variance.sum() <= 1.0 + 1e-12

    def test_planar_data_recovers_plane(self):
        rng = np.random.default_rng(5)
        # rank-2 data embedded in 6 dimensions
        basis = rng.normal(size=(2, 6))
        coeffs = rng.normal(size=(40, 2))
        points = coeffs @ basis
        reduced = reduce_dims(points, target_dim=2)
        assert reduced.explained_variance.sum() == pytest.approx(1.0)
        # distances survive a projection onto the true plane
        from scipy.spatial.distance import pdist
        assert np.allclose(pdist(points), pdist(reduced.rows), atol=1e-8)

    def test_matches_covariance_eigendecomposition(self):
        rng = np.random.default_rng(7)
        points = rng.normal(size=(30, 8))
        reduced = reduce_dims(points, target_dim=3)
        centered = points - points.mean(axis=0)
        eigenvalues = np.sort(np.linalg.eigvalsh(
            np.cov(centered, rowvar=False)))[::-1]
        expected = eigenvalues[:3] / eigenvalues.sum()
        assert np.allclose(reduced.explained_variance, expected, atol=1e-9)
        # projected variance equals the top eigenvalues
        got = reduced.rows.var(axis=0, ddof=1)
        assert np.allclose(got, eigenvalues[:3], atol=1e-9)

    def test_deterministic_sign(self):
        rng = np.random.default_rng(9)
        points = rng.normal(size=(25, 6))
        a = reduce_dims(points, target_dim=4).rows
        b = reduce_dims(points.copy(), target_dim=4).rows
        assert np.array_equal(a, b)

    def test_identical_points_rejected(self):
        with pytest.raises(ReductionError):
            reduce_dims(np.ones((10, 4)), target_dim=2)

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            reduce_dims(np.zeros((10, 3)), target_dim=5)
        with pytest.raises(ValueError):
            reduce_dims(np.zeros((3, 10)), target_dim=5)
