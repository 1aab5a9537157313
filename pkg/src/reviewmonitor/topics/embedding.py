"""Document embeddings: builtin TF-IDF (optionally LSA-projected) rows,
or vectors fetched through the external adapter protocol.

Rows are always L2-normalized, so cosine similarity is a dot product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..termstats import idf


class AdapterError(Exception):
    """External embedder broke the protocol (bad shape, missing rows)."""


@dataclass
class EmbeddingMatrix:
    rows: np.ndarray  # (n_docs, dim), float64
    embedder_id: str

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])

    def __post_init__(self):
        if self.rows.ndim != 2:
            raise ValueError("rows must be a 2-D matrix")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("embedding entries must be finite")


def _l2_normalize(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return matrix / norms


def embed(docs: Sequence[Sequence[str]], lsa_dim: int | None = 64) -> EmbeddingMatrix:
    """TF-IDF rows over the stem vocabulary, optionally reduced by SVD.

    The vocabulary is sorted so the matrix is independent of document
    iteration order; SVD components get a deterministic sign (largest
    magnitude coordinate positive).
    """
    if len(docs) < 2:
        raise ValueError("need at least 2 documents to embed")
    vocabulary = sorted({term for doc in docs for term in doc})
    vocab_index = {term: i for i, term in enumerate(vocabulary)}
    n_docs = len(docs)

    doc_freq = np.zeros(len(vocabulary))
    for doc in docs:
        for term in set(doc):
            doc_freq[vocab_index[term]] += 1
    idf_values = np.array([idf(n_docs, int(df)) for df in doc_freq])

    matrix = np.zeros((n_docs, len(vocabulary)))
    for row, doc in enumerate(docs):
        for term in doc:
            matrix[row, vocab_index[term]] += 1.0
    matrix *= idf_values
    matrix = _l2_normalize(matrix)
    embedder_id = "builtin-tfidf"

    if lsa_dim is not None and 0 < lsa_dim < len(vocabulary):
        u, s, vt = np.linalg.svd(matrix, full_matrices=False)
        # fix sign per component for run-to-run stability
        for k in range(vt.shape[0]):
            pivot = np.argmax(np.abs(vt[k]))
            if vt[k, pivot] < 0:
                vt[k] *= -1.0
                u[:, k] *= -1.0
        matrix = _l2_normalize(u[:, :lsa_dim] * s[:lsa_dim])
        embedder_id = f"builtin-tfidf-lsa{lsa_dim}"

    return EmbeddingMatrix(rows=matrix, embedder_id=embedder_id)


def parse_adapter_vectors(lines: Sequence[str],
                          expected_ids: Sequence[str]) -> np.ndarray:
    """Parse {id, vector} response lines into a matrix in input order."""
    by_id: dict[str, list[float]] = {}
    for line in lines:
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            by_id[str(record["id"])] = [float(x) for x in record["vector"]]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise AdapterError(f"bad vector line {line!r}: {exc}")
    missing = [i for i in expected_ids if i not in by_id]
    if missing:
        raise AdapterError(f"missing vectors for ids {missing[:5]}")
    dims = {len(v) for v in by_id.values()}
    if len(dims) != 1:
        raise AdapterError(f"inconsistent vector dimensions: {sorted(dims)}")
    return np.array([by_id[i] for i in expected_ids], dtype=float)
