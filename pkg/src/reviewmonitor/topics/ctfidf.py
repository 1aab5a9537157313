"""Class-based TF-IDF keywords and topic similarity.

Each cluster's documents are concatenated into one class document;
weight(t, c) = tf(t, c) * ln(1 + A / f(t)) with A the mean class token
count and f(t) the term's total count across classes.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

import numpy as np


def ctfidf_keywords(class_docs: Sequence[Sequence[str]], top_k: int = 10
                    ) -> tuple[list[list[tuple[str, float]]],
                               list[dict[str, float]]]:
    """Per-class ranked keywords and sparse weight vectors.

    class_docs[c] is the concatenated stem sequence of cluster c. An
    empty class yields an empty keyword list and vector.
    """
    if not class_docs:
        raise ValueError("need at least one class")
    class_counts = [Counter(doc) for doc in class_docs]
    total_counts: Counter[str] = Counter()
    for counts in class_counts:
        total_counts.update(counts)
    mean_class_tokens = sum(total_counts.values()) / len(class_docs)

    keywords: list[list[tuple[str, float]]] = []
    vectors: list[dict[str, float]] = []
    for counts in class_counts:
        vector = {
            term: tf * math.log(1.0 + mean_class_tokens / total_counts[term])
            for term, tf in counts.items()
        }
        ranked = sorted(vector.items(), key=lambda kv: (-kv[1], kv[0]))
        keywords.append(ranked[:top_k])
        vectors.append(vector)
    return keywords, vectors


def _dense(vectors: Sequence[dict[str, float]]) -> np.ndarray:
    vocabulary = sorted({term for vec in vectors for term in vec})
    index = {term: i for i, term in enumerate(vocabulary)}
    matrix = np.zeros((len(vectors), len(vocabulary)))
    for row, vec in enumerate(vectors):
        for term, weight in vec.items():
            matrix[row, index[term]] = weight
    return matrix


def topic_similarity(vectors: Sequence[dict[str, float]]) -> np.ndarray:
    """Symmetric cosine-similarity matrix; zero vectors get all-zero rows."""
    if len(vectors) < 2:
        raise ValueError("need at least 2 topics")
    matrix = _dense(vectors)
    norms = np.linalg.norm(matrix, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    unit = matrix / safe[:, None]
    similarity = unit @ unit.T
    similarity[norms == 0.0, :] = 0.0
    similarity[:, norms == 0.0] = 0.0
    return np.clip(similarity, -1.0, 1.0)
