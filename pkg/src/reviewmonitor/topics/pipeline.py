"""Assemble the full topic model from cleaned documents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..textprep import CleanedDocument
from .ctfidf import ctfidf_keywords, topic_similarity
from .density import ClusterAssignment, cluster_hdbscan
from .embedding import embed
from .hierarchy import MergeStep, topic_hierarchy
from .reduction import reduce_dims


@dataclass
class TopicModel:
    assignment: ClusterAssignment
    topic_keywords: list[list[tuple[str, float]]]
    topic_sizes: list[int]
    ctfidf_vectors: list[dict[str, float]]
    similarity: np.ndarray | None
    hierarchy: list[MergeStep]
    embedder_id: str

    @property
    def n_topics(self) -> int:
        return self.assignment.n_clusters

    def as_dict(self) -> dict:
        return {
            "labels": self.assignment.labels.tolist(),
            "n_topics": self.n_topics,
            "probabilities": self.assignment.probabilities.tolist(),
            "topic_sizes": self.topic_sizes,
            "topic_keywords": [
                [{"term": t, "weight": w} for t, w in keywords]
                for keywords in self.topic_keywords
            ],
            "ctfidf_vectors": self.ctfidf_vectors,
            "noise_count": int(np.sum(self.assignment.labels == -1)),
            "similarity": (self.similarity.tolist()
                           if self.similarity is not None else None),
            "hierarchy": [step.as_dict() for step in self.hierarchy],
            "embedder_id": self.embedder_id,
        }


def build_topic_model(docs: Sequence[CleanedDocument],
                      min_cluster_size: int = 15,
                      min_samples: int | None = None,
                      lsa_dim: int | None = 64,
                      target_dim: int = 5,
                      top_k: int = 10,
                      embeddings: np.ndarray | None = None,
                      embedder_id: str | None = None) -> TopicModel:
    """embed -> reduce -> cluster -> keywords -> similarity + hierarchy.

    Pass precomputed `embeddings` (e.g. from an external adapter) to skip
    the builtin embedder. Too few documents for any cluster yields an
    all-noise model with zero topics.
    """
    if len(docs) < 2:
        assignment = ClusterAssignment(
            labels=np.full(len(docs), -1, dtype=int), n_clusters=0,
            probabilities=np.zeros(len(docs)))
        return TopicModel(assignment=assignment, topic_keywords=[],
                          topic_sizes=[], ctfidf_vectors=[], similarity=None,
                          hierarchy=[], embedder_id=embedder_id or "none")

    stems = [list(doc.stems) for doc in docs]
    if embeddings is None:
        matrix = embed(stems, lsa_dim=lsa_dim)
        embeddings, embedder_id = matrix.rows, matrix.embedder_id
    elif embedder_id is None:
        embedder_id = "external"

    if target_dim < embeddings.shape[1] and len(docs) > target_dim:
        reduced = reduce_dims(embeddings, target_dim).rows
    else:
        reduced = embeddings

    assignment = cluster_hdbscan(reduced, min_cluster_size, min_samples)
    k = assignment.n_clusters

    class_docs = [[] for _ in range(k)]
    for doc, label in zip(docs, assignment.labels):
        if label >= 0:
            class_docs[label].extend(doc.stems)
    topic_sizes = [int(np.sum(assignment.labels == c)) for c in range(k)]

    if k >= 1:
        topic_keywords, vectors = ctfidf_keywords(class_docs, top_k)
    else:
        topic_keywords, vectors = [], []
    similarity = topic_similarity(vectors) if k >= 2 else None
    hierarchy = topic_hierarchy(vectors) if k >= 2 else []

    return TopicModel(assignment=assignment, topic_keywords=topic_keywords,
                      topic_sizes=topic_sizes, ctfidf_vectors=vectors,
                      similarity=similarity, hierarchy=hierarchy,
                      embedder_id=embedder_id)
