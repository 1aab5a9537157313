from .embedding import EmbeddingMatrix, embed
from .reduction import ReducedMatrix, ReductionError, reduce_dims
from .density import ClusterAssignment, cluster_hdbscan
from .ctfidf import ctfidf_keywords, topic_similarity
from .hierarchy import topic_hierarchy
from .themes import ThemeSpec, ThemeReport, ThemeValidationError, merge_topics
from .pipeline import TopicModel, build_topic_model

__all__ = [
    "EmbeddingMatrix", "embed",
    "ReducedMatrix", "ReductionError", "reduce_dims",
    "ClusterAssignment", "cluster_hdbscan",
    "ctfidf_keywords", "topic_similarity",
    "topic_hierarchy",
    "ThemeSpec", "ThemeReport", "ThemeValidationError", "merge_topics",
    "TopicModel", "build_topic_model",
]
