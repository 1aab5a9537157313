"""Deterministic PCA reduction of embedding rows.

The stochastic manifold reducer the pipeline was modelled on plugs in
through the external adapter slot; the builtin path is plain PCA so runs
are exactly repeatable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ReductionError(Exception):
    pass


@dataclass
class ReducedMatrix:
    rows: np.ndarray
    explained_variance: np.ndarray  # fraction per kept component, descending

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])


def reduce_dims(embeddings: np.ndarray, target_dim: int = 5) -> ReducedMatrix:
    """Mean-center and project onto the top principal components.

    Eigenvectors get a deterministic sign: the largest-magnitude
    coordinate of each component is positive.
    """
    n_rows, dim = embeddings.shape
    if target_dim > dim:
        raise ValueError("target_dim exceeds input dimension")
    if n_rows < target_dim + 1:
        raise ValueError("need at least target_dim+1 rows")

    centered = embeddings - embeddings.mean(axis=0)
    covariance = centered.T @ centered / max(1, n_rows - 1)
    total_variance = float(np.trace(covariance))
    if total_variance <= 1e-15:
        raise ReductionError(
            "all points identical; rerun with reduction skipped")

    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1][:target_dim]
    components = eigenvectors[:, order]
    for k in range(components.shape[1]):
        pivot = np.argmax(np.abs(components[:, k]))
        if components[pivot, k] < 0:
            components[:, k] *= -1.0

    explained = np.clip(eigenvalues[order], 0.0, None) / total_variance
    return ReducedMatrix(rows=centered @ components,
                         explained_variance=explained)
