"""Agglomerative topic hierarchy: average linkage on cosine distance.

Merge steps use the usual convention of new node ids K, K+1, ... with
ties broken on the smallest involved node id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ctfidf import topic_similarity


@dataclass(frozen=True)
class MergeStep:
    left: int
    right: int
    distance: float

    def as_dict(self) -> dict:
        return {"left": self.left, "right": self.right,
                "distance": self.distance}


def topic_hierarchy(vectors: Sequence[dict[str, float]]) -> list[MergeStep]:
    k = len(vectors)
    if k < 2:
        raise ValueError("need at least 2 topics")
    distance = 1.0 - topic_similarity(vectors)
    np.fill_diagonal(distance, 0.0)

    members: dict[int, list[int]] = {i: [i] for i in range(k)}
    steps: list[MergeStep] = []
    next_id = k
    while len(members) > 1:
        best = None
        active = sorted(members)
        for i_pos, a in enumerate(active):
            for b in active[i_pos + 1:]:
                pair_dist = float(np.mean(
                    [distance[p, q] for p in members[a] for q in members[b]]))
                if best is None or pair_dist < best[0]:
                    best = (pair_dist, a, b)
        pair_dist, a, b = best
        steps.append(MergeStep(a, b, pair_dist))
        members[next_id] = members.pop(a) + members.pop(b)
        next_id += 1
    return steps
