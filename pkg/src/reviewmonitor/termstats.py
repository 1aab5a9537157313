"""N-gram frequency tables and corpus-level TF-IDF rankings over stems.

idf uses the smoothed variant ln((1+N)/(1+df)) + 1 so scores stay
positive; corpus scores aggregate per-document tf*idf by summation
(max-over-documents available behind a flag).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class NgramTable:
    n: int
    entries: tuple[tuple[str, int], ...]  # (gram, count), count desc

    def as_dict(self) -> dict:
        return {"n": self.n,
                "entries": [{"gram": g, "count": c} for g, c in self.entries]}


@dataclass(frozen=True)
class TfidfTable:
    entries: tuple[tuple[str, float], ...]  # (term, score), score desc

    def as_dict(self) -> dict:
        return {"entries": [{"term": t, "score": s} for t, s in self.entries]}


def iter_ngrams(stems: Sequence[str], n: int) -> Iterable[str]:
    for i in range(len(stems) - n + 1):
        yield " ".join(stems[i:i + n])


def ngram_counts(docs: Iterable[Sequence[str]], n: int,
                 top_k: int = 10) -> NgramTable:
    """Top-k n-grams counted within documents only (no cross-doc spans)."""
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    counts: Counter[str] = Counter()
    for stems in docs:
        counts.update(iter_ngrams(stems, n))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return NgramTable(n, tuple(ranked[:top_k]))


def idf(doc_count: int, doc_frequency: int) -> float:
    return math.log((1 + doc_count) / (1 + doc_frequency)) + 1.0


def tfidf_scores(docs: Sequence[Sequence[str]], top_k: int = 20,
                 aggregate: str = "sum") -> TfidfTable:
    """Corpus-level TF-IDF ranking: aggregate tf(t,d)*idf(t) over documents."""
    if aggregate not in ("sum", "max"):
        raise ValueError("aggregate must be 'sum' or 'max'")
    non_empty = [d for d in docs if d]
    if not non_empty:
        raise ValueError("need at least one non-empty document")
    n_docs = len(docs)
    doc_freq: Counter[str] = Counter()
    for stems in docs:
        doc_freq.update(set(stems))

    scores: dict[str, float] = {}
    for stems in docs:
        tf = Counter(stems)
        for term, count in tf.items():
            value = count * idf(n_docs, doc_freq[term])
            if aggregate == "sum":
                scores[term] = scores.get(term, 0.0) + value
            else:
                scores[term] = max(scores.get(term, 0.0), value)

    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return TfidfTable(tuple(ranked[:top_k]))
