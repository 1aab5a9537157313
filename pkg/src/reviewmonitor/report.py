"""Assemble stage outputs into one versioned monitoring report.

Serialization is deterministic: keys sorted, floats fixed at 6
significant digits, and provenance derived from the corpus itself (no
wall-clock timestamps), so identical inputs give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

SCHEMA_VERSION = "1"


class ConsistencyError(Exception):
    """Stage outputs disagree; message names both values."""


@dataclass
class PipelineConfig:
    language: str = "en"
    consecutive_special_threshold: int = 6
    min_tokens_for_ratio: int = 10
    word_unique_ratio: float = 0.20
    char_unique_ratio: float = 0.10
    sentiment_threshold: int = 1
    granularity: str = "year"
    subset: str = "negative"  # document subset for terms/topics stages
    min_cluster_size: int = 15
    min_samples: Optional[int] = None
    lsa_dim: Optional[int] = 64
    target_dim: int = 5
    ngram_top_k: int = 10
    tfidf_top_k: int = 20
    keyword_top_k: int = 10

    @classmethod
    def load(cls, path: Optional[str | Path]) -> "PipelineConfig":
        if path is None:
            return cls()
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def as_dict(self) -> dict:
        return {name: getattr(self, name)
                for name in self.__dataclass_fields__}

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.as_dict(), sort_keys=True,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def corpus_hash(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()[:16]


def _round_floats(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.6g}")
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


def serialize_report(report: dict) -> str:
    return json.dumps(_round_floats(report), sort_keys=True,
                      ensure_ascii=False, indent=1) + "\n"


def atomic_write(path: str | Path, content: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require_match(name: str, left: Any, right: Any) -> None:
    if left != right:
        raise ConsistencyError(f"{name} mismatch: {left!r} vs {right!r}")


def build_report(filter_stage: dict, sentiment_stage: dict,
                 terms_stage: dict, config: PipelineConfig,
                 topics_stage: Optional[dict] = None,
                 themes: Optional[dict] = None) -> dict:
    """Merge stage outputs, verifying they came from one corpus snapshot."""
    stages = {"filter": filter_stage, "sentiment": sentiment_stage,
              "terms": terms_stage}
    if topics_stage is not None:
        stages["topics"] = topics_stage
    reference = filter_stage["corpus_hash"]
    for name, stage in stages.items():
        _require_match(f"corpus_hash ({name} vs filter)",
                       stage["corpus_hash"], reference)
        _require_match(f"config_hash ({name} vs current config)",
                       stage["config_hash"], config.config_hash)

    stats = filter_stage["stats"]
    analyzed = stats["mid"]
    distribution = sentiment_stage["label_distribution"]
    label_total = sum(distribution.values())
    _require_match("analyzed count vs labeled count", analyzed, label_total)

    report = {
        "schema_version": SCHEMA_VERSION,
        "corpus": {
            "total": stats["total"],
            "spam_removed": stats["spam_removed"],
            "short": stats["short"],
            "mid": stats["mid"],
            "long": stats["long"],
            "analyzed": analyzed,
        },
        "sentiment": {
            "trend": sentiment_stage["trend"],
            "label_distribution": distribution,
            "classifier_id": sentiment_stage["classifier_id"],
        },
        "terms": terms_stage["tables"],
        "provenance": {
            "config": config.as_dict(),
            "config_hash": config.config_hash,
            "corpus_hash": reference,
            "corpus_time_range": filter_stage.get("corpus_time_range"),
            "classifier_id": sentiment_stage["classifier_id"],
            "embedder_id": (topics_stage or {}).get("embedder_id"),
        },
    }
    if topics_stage is not None:
        report["topics"] = topics_stage["model"]
    if themes is not None:
        report["themes"] = themes
    return report
