"""Three-class sentiment: lexicon baseline, external adapter, evaluation,
and the longitudinal mean-sentiment series.

Labels map to +1 / 0 / -1. The builtin classifier scores raw review text
against a bundled signed lexicon with a two-token negation window; the
pretrained models the pipeline was designed around attach through the
external adapter instead.
"""

from __future__ import annotations

import enum
import json
import subprocess
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from typing import Iterable, Sequence

import requests

from .textprep import tokenize


class SentimentLabel(enum.IntEnum):
    POSITIVE = 1
    NEUTRAL = 0
    NEGATIVE = -1

    @classmethod
    def from_name(cls, name: str) -> "SentimentLabel":
        try:
            return _NAME_TO_LABEL[name.strip().lower()]
        except KeyError:
            raise ProtocolError(f"unknown sentiment label {name!r}")

    @property
    def label_name(self) -> str:
        return self.name.lower()


_NAME_TO_LABEL = {
    "positive": SentimentLabel.POSITIVE,
    "neutral": SentimentLabel.NEUTRAL,
    "negative": SentimentLabel.NEGATIVE,
}

# Fixed class order for confusion matrices and reports.
LABEL_ORDER = (SentimentLabel.POSITIVE, SentimentLabel.NEUTRAL,
               SentimentLabel.NEGATIVE)

NEGATORS = frozenset({"not", "never", "no"})
NEGATION_WINDOW = 2


class ProtocolError(Exception):
    """External classifier broke the adapter contract."""


class PartialBatchError(Exception):
    """External classifier returned a different number of records."""


class InputError(Exception):
    """Evaluation inputs are missing or duplicated; lists the ids."""

    def __init__(self, message: str, ids: Sequence[str]):
        super().__init__(f"{message}: {sorted(ids)}")
        self.ids = list(ids)


@dataclass(frozen=True)
class SentimentRecord:
    review_id: str
    label: SentimentLabel
    confidence: float
    classifier_id: str

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0,1]")

    def as_dict(self) -> dict:
        return {
            "review_id": self.review_id,
            "label": self.label.label_name,
            "confidence": self.confidence,
            "classifier_id": self.classifier_id,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "SentimentRecord":
        return cls(
            review_id=str(record["review_id"]),
            label=SentimentLabel.from_name(record["label"]),
            confidence=float(record["confidence"]),
            classifier_id=str(record["classifier_id"]),
        )


def load_lexicon() -> dict[str, int]:
    text = resources.files("reviewmonitor.assets").joinpath(
        "lexicon.tsv").read_text(encoding="utf-8")
    lexicon: dict[str, int] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        word, score = line.split("\t")
        lexicon[word] = int(score)
    return lexicon


class LexiconClassifier:
    """Signed-lexicon scorer with negation flipping.

    A polarity token preceded within NEGATION_WINDOW tokens by a negator
    contributes its negated score. Score >= +threshold is positive,
    <= -threshold negative, otherwise neutral.
    """

    classifier_id = "builtin-lexicon"

    def __init__(self, threshold: int = 1,
                 lexicon: dict[str, int] | None = None):
        if threshold < 1:
            raise ValueError("threshold must be >= 1")
        self.threshold = threshold
        self.lexicon = lexicon if lexicon is not None else load_lexicon()

    def score(self, text: str) -> int:
        tokens = tokenize(text)
        total = 0
        for i, token in enumerate(tokens):
            polarity = self.lexicon.get(token)
            if polarity is None:
                continue
            window = tokens[max(0, i - NEGATION_WINDOW):i]
            if any(t in NEGATORS for t in window):
                polarity = -polarity
            total += polarity
        return total

    def classify(self, review_id: str, text: str) -> SentimentRecord:
        score = self.score(text)
        if score >= self.threshold:
            label = SentimentLabel.POSITIVE
        elif score <= -self.threshold:
            label = SentimentLabel.NEGATIVE
        else:
            label = SentimentLabel.NEUTRAL
        confidence = min(1.0, abs(score) / 5.0)
        return SentimentRecord(review_id, label, confidence,
                               self.classifier_id)


def _parse_adapter_lines(lines: Iterable[str], expected_ids: list[str],
                         classifier_id: str) -> list[SentimentRecord]:
    by_id: dict[str, SentimentRecord] = {}
    for line in lines:
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            review_id = str(record["id"])
            label = SentimentLabel.from_name(str(record["label"]))
            confidence = float(record.get("confidence", 1.0))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"bad adapter response line {line!r}: {exc}")
        by_id[review_id] = SentimentRecord(review_id, label,
                                           max(0.0, min(1.0, confidence)),
                                           classifier_id)
    missing = [i for i in expected_ids if i not in by_id]
    if missing or len(by_id) != len(expected_ids):
        raise PartialBatchError(
            f"expected {len(expected_ids)} records, got {len(by_id)}"
            f" (missing ids: {missing[:5]})")
    return [by_id[i] for i in expected_ids]


class SubprocessClassifier:
    """Line-delimited JSON adapter over a child process's stdio."""

    def __init__(self, command: list[str], timeout: float = 30.0):
        self.command = command
        self.timeout = timeout
        self.classifier_id = "external:" + " ".join(command)

    def classify_batch(self, items: list[tuple[str, str]]) -> list[SentimentRecord]:
        request = "".join(json.dumps({"id": i, "text": t}) + "\n"
                          for i, t in items)
        try:
            proc = subprocess.run(self.command, input=request,
                                  capture_output=True, text=True,
                                  timeout=self.timeout, check=True)
        except (subprocess.TimeoutExpired, subprocess.CalledProcessError) as exc:
            raise ProtocolError(f"adapter process failed: {exc}")
        return _parse_adapter_lines(proc.stdout.splitlines(),
                                    [i for i, _ in items],
                                    self.classifier_id)


class HttpClassifier:
    """Line-delimited JSON adapter over a single HTTP POST per batch."""

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.timeout = timeout
        self.classifier_id = "external:" + endpoint

    def classify_batch(self, items: list[tuple[str, str]]) -> list[SentimentRecord]:
        body = "".join(json.dumps({"id": i, "text": t}) + "\n"
                       for i, t in items)
        try:
            response = requests.post(self.endpoint, data=body.encode("utf-8"),
                                     timeout=self.timeout)
            response.raise_for_status()
        except requests.RequestException as exc:
            raise ProtocolError(f"adapter endpoint failed: {exc}")
        return _parse_adapter_lines(response.text.splitlines(),
                                    [i for i, _ in items],
                                    self.classifier_id)


def classify_external(items: list[tuple[str, str]],
                      adapter) -> list[SentimentRecord]:
    """One record per (id, text) input, order preserved."""
    return adapter.classify_batch(items)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvaluationReport:
    confusion: tuple[tuple[int, ...], ...]  # rows = true, cols = predicted
    accuracy: float
    per_class: dict[SentimentLabel, ClassMetrics]

    def as_dict(self) -> dict:
        return {
            "confusion": [list(row) for row in self.confusion],
            "accuracy": self.accuracy,
            "per_class": {
                label.label_name: {"precision": m.precision,
                                   "recall": m.recall, "f1": m.f1}
                for label, m in self.per_class.items()
            },
        }


def metrics_from_confusion(confusion: Sequence[Sequence[int]]) -> EvaluationReport:
    """Accuracy and per-class P/R/F1; zero denominators yield 0.0."""
    total = sum(sum(row) for row in confusion)
    trace = sum(confusion[i][i] for i in range(len(confusion)))
    accuracy = trace / total if total else 0.0
    per_class: dict[SentimentLabel, ClassMetrics] = {}
    for idx, label in enumerate(LABEL_ORDER):
        tp = confusion[idx][idx]
        fp = sum(confusion[r][idx] for r in range(3)) - tp
        fn = sum(confusion[idx]) - tp
        precision = tp / (tp + fp) if (tp + fp) else 0.0
        recall = tp / (tp + fn) if (tp + fn) else 0.0
        f1 = (2 * precision * recall / (precision + recall)
              if (precision + recall) else 0.0)
        per_class[label] = ClassMetrics(precision, recall, f1)
    return EvaluationReport(tuple(tuple(row) for row in confusion),
                            accuracy, per_class)


def evaluate(predicted: Sequence[SentimentRecord],
             gold: Sequence[dict]) -> EvaluationReport:
    """Score predictions against gold {review_id, label} records."""
    pred_by_id: dict[str, SentimentRecord] = {}
    duplicates = []
    for record in predicted:
        if record.review_id in pred_by_id:
            duplicates.append(record.review_id)
        pred_by_id[record.review_id] = record
    if duplicates:
        raise InputError("duplicate predictions", duplicates)
    gold_ids = [str(g["review_id"]) for g in gold]
    missing = [i for i in gold_ids if i not in pred_by_id]
    if missing:
        raise InputError("missing predictions", missing)

    index = {label: i for i, label in enumerate(LABEL_ORDER)}
    confusion = [[0, 0, 0] for _ in range(3)]
    for g in gold:
        true = SentimentLabel.from_name(str(g["label"]))
        pred = pred_by_id[str(g["review_id"])].label
        confusion[index[true]][index[pred]] += 1
    return metrics_from_confusion(confusion)


def load_gold_labels(path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                records.append(json.loads(line))
    return records


@dataclass(frozen=True)
class TrendBucket:
    period: str
    mean_sentiment: float
    review_count: int
    normalized_count: float

    def as_dict(self) -> dict:
        return {"period": self.period, "mean_sentiment": self.mean_sentiment,
                "review_count": self.review_count,
                "normalized_count": self.normalized_count}


def _period_key(timestamp: int, granularity: str) -> str:
    moment = datetime.fromtimestamp(timestamp, tz=timezone.utc)
    if granularity == "year":
        return f"{moment.year:04d}"
    if granularity == "month":
        return f"{moment.year:04d}-{moment.month:02d}"
    raise ValueError(f"unknown granularity {granularity!r}")


def sentiment_series(items: Iterable[tuple[SentimentLabel, int]],
                     granularity: str = "year") -> list[TrendBucket]:
    """Mean mapped sentiment per period; counts normalized to series max.

    Periods with no reviews are simply absent; the series is sorted by
    period label (zero-padded, so lexicographic equals chronological).
    """
    if granularity not in ("year", "month"):
        raise ValueError(f"unknown granularity {granularity!r}")
    sums: dict[str, int] = defaultdict(int)
    counts: dict[str, int] = defaultdict(int)
    for label, timestamp in items:
        key = _period_key(timestamp, granularity)
        sums[key] += int(label)
        counts[key] += 1
    if not counts:
        return []
    max_count = max(counts.values())
    return [
        TrendBucket(period=key,
                    mean_sentiment=sums[key] / counts[key],
                    review_count=counts[key],
                    normalized_count=counts[key] / max_count)
        for key in sorted(counts)
    ]
