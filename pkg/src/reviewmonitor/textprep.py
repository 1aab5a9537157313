"""Tokenize, strip stopwords, and stem reviews into a standard form.

Raw text is NFC-normalized and lowercased before tokenizing; pure-digit
tokens are kept. The stoplist is a frozen snapshot bundled with the
package so runs are reproducible without downloads.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources

from . import porter
from .filtering import LengthBucket, length_bucket, word_count
from .ingest import Review

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def load_stopwords() -> frozenset[str]:
    text = resources.files("reviewmonitor.assets").joinpath(
        "stopwords.txt").read_text(encoding="utf-8")
    return frozenset(word for word in text.split() if word)


STOPWORDS = load_stopwords()


@dataclass(frozen=True)
class CleanedDocument:
    review_id: str
    tokens: tuple[str, ...]
    stems: tuple[str, ...]
    bucket: LengthBucket
    created_at: int

    def __post_init__(self):
        assert len(self.tokens) == len(self.stems)

    @property
    def empty(self) -> bool:
        return not self.tokens

    def as_dict(self) -> dict:
        return {
            "review_id": self.review_id,
            "tokens": list(self.tokens),
            "stems": list(self.stems),
            "bucket": self.bucket.value,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "CleanedDocument":
        return cls(
            review_id=str(record["review_id"]),
            tokens=tuple(record["tokens"]),
            stems=tuple(record["stems"]),
            bucket=LengthBucket(record["bucket"]),
            created_at=int(record["created_at"]),
        )

    def to_json_line(self) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False, sort_keys=True)


def tokenize(text: str) -> list[str]:
    """Lowercase word/digit tokens split on non-alphanumeric boundaries."""
    normalized = unicodedata.normalize("NFC", text).lower()
    return _TOKEN_RE.findall(normalized)


def remove_stopwords(tokens: list[str],
                     stoplist: frozenset[str] = STOPWORDS) -> list[str]:
    return [token for token in tokens if token not in stoplist]


def stem(token: str) -> str:
    return porter.stem(token)


def preprocess(review: Review,
               stoplist: frozenset[str] = STOPWORDS) -> CleanedDocument:
    """Full cleaning chain for one review; deterministic per input text."""
    tokens = remove_stopwords(tokenize(review.text), stoplist)
    return CleanedDocument(
        review_id=review.review_id,
        tokens=tuple(tokens),
        stems=tuple(porter.stem(token) for token in tokens),
        bucket=length_bucket(word_count(review.text)),
        created_at=review.created_at,
    )
