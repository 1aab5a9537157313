"""Spam detection and length bucketing of raw reviews.

Bucketing counts whitespace-separated words of the raw text, before any
cleaning, so the analysis set is selected on what the reviewer actually
wrote.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ingest import Review


class SpamReason(enum.Enum):
    ASCII_ART = "AsciiArt"
    REPEATED_CHARS = "RepeatedChars"
    REPEATED_WORDS = "RepeatedWords"
    NONE = "None"


class LengthBucket(enum.Enum):
    SHORT = "Short"  # <= 5 words
    MID = "Mid"      # 6..50 words
    LONG = "Long"    # > 50 words


@dataclass(frozen=True)
class SpamVerdict:
    is_spam: bool
    reason: SpamReason
    evidence: str = ""

    def __post_init__(self):
        assert self.is_spam == (self.reason is not SpamReason.NONE)


@dataclass(frozen=True)
class FilterConfig:
    consecutive_special_threshold: int = 6
    min_tokens_for_ratio: int = 10
    word_unique_ratio: float = 0.20
    char_unique_ratio: float = 0.10

    def __post_init__(self):
        if self.consecutive_special_threshold <= 0 or self.min_tokens_for_ratio <= 0:
            raise ValueError("thresholds must be positive")
        for r in (self.word_unique_ratio, self.char_unique_ratio):
            if not 0.0 < r < 1.0:
                raise ValueError("ratios must lie in (0,1)")


def _is_special(ch: str) -> bool:
    return not ch.isalnum() and not ch.isspace()


def _max_special_run(text: str) -> tuple[int, str]:
    best_len, best_run = 0, ""
    run_start = None
    for i, ch in enumerate(text + " "):  # sentinel terminates a trailing run
        if i < len(text) and _is_special(ch):
            if run_start is None:
                run_start = i
        elif run_start is not None:
            if i - run_start > best_len:
                best_len, best_run = i - run_start, text[run_start:i]
            run_start = None
    return best_len, best_run


def detect_spam(text: str, config: FilterConfig = FilterConfig()) -> SpamVerdict:
    """Classify a raw review text as spam or not. Total over all inputs."""
    run_len, run = _max_special_run(text)
    if run_len >= config.consecutive_special_threshold:
        return SpamVerdict(True, SpamReason.ASCII_ART,
                           f"{run_len} consecutive special chars: {run[:20]!r}")

    words = text.lower().split()
    if len(words) >= config.min_tokens_for_ratio:
        ratio = len(set(words)) / len(words)
        if ratio < config.word_unique_ratio:
            return SpamVerdict(True, SpamReason.REPEATED_WORDS,
                               f"unique-word ratio {ratio:.3f}")
        chars = [c for c in text.lower() if not c.isspace()]
        if chars:
            cratio = len(set(chars)) / len(chars)
            if cratio < config.char_unique_ratio:
                return SpamVerdict(True, SpamReason.REPEATED_CHARS,
                                   f"unique-char ratio {cratio:.3f}")

    return SpamVerdict(False, SpamReason.NONE)


def length_bucket(token_count: int) -> LengthBucket:
    if token_count < 0:
        raise ValueError("token_count must be non-negative")
    if token_count <= 5:
        return LengthBucket.SHORT
    if token_count <= 50:
        return LengthBucket.MID
    return LengthBucket.LONG


def word_count(text: str) -> int:
    return len(text.split())


@dataclass
class FilterStats:
    spam_removed: int = 0
    short: int = 0
    mid: int = 0
    long: int = 0

    def as_dict(self) -> dict:
        return {"spam_removed": self.spam_removed, "short": self.short,
                "mid": self.mid, "long": self.long}


@dataclass
class FilterResult:
    kept: list[Review] = field(default_factory=list)
    stats: FilterStats = field(default_factory=FilterStats)


def filter_corpus(reviews: Iterable[Review],
                  config: FilterConfig = FilterConfig()) -> FilterResult:
    """Keep non-spam Mid-bucket reviews; every input lands in exactly one bin."""
    result = FilterResult()
    for review in reviews:
        if detect_spam(review.text, config).is_spam:
            result.stats.spam_removed += 1
            continue
        bucket = length_bucket(word_count(review.text))
        if bucket is LengthBucket.SHORT:
            result.stats.short += 1
        elif bucket is LengthBucket.MID:
            result.stats.mid += 1
            result.kept.append(review)
        else:
            result.stats.long += 1
    return result
