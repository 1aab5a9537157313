"""Paginated review ingestion with an append-only line-delimited corpus.

Transports are pluggable: live HTTP against a storefront review endpoint,
or a directory of numbered fixture pages in the same JSON shape. The sync
loop checkpoints its cursor after every page so an interrupted pull
resumes where it stopped.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol

import requests


class TransportError(Exception):
    """Retryable transport failure; carries how many attempts were made."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class DecodeError(Exception):
    """Unrecoverable payload problem; names the offending field."""

    def __init__(self, field_name: str, detail: str = ""):
        super().__init__(f"cannot decode field {field_name!r}: {detail}")
        self.field_name = field_name


class CorpusError(Exception):
    """Malformed corpus record; carries the 1-based line number."""

    def __init__(self, line_number: int, detail: str):
        super().__init__(f"corpus line {line_number}: {detail}")
        self.line_number = line_number


@dataclass(frozen=True)
class Review:
    review_id: str
    created_at: int  # UTC seconds
    text: str
    recommended: bool
    language: str = "en"
    source_app_id: str = ""

    def __post_init__(self):
        if not self.review_id:
            raise ValueError("review_id must be non-empty")
        if self.created_at <= 0:
            raise ValueError("created_at must be > 0")

    def as_dict(self) -> dict:
        return {
            "review_id": self.review_id,
            "created_at": self.created_at,
            "text": self.text,
            "recommended": self.recommended,
            "language": self.language,
            "source_app_id": self.source_app_id,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Review":
        return cls(
            review_id=str(record["review_id"]),
            created_at=int(record["created_at"]),
            text=str(record["text"]),
            recommended=bool(record["recommended"]),
            language=str(record.get("language", "en")),
            source_app_id=str(record.get("source_app_id", "")),
        )


@dataclass(frozen=True)
class ReviewPage:
    reviews: tuple[Review, ...]
    next_cursor: str
    exhausted: bool


# Default field names follow the public storefront review endpoint.
DEFAULT_FIELD_MAP = {
    "reviews": "reviews",
    "id": "recommendationid",
    "text": "review",
    "created": "timestamp_created",
    "voted_up": "voted_up",
    "language": "language",
    "cursor": "cursor",
}

START_CURSOR = "*"


class Transport(Protocol):
    def get_page(self, app_id: str, cursor: str, page_size: int,
                 language: str) -> dict: ...


class HttpTransport:
    """GET pages from a base URL template, politely rate limited."""

    def __init__(self, base_url: str, min_delay: float = 1.0,
                 max_attempts: int = 3, timeout: float = 30.0):
        self.base_url = base_url
        self.min_delay = min_delay
        self.max_attempts = max_attempts
        self.timeout = timeout
        self._last_request = 0.0
        self._session = requests.Session()

    def get_page(self, app_id, cursor, page_size, language):
        wait = self.min_delay - (time.monotonic() - self._last_request)
        if wait > 0:
            time.sleep(wait)
        params = {
            "app_id": app_id,
            "cursor": cursor,
            "page_size": page_size,
            "language": language,
            "order": "recent",
        }
        url = self.base_url.format(app_id=app_id)
        last_error = None
        for attempt in range(1, self.max_attempts + 1):
            self._last_request = time.monotonic()
            try:
                response = self._session.get(url, params=params,
                                             timeout=self.timeout)
                response.raise_for_status()
                return response.json()
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
                if attempt < self.max_attempts:
                    time.sleep(self.min_delay)
        raise TransportError(str(last_error), attempts=self.max_attempts)


class FixtureTransport:
    """Reads numbered page files (page_000.json, ...) from a directory.

    The start cursor maps to page 0; each page's cursor field names the
    next page index. A missing page file means the feed is exhausted.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def get_page(self, app_id, cursor, page_size, language):
        index = 0 if cursor == START_CURSOR else int(cursor)
        path = self.directory / f"page_{index:03d}.json"
        if not path.exists():
            return {"reviews": [], "cursor": cursor}
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DecodeError("(document)", str(exc))


def parse_page(payload: dict, app_id: str, request_cursor: str,
               field_map: dict | None = None) -> ReviewPage:
    fmap = field_map or DEFAULT_FIELD_MAP
    if fmap["reviews"] not in payload:
        raise DecodeError(fmap["reviews"], "missing review array")
    raw_reviews = payload[fmap["reviews"]]
    if not isinstance(raw_reviews, list):
        raise DecodeError(fmap["reviews"], "not an array")
    reviews = []
    for raw in raw_reviews:
        try:
            reviews.append(Review(
                review_id=str(raw[fmap["id"]]),
                created_at=int(raw[fmap["created"]]),
                text=str(raw[fmap["text"]]),
                recommended=bool(raw[fmap["voted_up"]]),
                language=str(raw.get(fmap["language"], "en")),
                source_app_id=app_id,
            ))
        except KeyError as exc:
            raise DecodeError(str(exc.args[0]), "missing in review record")
        except (TypeError, ValueError) as exc:
            raise DecodeError(fmap["created"], str(exc))
    next_cursor = str(payload.get(fmap["cursor"], request_cursor))
    exhausted = not reviews or next_cursor == request_cursor
    return ReviewPage(tuple(reviews), next_cursor, exhausted)


def fetch_page(transport: Transport, app_id: str, cursor: str = START_CURSOR,
               page_size: int = 100, language: str = "en",
               field_map: dict | None = None) -> ReviewPage:
    if not app_id:
        raise ValueError("app_id must be non-empty")
    if not 1 <= page_size <= 100:
        raise ValueError("page_size must be in 1..100")
    payload = transport.get_page(app_id, cursor, page_size, language)
    return parse_page(payload, app_id, cursor, field_map)


class CorpusStore:
    """Append-only JSONL review store with an in-memory id index."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.id_index: set[str] = set()
        self.count = 0
        if self.path.exists():
            with self.path.open(encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    self.id_index.add(str(record["review_id"]))
                    self.count += 1

    @property
    def cursor_path(self) -> Path:
        return self.path.with_name(self.path.name + ".cursor")

    def append(self, review: Review) -> bool:
        """Persist a review unless its id was already seen."""
        if review.review_id in self.id_index:
            return False
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(review.as_dict(), ensure_ascii=False,
                                    sort_keys=True) + "\n")
        self.id_index.add(review.review_id)
        self.count += 1
        return True

    def save_cursor(self, cursor: str) -> None:
        self.cursor_path.write_text(json.dumps({"cursor": cursor}),
                                    encoding="utf-8")

    def load_cursor(self) -> Optional[str]:
        if self.cursor_path.exists():
            return json.loads(self.cursor_path.read_text(encoding="utf-8"))["cursor"]
        return None

    def clear_cursor(self) -> None:
        if self.cursor_path.exists():
            self.cursor_path.unlink()


@dataclass
class SyncStats:
    fetched: int = 0
    deduped: int = 0
    pages: int = 0


def sync_corpus(transport: Transport, app_id: str, store: CorpusStore,
                page_size: int = 100, language: str = "en",
                field_map: dict | None = None) -> SyncStats:
    """Pull pages until exhausted, appending only unseen review ids.

    The cursor checkpoint is written after every page and cleared on
    completion, so a rerun starts fresh while an interrupted run resumes.
    """
    stats = SyncStats()
    cursor = store.load_cursor() or START_CURSOR
    while True:
        page = fetch_page(transport, app_id, cursor, page_size, language,
                          field_map)
        stats.pages += 1
        for review in page.reviews:
            stats.fetched += 1
            if not store.append(review):
                stats.deduped += 1
        store.save_cursor(page.next_cursor)
        if page.exhausted:
            break
        cursor = page.next_cursor
    store.clear_cursor()
    return stats


@dataclass
class LoadResult:
    reviews: list[Review] = field(default_factory=list)
    skipped: int = 0


def load_corpus(path: str | Path, language: Optional[str] = None,
                date_range: Optional[tuple[int, int]] = None,
                strict: bool = True) -> LoadResult:
    """Load reviews sorted ascending by (created_at, review_id).

    The date range is inclusive on both ends. In strict mode a malformed
    line raises CorpusError with its line number; lenient mode skips it
    and counts the skip.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    result = LoadResult()
    with path.open(encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                review = Review.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                if strict:
                    raise CorpusError(number, str(exc))
                result.skipped += 1
                continue
            if language is not None and review.language != language:
                continue
            if date_range is not None and not (
                    date_range[0] <= review.created_at <= date_range[1]):
                continue
            result.reviews.append(review)
    result.reviews.sort(key=lambda r: (r.created_at, r.review_id))
    return result
