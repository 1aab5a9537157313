import json
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reviewmonitor.ingest import Review

FAMILY_A = ["racist", "slur", "kid", "scream", "word", "called",
            "toxic", "year", "old", "player"]
FAMILY_B = ["crash", "bug", "lag", "broken", "server", "disconnect",
            "error", "freeze", "glitch", "update"]
POSITIVE_WORDS = ["great", "fun", "wonderful", "love", "awesome", "friendly",
                  "creative", "amazing", "enjoy", "fantastic"]
NEUTRAL_FILLER = ["room", "build", "time", "thing", "session", "world",
                  "avatar", "games", "maybe", "overall"]
# short, character-diverse tokens so very long reviews keep a healthy
# unique-character ratio and land in the Long bucket instead of spam
LONG_FILLER = ["fun", "vr", "ok", "yes", "big", "map", "kid", "lag", "bug",
               "odd", "new", "old", "top", "few", "mix", "q7", "j9", "x2",
               "z8", "w3", "v5", "k4", "u6", "p1", "y0"]


def make_review(review_id, text, created_at=1600000000, recommended=True,
                language="en"):
    return Review(review_id=str(review_id), created_at=created_at,
                  text=text, recommended=recommended, language=language,
                  source_app_id="app-1")


def _sentence(rng, vocabulary, length):
    return " ".join(rng.choice(vocabulary) for _ in range(length))


def synthetic_reviews(seed=7):
    """300 reviews: two negative vocabulary clusters, positive/neutral bulk,
    planted spam, and short/long padding. Deterministic for a seed."""
    rng = random.Random(seed)
    reviews = []
    uid = 0

    def add(text, year):
        nonlocal uid
        uid += 1
        timestamp = int(
            (year - 1970) * 365.25 * 86400 + rng.randrange(0, 300 * 86400))
        reviews.append({"id": f"r{uid:04d}", "text": text,
                        "created": timestamp, "voted_up": rng.random() < 0.5})

    for _ in range(30):  # harassment-flavoured negative cluster
        words = [rng.choice(FAMILY_A) for _ in range(rng.randrange(10, 16))]
        add(" ".join(words), rng.choice(range(2019, 2024)))
    for _ in range(30):  # technical-failure negative cluster
        words = [rng.choice(FAMILY_B) for _ in range(rng.randrange(10, 16))]
        add(" ".join(words), rng.choice(range(2019, 2024)))
    for _ in range(150):  # positive mid-length bulk
        words = ([rng.choice(POSITIVE_WORDS) for _ in range(4)]
                 + [rng.choice(NEUTRAL_FILLER) for _ in range(rng.randrange(6, 20))])
        rng.shuffle(words)
        add(" ".join(words), rng.choice(range(2016, 2024)))
    for _ in range(30):  # mixed / neutral mid-length
        words = ([rng.choice(POSITIVE_WORDS), "bad"]
                 + [rng.choice(NEUTRAL_FILLER) for _ in range(rng.randrange(8, 18))])
        rng.shuffle(words)
        add(" ".join(words), rng.choice(range(2016, 2024)))
    for _ in range(10):  # planted spam
        if rng.random() < 0.5:
            add("█" * rng.randrange(8, 30) + " nice art", 2020)
        else:
            add(" ".join(["spam"] * rng.randrange(12, 30)), 2020)
    for _ in range(25):  # too short
        add(_sentence(rng, POSITIVE_WORDS + NEUTRAL_FILLER,
                      rng.randrange(1, 6)), rng.choice(range(2016, 2024)))
    for _ in range(25):  # too long
        add(_sentence(rng, LONG_FILLER,
                      rng.randrange(55, 90)), rng.choice(range(2016, 2024)))
    return reviews


def write_fixture_pages(directory: Path, reviews, page_size=50):
    """Store reviews as numbered page files in the storefront JSON shape."""
    directory.mkdir(parents=True, exist_ok=True)
    pages = [reviews[i:i + page_size]
             for i in range(0, len(reviews), page_size)] or [[]]
    for index, page in enumerate(pages):
        last = index == len(pages) - 1
        payload = {
            "reviews": [
                {"recommendationid": r["id"], "review": r["text"],
                 "timestamp_created": r["created"],
                 "voted_up": r["voted_up"], "language": "en"}
                for r in page
            ],
            "cursor": str(index) if last else str(index + 1),
        }
        (directory / f"page_{index:03d}.json").write_text(
            json.dumps(payload), encoding="utf-8")
    return len(pages)


@pytest.fixture
def fixture_pages(tmp_path):
    pages_dir = tmp_path / "pages"
    write_fixture_pages(pages_dir, synthetic_reviews())
    return pages_dir
