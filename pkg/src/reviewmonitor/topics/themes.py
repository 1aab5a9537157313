"""Human theme curation: validate merge decisions and aggregate topics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


class ThemeValidationError(Exception):
    pass


@dataclass(frozen=True)
class Theme:
    name: str
    member_topics: tuple[int, ...]


@dataclass
class ThemeSpec:
    themes: list[Theme] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "ThemeSpec":
        if not isinstance(data, dict) or not isinstance(data.get("themes"), list):
            raise ThemeValidationError("theme spec must be {\"themes\": [...]}")
        themes = []
        for raw in data["themes"]:
            name = raw.get("name")
            members = raw.get("member_topics")
            if not name or not isinstance(name, str):
                raise ThemeValidationError("every theme needs a non-empty name")
            if not isinstance(members, list) or not all(
                    isinstance(m, int) for m in members):
                raise ThemeValidationError(
                    f"theme {name!r}: member_topics must be a list of ints")
            themes.append(Theme(name, tuple(sorted(set(members)))))
        return cls(themes)

    def as_dict(self) -> dict:
        return {"themes": [{"name": t.name,
                            "member_topics": list(t.member_topics)}
                           for t in self.themes]}

    def validate(self, n_topics: int) -> None:
        seen: dict[int, str] = {}
        for theme in self.themes:
            for topic in theme.member_topics:
                if topic in seen:
                    raise ThemeValidationError(
                        f"topic {topic} appears in both {seen[topic]!r} "
                        f"and {theme.name!r}")
                if not 0 <= topic < n_topics:
                    raise ThemeValidationError(
                        f"unknown topic id {topic} (have {n_topics} topics)")
                seen[topic] = theme.name


@dataclass
class ThemeReport:
    themes: list[dict]
    unassigned: list[int]
    noise_count: int

    def as_dict(self) -> dict:
        return {"themes": self.themes, "unassigned": self.unassigned,
                "noise_count": self.noise_count}


def merge_topics(topic_sizes: Sequence[int],
                 ctfidf_vectors: Sequence[dict[str, float]],
                 spec: ThemeSpec, noise_count: int = 0,
                 top_k: int = 10) -> ThemeReport:
    """Apply merge decisions: summed sizes and re-ranked keyword unions."""
    spec.validate(len(topic_sizes))
    assigned: set[int] = set()
    themes = []
    for theme in spec.themes:
        combined: dict[str, float] = {}
        for topic in theme.member_topics:
            for term, weight in ctfidf_vectors[topic].items():
                combined[term] = combined.get(term, 0.0) + weight
        ranked = sorted(combined.items(), key=lambda kv: (-kv[1], kv[0]))
        themes.append({
            "name": theme.name,
            "member_topics": list(theme.member_topics),
            "review_count": sum(topic_sizes[t] for t in theme.member_topics),
            "keywords": [{"term": t, "weight": w} for t, w in ranked[:top_k]],
        })
        assigned.update(theme.member_topics)
    unassigned = [t for t in range(len(topic_sizes)) if t not in assigned]
    return ThemeReport(themes=themes, unassigned=unassigned,
                       noise_count=noise_count)
