"""Article data model, line-delimited corpus ingestion, and sampling utilities."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Iterator, Optional, Sequence


class MediaType(str, Enum):
    MAINSTREAM = "mainstream"
    UNRELIABLE = "unreliable"


REQUIRED_KEYS = ("id", "outlet", "media_type", "published_at", "headline", "body")
OPTIONAL_KEYS = ("topic", "url")


class IngestError(ValueError):
    """A corpus record that cannot be accepted, carrying its 1-based line number."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True)
class Article:
    id: str
    outlet: str
    media_type: MediaType
    published_at: date
    headline: str
    body: str
    topic: Optional[str] = None
    url: Optional[str] = None


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    rejected: tuple  # of (line_number, reason)
    unknown_key_warnings: int


@dataclass(frozen=True)
class Corpus:
    articles: tuple  # of Article, in input-file order
    source_path: str = ""
    ingest_report: Optional[IngestReport] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.articles)

    def __iter__(self) -> Iterator[Article]:
        return iter(self.articles)

    def by_id(self) -> dict:
        return {a.id: a for a in self.articles}


def year_of(article: Article) -> int:
    """Calendar year of the article's publication date."""
    return article.published_at.year


def _parse_record(obj: dict, line_number: int) -> tuple[Article, int]:
    """Validate one decoded record; returns (article, unknown-key count)."""
    if not isinstance(obj, dict):
        raise IngestError(line_number, "record is not an object")
    missing = [k for k in REQUIRED_KEYS if k not in obj]
    if missing:
        raise IngestError(line_number, f"missing required keys: {', '.join(missing)}")

    art_id = obj["id"]
    if not isinstance(art_id, str) or not art_id:
        raise IngestError(line_number, "id must be a non-empty string")

    mt_raw = obj["media_type"]
    try:
        media_type = MediaType(mt_raw)
    except ValueError:
        raise IngestError(line_number, f"unknown media_type {mt_raw!r}") from None

    try:
        published = date.fromisoformat(obj["published_at"])
    except (TypeError, ValueError):
        raise IngestError(line_number, f"invalid published_at {obj['published_at']!r}") from None

    for key in ("outlet", "headline", "body"):
        if not isinstance(obj[key], str):
            raise IngestError(line_number, f"{key} must be a string")
    for key in OPTIONAL_KEYS:
        if key in obj and obj[key] is not None and not isinstance(obj[key], str):
            raise IngestError(line_number, f"{key} must be a string")

    unknown = sum(1 for k in obj if k not in REQUIRED_KEYS and k not in OPTIONAL_KEYS)
    article = Article(
        id=art_id,
        outlet=obj["outlet"],
        media_type=media_type,
        published_at=published,
        headline=obj["headline"],
        body=obj["body"],
        topic=obj.get("topic"),
        url=obj.get("url"),
    )
    return article, unknown


def ingest(path: str, fail_fast: bool = True) -> Corpus:
    """Read a line-delimited corpus file (one JSON object per line).

    With fail_fast (the default), the first bad record raises IngestError.
    Otherwise bad records are skipped and listed in the corpus ingest report.
    """
    articles: list[Article] = []
    seen_ids: set[str] = set()
    rejected: list[tuple[int, str]] = []
    unknown_total = 0

    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise IngestError(line_number, f"malformed record: {exc.msg}") from None
                article, unknown = _parse_record(obj, line_number)
                if article.id in seen_ids:
                    raise IngestError(line_number, f"duplicate article id {article.id!r}")
            except IngestError as exc:
                if fail_fast:
                    raise
                rejected.append((exc.line_number, exc.reason))
                continue
            seen_ids.add(article.id)
            unknown_total += unknown
            articles.append(article)

    report = IngestReport(
        accepted=len(articles),
        rejected=tuple(rejected),
        unknown_key_warnings=unknown_total,
    )
    return Corpus(articles=tuple(articles), source_path=str(path), ingest_report=report)


def article_to_record(article: Article) -> dict:
    record = {
        "id": article.id,
        "outlet": article.outlet,
        "media_type": article.media_type.value,
        "published_at": article.published_at.isoformat(),
        "headline": article.headline,
        "body": article.body,
    }
    if article.topic is not None:
        record["topic"] = article.topic
    if article.url is not None:
        record["url"] = article.url
    return record


def serialize(corpus: Corpus, path: str) -> None:
    """Write the corpus back out, one JSON object per line, in corpus order."""
    with open(path, "w", encoding="utf-8") as fh:
        for article in corpus.articles:
            fh.write(json.dumps(article_to_record(article), ensure_ascii=False))
            fh.write("\n")


def stratified_sample(corpus: Corpus, keywords: Sequence[str], n: int, seed: int) -> Corpus:
    """Draw up to n articles, as evenly as possible across keyword strata.

    A stratum holds the articles whose body contains the keyword
    (case-insensitive); an article in several strata goes to the first
    matching keyword. Empty-stratum quota is redistributed round-robin.
    Deterministic for a given seed.
    """
    if not keywords:
        raise ValueError("keywords must be non-empty")
    if n < len(keywords):
        raise ValueError(f"n ({n}) must be >= number of keywords ({len(keywords)})")

    lowered = [kw.lower() for kw in keywords]
    strata: dict[str, list[tuple[int, Article]]] = {kw: [] for kw in lowered}
    for pos, article in enumerate(corpus.articles):
        body = article.body.lower()
        for kw in lowered:
            if kw in body:
                strata[kw].append((pos, article))
                break

    capacity = {kw: len(strata[kw]) for kw in lowered}
    take = {kw: 0 for kw in lowered}
    remaining = min(n, sum(capacity.values()))
    while remaining:
        progressed = False
        for kw in lowered:
            if remaining and take[kw] < capacity[kw]:
                take[kw] += 1
                remaining -= 1
                progressed = True
        if not progressed:
            break

    rng = random.Random(seed)
    chosen: list[tuple[int, Article]] = []
    for kw in lowered:
        if take[kw]:
            chosen.extend(rng.sample(strata[kw], take[kw]))
    chosen.sort(key=lambda item: item[0])

    return Corpus(
        articles=tuple(article for _, article in chosen),
        source_path=f"{corpus.source_path}#sample(n={n},seed={seed})",
    )
