"""Per-sentence classification cascade producing typed source mentions."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from sourcescope.corpus import Article, Corpus
from sourcescope.patterns import (
    PatternSet,
    Platform,
    contains_quote_signs,
    extract_quote_spans,
    find_embedding_span,
    match_patterns,
)
from sourcescope.segmenter import segment

# quote spans shorter than this are stray paired apostrophes, not direct quotes
MIN_QUOTE_CHARS = 3


class Kind(str, Enum):
    QUOTATION = "quotation"
    PARAPHRASE = "paraphrase"
    EMBEDDING = "embedding"


@dataclass(frozen=True)
class SourceMention:
    article_id: str
    sentence_index: int
    platform: Platform
    kind: Kind
    pattern_id: Optional[str]  # absent for Embedding
    span_start: int  # character range of the evidence, within the sentence
    span_end: int


@dataclass(frozen=True)
class ExtractionResult:
    article_id: str
    mentions: tuple  # of SourceMention, sorted by (sentence_index, platform)
    sentence_count: int
    direct_quote_count: int


def classify_sentence(sentence: str, pattern_set: PatternSet) -> list[tuple]:
    """Classify one sentence; at most one emission per platform.

    The embedding test runs first and, when it fires, suppresses Twitter
    pattern hits for the sentence. Each remaining platform with a pattern
    hit is a Quotation when the sentence carries quote signs, else a
    Paraphrase. Returns (platform, kind, (start, end), pattern_id) tuples.
    """
    emissions: list[tuple] = []
    first_hit: dict[Platform, object] = {}
    for hit in match_patterns(sentence, pattern_set):
        first_hit.setdefault(hit.platform, hit)

    embedding_span = find_embedding_span(sentence)
    if embedding_span is not None:
        emissions.append((Platform.TWITTER, Kind.EMBEDDING, embedding_span, None))
        first_hit.pop(Platform.TWITTER, None)

    quoted: Optional[bool] = None
    for platform in (Platform.FACEBOOK, Platform.TWITTER):
        hit = first_hit.get(platform)
        if hit is None:
            continue
        if quoted is None:
            quoted = contains_quote_signs(sentence)
        kind = Kind.QUOTATION if quoted else Kind.PARAPHRASE
        emissions.append((platform, kind, (hit.start, hit.end), hit.pattern_id))

    emissions.sort(key=lambda e: e[0].value)
    return emissions


def extract_mentions(article: Article, pattern_set: PatternSet) -> ExtractionResult:
    spans = segment(article.body)
    mentions: list[SourceMention] = []
    for span in spans:
        sentence = article.body[span.start:span.end]
        for platform, kind, (start, end), pattern_id in classify_sentence(sentence, pattern_set):
            mentions.append(
                SourceMention(
                    article_id=article.id,
                    sentence_index=span.index,
                    platform=platform,
                    kind=kind,
                    pattern_id=pattern_id,
                    span_start=start,
                    span_end=end,
                )
            )
    mentions.sort(key=lambda m: (m.sentence_index, m.platform.value))
    direct_quotes = sum(
        1 for q in extract_quote_spans(article.body) if q.end - q.start >= MIN_QUOTE_CHARS
    )
    return ExtractionResult(
        article_id=article.id,
        mentions=tuple(mentions),
        sentence_count=len(spans),
        direct_quote_count=direct_quotes,
    )


_worker_pattern_set: Optional[PatternSet] = None


def _init_worker(pattern_set: PatternSet) -> None:
    global _worker_pattern_set
    _worker_pattern_set = pattern_set


def _extract_one(article: Article) -> ExtractionResult:
    return extract_mentions(article, _worker_pattern_set)


def extract_corpus(corpus: Corpus, pattern_set: PatternSet, workers: int = 1) -> list[ExtractionResult]:
    """One result per article, in corpus order regardless of parallelism."""
    if workers <= 1:
        return [extract_mentions(article, pattern_set) for article in corpus.articles]
    chunksize = max(1, len(corpus.articles) // (workers * 8))
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(pattern_set,)
    ) as executor:
        return list(executor.map(_extract_one, corpus.articles, chunksize=chunksize))


def mention_to_record(mention: SourceMention) -> dict:
    return {
        "article_id": mention.article_id,
        "sentence_index": mention.sentence_index,
        "platform": mention.platform.value,
        "kind": mention.kind.value,
        "pattern_id": mention.pattern_id,
        "span_start": mention.span_start,
        "span_end": mention.span_end,
    }


def write_mentions(results, path) -> int:
    """Write all mentions as line-delimited JSON; returns the mention count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for result in results:
            for mention in result.mentions:
                fh.write(json.dumps(mention_to_record(mention), ensure_ascii=False))
                fh.write("\n")
                count += 1
    return count


def read_mentions(path) -> list[SourceMention]:
    mentions: list[SourceMention] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            mentions.append(
                SourceMention(
                    article_id=obj["article_id"],
                    sentence_index=int(obj["sentence_index"]),
                    platform=Platform(obj["platform"]),
                    kind=Kind(obj["kind"]),
                    pattern_id=obj.get("pattern_id"),
                    span_start=int(obj["span_start"]),
                    span_end=int(obj["span_end"]),
                )
            )
    return mentions
