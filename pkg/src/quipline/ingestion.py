"""Headline supply: feed adapters, filtering, deduplication, and
replaceable-token tagging.

Feeds deliver raw items {text, category, source, url, published_at}.
Admission rejects items outside the 5-20 token band, duplicates of any
prior headline (normalized text match), items with nothing replaceable,
and anything past the daily cap; rejections are reported per item, the
batch itself never fails.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Protocol

import httpx

from quipline.errors import EmptyText
from quipline.events import ts_from_str
from quipline.models import Category
from quipline.textutil import norm_token, stem, tokenize

if TYPE_CHECKING:
    from quipline.engine import GameEngine

DEFAULT_DAILY_CAP = 300
MIN_TOKENS = 5
MAX_TOKENS = 20

REJECT_TOO_SHORT = "TooShort"
REJECT_TOO_LONG = "TooLong"
REJECT_DUPLICATE = "Duplicate"
REJECT_NO_REPLACEABLE = "NoReplaceableTokens"
REJECT_DAILY_CAP = "DailyCapReached"
REJECT_BAD_ITEM = "BadItem"
REJECT_BAD_CATEGORY = "InvalidCategory"


@dataclass(frozen=True)
class FeedConfig:
    adapter: str  # "jsonl_file" | "http_json"
    location: str
    category: str | None = None  # overrides per-item category when set
    poll_interval_s: float = 600.0
    daily_cap: int = DEFAULT_DAILY_CAP

    def __post_init__(self):
        if self.adapter not in ("jsonl_file", "http_json"):
            raise ValueError(f"unknown feed adapter {self.adapter!r}")
        if self.daily_cap <= 0:
            raise ValueError("daily_cap must be positive")


class ReplaceableTagger(Protocol):
    def tag(self, tokens: list[str]) -> frozenset[int]:
        ...


def load_lexicon(path: str | Path | None = None) -> frozenset[str]:
    """One word per line, '#' comments; ships with a packaged default."""
    if path is None:
        text = resources.files("quipline.data").joinpath("lexicon.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        entry = line.split("#", 1)[0].strip().lower()
        if entry:
            words.add(entry)
    return frozenset(words)


class LexiconTagger:
    """Default tagger: lexicon nouns/verbs anywhere, plus mid-sentence
    capitalized tokens as an entity proxy. The sentence-initial token is
    only tagged via the lexicon, never by its capitalization."""

    def __init__(self, lexicon: frozenset[str] | None = None):
        self.lexicon = lexicon if lexicon is not None else load_lexicon()

    def in_lexicon(self, token: str) -> bool:
        bare = norm_token(token)
        return bool(bare) and (bare in self.lexicon or stem(bare) in self.lexicon)

    def tag(self, tokens: list[str]) -> frozenset[int]:
        tagged = set()
        for i, token in enumerate(tokens):
            bare = token.strip("'\"‘’“”.,:;!?()[]")
            if self.in_lexicon(token):
                tagged.add(i)
            elif i > 0 and bare[:1].isupper():
                tagged.add(i)
        return frozenset(tagged)


def tag_replaceable(tokens: list[str], tagger: ReplaceableTagger) -> frozenset[int]:
    if not tokens:
        raise EmptyText("cannot tag an empty token sequence")
    return tagger.tag(tokens)


@dataclass
class IngestReport:
    admitted: int
    admitted_ids: list[str]
    rejected: list[tuple[dict, str]]


class Ingestor:
    """Filters raw feed items and admits survivors into the engine."""

    def __init__(self, engine: "GameEngine", tagger: ReplaceableTagger | None = None,
                 daily_cap: int = DEFAULT_DAILY_CAP,
                 min_tokens: int = MIN_TOKENS, max_tokens: int = MAX_TOKENS):
        self.engine = engine
        self.tagger = tagger or LexiconTagger()
        self.daily_cap = daily_cap
        self.min_tokens = min_tokens
        self.max_tokens = max_tokens

    def ingest_batch(self, items: list[dict], now: datetime,
                     category_override: str | None = None) -> IngestReport:
        admitted_ids: list[str] = []
        rejected: list[tuple[dict, str]] = []
        day = now.date().isoformat()
        for item in items:
            try:
                text = item["text"]
                category = category_override or item["category"]
                source = item.get("source", "")
                url = item.get("url", "")
                published_at = ts_from_str(item["published_at"])
            except (KeyError, TypeError, ValueError):
                rejected.append((item, REJECT_BAD_ITEM))
                continue
            try:
                Category(category)
            except ValueError:
                rejected.append((item, REJECT_BAD_CATEGORY))
                continue
            tokens = tokenize(text)
            if len(tokens) < self.min_tokens:
                rejected.append((item, REJECT_TOO_SHORT))
                continue
            if len(tokens) > self.max_tokens:
                rejected.append((item, REJECT_TOO_LONG))
                continue
            if self.engine.is_duplicate_text(text):
                rejected.append((item, REJECT_DUPLICATE))
                continue
            replaceable = tag_replaceable(tokens, self.tagger)
            if not replaceable:
                rejected.append((item, REJECT_NO_REPLACEABLE))
                continue
            if self.engine.daily_admissions(day) >= self.daily_cap:
                rejected.append((item, REJECT_DAILY_CAP))
                continue
            hid = self.engine.ingest_headline(
                tokens=tokens, category=category, source_name=source,
                article_url=url, published_at=published_at,
                replaceable=set(replaceable), now=now)
            admitted_ids.append(hid)
        return IngestReport(admitted=len(admitted_ids),
                            admitted_ids=admitted_ids, rejected=rejected)


def read_feed(feed: FeedConfig, timeout: float = 10.0) -> list[dict]:
    """Fetch raw items from a feed. jsonl_file reads newline-JSON from disk;
    http_json GETs a JSON array (or {"items": [...]}) from a URL."""
    if feed.adapter == "jsonl_file":
        items = []
        for line in Path(feed.location).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                items.append(json.loads(line))
        return items
    response = httpx.get(feed.location, timeout=timeout)
    response.raise_for_status()
    payload = response.json()
    if isinstance(payload, dict):
        payload = payload.get("items", [])
    return list(payload)


def poll_feed(ingestor: Ingestor, feed: FeedConfig, now: datetime) -> IngestReport:
    items = read_feed(feed)
    ingestor.daily_cap = feed.daily_cap
    return ingestor.ingest_batch(items, now, category_override=feed.category)
