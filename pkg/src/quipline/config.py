"""Application configuration.

One YAML (or JSON) file configures everything: scoring constants,
moderation policy, sampler parameters, ingestion feeds, the scorer
plugin, and service settings. Every section is optional; omitted keys
take the defaults documented in their modules. The config path can also
come from the QUIPLINE_CONFIG environment variable.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from quipline.engine import GameConfig
from quipline.ingestion import DEFAULT_DAILY_CAP, FeedConfig, MAX_TOKENS, MIN_TOKENS
from quipline.moderation import ModerationPolicy, load_blacklist
from quipline.sampler import SamplerConfig
from quipline.scoring import ScoringConfig
from quipline.scorer import HeuristicWeights

ENV_CONFIG = "QUIPLINE_CONFIG"


@dataclass(frozen=True)
class ScorerSettings:
    plugin: str = "builtin"  # "builtin" | "external"
    endpoint: str | None = None
    timeout_s: float = 1.0
    weights: HeuristicWeights = field(default_factory=HeuristicWeights)


@dataclass(frozen=True)
class IngestionSettings:
    daily_cap: int = DEFAULT_DAILY_CAP
    min_tokens: int = MIN_TOKENS
    max_tokens: int = MAX_TOKENS
    lexicon_file: str | None = None


@dataclass(frozen=True)
class ServiceSettings:
    port: int = 8000
    session_ttl_s: float = 24 * 3600.0
    admin_token: str | None = None
    budget_cents: float = 100000.0  # default budget for /report


@dataclass(frozen=True)
class AppConfig:
    game: GameConfig = field(default_factory=GameConfig)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    ingestion: IngestionSettings = field(default_factory=IngestionSettings)
    feeds: tuple[FeedConfig, ...] = ()
    scorer: ScorerSettings = field(default_factory=ScorerSettings)
    service: ServiceSettings = field(default_factory=ServiceSettings)


def _build(cls, raw: dict, **overrides):
    known = {f for f in cls.__dataclass_fields__}
    kwargs = {k: v for k, v in raw.items() if k in known}
    kwargs.update(overrides)
    return cls(**kwargs)


def config_from_dict(raw: dict) -> AppConfig:
    scoring = _build(ScoringConfig, raw.get("scoring", {}))

    mod_raw = dict(raw.get("moderation", {}))
    blacklist_file = mod_raw.pop("blacklist_file", None)
    blacklist = load_blacklist(blacklist_file) if blacklist_file else frozenset()
    moderation = _build(ModerationPolicy, mod_raw, blacklist=blacklist)

    game = _build(GameConfig, raw.get("game", {}),
                  moderation=moderation, scoring=scoring)
    sampler = _build(SamplerConfig, raw.get("sampler", {}))
    ingestion = _build(IngestionSettings, raw.get("ingestion", {}))
    feeds = tuple(_build(FeedConfig, f) for f in raw.get("feeds", []))

    scorer_raw = dict(raw.get("scorer", {}))
    weights = _build(HeuristicWeights, scorer_raw.pop("weights", {}))
    scorer = _build(ScorerSettings, scorer_raw, weights=weights)

    service = _build(ServiceSettings, raw.get("service", {}))
    return AppConfig(game=game, sampler=sampler, ingestion=ingestion,
                     feeds=feeds, scorer=scorer, service=service)


def load_config(path: str | Path | None = None) -> AppConfig:
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return AppConfig()
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        raw = json.loads(text)
    else:
        raw = yaml.safe_load(text) or {}
    return config_from_dict(raw)
