"""Pluggable instant-funniness scoring.

The estimate shown after an edit is advisory only: it never touches stored
grades or points. Two plugins ship: a deterministic surface-feature
heuristic, and a client for an external model endpoint that falls back to
the heuristic when the endpoint misbehaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import httpx

from quipline.errors import NotSingleSubstitution
from quipline.ingestion import LexiconTagger
from quipline.textutil import norm_token, tokenize

SCORE_MIN = 0.0
SCORE_MAX = 3.0


@dataclass(frozen=True)
class Estimate:
    score: float
    source: str  # "builtin" | "external" | "fallback"


class ScorerPlugin(Protocol):
    def estimate(self, original: str, edited: str) -> Estimate:
        ...


def clamp(score: float) -> float:
    return min(SCORE_MAX, max(SCORE_MIN, score))


@dataclass(frozen=True)
class HeuristicWeights:
    bias: float = 0.6
    length: float = 0.6    # scaled |len(substitute) - len(original token)|
    rarity: float = 0.9    # substitute absent from the common-word lexicon
    position: float = 0.9  # later replacements read more like punchlines


def single_substitution(original: str, edited: str) -> tuple[int, str, str]:
    """Locate the one token that differs; anything else is an error."""
    a, b = tokenize(original), tokenize(edited)
    if len(a) != len(b):
        raise NotSingleSubstitution("token counts differ")
    diffs = [i for i, (x, y) in enumerate(zip(a, b)) if norm_token(x) != norm_token(y)]
    if len(diffs) != 1:
        raise NotSingleSubstitution(f"{len(diffs)} tokens differ, expected 1")
    i = diffs[0]
    return i, a[i], b[i]


class BuiltinHeuristic:
    """Deterministic estimate from surface features of the substitution."""

    def __init__(self, weights: HeuristicWeights = HeuristicWeights(),
                 tagger: LexiconTagger | None = None):
        self.weights = weights
        self.tagger = tagger or LexiconTagger()

    def estimate(self, original: str, edited: str) -> Estimate:
        index, original_token, substitute = single_substitution(original, edited)
        n = len(tokenize(original))
        w = self.weights
        length_delta = min(abs(len(norm_token(substitute)) - len(norm_token(original_token))), 10) / 10.0
        rarity = 0.0 if self.tagger.in_lexicon(substitute) else 1.0
        position = index / (n - 1) if n > 1 else 0.0
        score = w.bias + w.length * length_delta + w.rarity * rarity + w.position * position
        return Estimate(score=clamp(score), source="builtin")


class ExternalHttpScorer:
    """POSTs {"original", "edited"} to a model endpoint expecting
    {"score": number}; clamps the reply and falls back to the builtin
    heuristic on any failure. Errors never reach the player."""

    def __init__(self, endpoint: str, timeout_s: float = 1.0,
                 fallback: BuiltinHeuristic | None = None):
        self.endpoint = endpoint
        self.timeout_s = timeout_s
        self.fallback = fallback or BuiltinHeuristic()

    def estimate(self, original: str, edited: str) -> Estimate:
        try:
            response = httpx.post(
                self.endpoint,
                json={"original": original, "edited": edited},
                timeout=self.timeout_s,
            )
            response.raise_for_status()
            score = float(response.json()["score"])
            return Estimate(score=clamp(score), source="external")
        except Exception:
            inner = self.fallback.estimate(original, edited)
            return Estimate(score=inner.score, source="fallback")
