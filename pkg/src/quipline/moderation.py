"""Abuse protection: blacklist filtering, rating dwell time, flag handling
thresholds, and the lowball detector behind the warn/suspend escalation.

All checks here are pure; the engine applies their outcomes through its
single-writer command path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Sequence

from quipline.textutil import stem

DEFAULT_MIN_DWELL_MS = 2000
DEFAULT_FLAG_REMOVAL_THRESHOLD = 1
DEFAULT_LOWBALL_WINDOW = 30
DEFAULT_LOWBALL_TRIGGER = 0.8


@dataclass(frozen=True)
class ModerationPolicy:
    blacklist: frozenset[str] = frozenset()
    min_dwell_ms: int = DEFAULT_MIN_DWELL_MS
    flag_removal_threshold: int = DEFAULT_FLAG_REMOVAL_THRESHOLD
    lowball_window: int = DEFAULT_LOWBALL_WINDOW
    lowball_trigger: float = DEFAULT_LOWBALL_TRIGGER

    def __post_init__(self):
        if self.flag_removal_threshold < 1 or self.lowball_window < 1:
            raise ValueError("moderation thresholds must be positive")


def load_blacklist(path: str | Path) -> frozenset[str]:
    """Blacklist file: one token per line, '#' starts a comment."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        entry = line.split("#", 1)[0].strip().lower()
        if entry:
            words.add(entry)
    return frozenset(words)


def check_blacklist(word: str, policy: ModerationPolicy) -> str | None:
    """Return a rejection reason if the word (or its stem) is blacklisted."""
    normalized = word.strip().lower()
    if normalized in policy.blacklist:
        return f"'{normalized}' is blacklisted"
    stemmed = stem(normalized)
    if stemmed in policy.blacklist:
        return f"'{normalized}' matches blacklisted stem '{stemmed}'"
    return None


def check_dwell(served_at: datetime, submitted_at: datetime,
                policy: ModerationPolicy) -> bool:
    """True when the rater spent at least the minimum dwell on the item."""
    elapsed_ms = (submitted_at - served_at).total_seconds() * 1000.0
    return elapsed_ms >= policy.min_dwell_ms


def is_lowball(grade: int, mean_others: float) -> bool:
    return grade < mean_others - 1.0


def detect_lowballing(outcomes: Sequence[tuple[int, float]], standing: str,
                      policy: ModerationPolicy) -> str:
    """Evaluate a player's settled ratings for systematic low grading.

    ``outcomes`` are (grade, mean of the other raters) pairs settled since
    the player's last warning, oldest first. The detector stays quiet until
    a full window has accumulated; suspended players are never re-flagged.
    Returns "none", "warn" or "suspend".
    """
    if standing == "suspended":
        return "none"
    if len(outcomes) < policy.lowball_window:
        return "none"
    window = outcomes[-policy.lowball_window:]
    lowballs = sum(1 for grade, mean_others in window
                   if is_lowball(grade, mean_others))
    if lowballs / len(window) <= policy.lowball_trigger:
        return "none"
    return "suspend" if standing == "warned" else "warn"
