"""Domain objects: headlines, edits, ratings, players."""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from quipline.textutil import render_tokens

FULL_RATING_COUNT = 5
GRADES = (0, 1, 2, 3)
MAX_EDITS = 150
MAX_RATINGS = 500


class Category(str, Enum):
    POLITICS = "politics"
    WORLDNEWS = "worldnews"
    TECHNOLOGY = "technology"
    SPORTS = "sports"
    ENTERTAINMENT = "entertainment"


class SourceStatus(str, Enum):
    AVAILABLE = "available"
    EXHAUSTED = "exhausted"
    RETIRED = "retired"


class EditState(str, Enum):
    IN_POOL = "in_pool"
    FULLY_RATED = "fully_rated"
    FLAGGED_REMOVED = "flagged_removed"


class Standing(str, Enum):
    ACTIVE = "active"
    WARNED = "warned"
    SUSPENDED = "suspended"


@dataclass
class RatingEvent:
    rater_id: str
    grade: int
    served_at: datetime
    submitted_at: datetime


@dataclass
class SourceHeadline:
    id: str
    tokens: list[str]
    category: Category
    source_name: str
    article_url: str
    published_at: datetime
    replaceable: frozenset[int]
    status: SourceStatus = SourceStatus.AVAILABLE

    @property
    def text(self) -> str:
        return render_tokens(self.tokens)


@dataclass
class EditedHeadline:
    id: str
    source_id: str
    editor_id: str
    replaced_index: int
    substitute: str
    created_at: datetime
    ratings: list[RatingEvent] = field(default_factory=list)
    state: EditState = EditState.IN_POOL
    flaggers: set[str] = field(default_factory=set)
    completed_at: datetime | None = None
    completed_seq: int | None = None

    def rater_ids(self) -> set[str]:
        return {r.rater_id for r in self.ratings}

    def mean_grade(self) -> float | None:
        if not self.ratings:
            return None
        return sum(r.grade for r in self.ratings) / len(self.ratings)


@dataclass
class Player:
    id: str
    display_name: str
    joined_at: datetime
    edit_count: int = 0
    rating_count: int = 0
    skipped: set[str] = field(default_factory=set)
    standing: Standing = Standing.ACTIVE
    # Point components accumulate at headline settlement; balance points are
    # recomputed from totals, never stored.
    editing_points: int = 0
    rating_points: int = 0
