"""Point formulas, leaderboards, and competition qualification.

Three components make up a player's total:

* editing points, granted per fully rated headline and growing
  exponentially with its mean grade: EP(m) = round(25 * (2**m - 1));
* rating points, granted per rating at settlement from the distance to
  the other four grades: RP(d) = round(10 * (1 - d)), negative once the
  rater drifts more than a full grade away;
* task-balance points, recomputed from lifetime totals and maximal
  exactly while ratings/edits stays within [3, 10].

Unlike the live deployment this plays against, the formulas here are
published; the qualitative shape constraints (exponential editing reward,
negative rating points for large disagreement, balance plateau) are
locked by the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from typing import TYPE_CHECKING

from quipline.errors import NotFullyRated
from quipline.models import EditedHeadline, EditState, FULL_RATING_COUNT

if TYPE_CHECKING:
    from quipline.engine import GameEngine


@dataclass(frozen=True)
class ScoringConfig:
    ep_scale: float = 25.0
    rp_scale: float = 10.0
    balance_scale: float = 50.0
    balance_low: float = 3.0
    balance_high: float = 10.0
    board2_min_rated: int = 5
    funny_window_days: float = 7.0
    qualify_min_edits: int = 50
    qualify_max_edits: int = 150
    qualify_min_ratings: int = 200
    qualify_max_ratings: int = 500

    def scaled(self, factor: float) -> "ScoringConfig":
        """All point constants multiplied by a common positive factor;
        band boundaries and eligibility floors are unchanged."""
        return replace(self, ep_scale=self.ep_scale * factor,
                       rp_scale=self.rp_scale * factor,
                       balance_scale=self.balance_scale * factor)


def iround(x: float) -> int:
    """Round half away from zero (Python's round() is half-to-even)."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def editing_points(mean_grade: float, config: ScoringConfig = ScoringConfig()) -> int:
    """Exponential reward for a settled headline's mean grade."""
    return iround(config.ep_scale * (2.0 ** mean_grade - 1.0))


def editing_points_raw(mean_grade: float, config: ScoringConfig = ScoringConfig()) -> float:
    return config.ep_scale * (2.0 ** mean_grade - 1.0)


def rating_points(grade: int, others: list[int],
                  config: ScoringConfig = ScoringConfig()) -> int:
    """Agreement reward for one rating against the other raters' grades."""
    if len(others) != FULL_RATING_COUNT - 1:
        raise NotFullyRated(
            f"rating points settle against {FULL_RATING_COUNT - 1} other grades")
    delta = abs(grade - sum(others) / len(others))
    return iround(config.rp_scale * (1.0 - delta))


def rating_points_raw(grade: float, others: list[int],
                      config: ScoringConfig = ScoringConfig()) -> float:
    delta = abs(grade - sum(others) / len(others))
    return config.rp_scale * (1.0 - delta)


def balance_points(edits: int, ratings: int,
                   config: ScoringConfig = ScoringConfig()) -> int:
    """Plateau reward for keeping ratings/edits inside the target band.

    Off-band branches floor rather than round so the plateau value is hit
    exactly on the band and never just outside it.
    """
    rho = ratings / max(edits, 1)
    if config.balance_low <= rho <= config.balance_high:
        return iround(config.balance_scale)
    if rho < config.balance_low:
        return math.floor(config.balance_scale * rho / config.balance_low)
    return math.floor(config.balance_scale * config.balance_high / rho)


def balance_points_raw(edits: int, ratings: int,
                       config: ScoringConfig = ScoringConfig()) -> float:
    rho = ratings / max(edits, 1)
    if config.balance_low <= rho <= config.balance_high:
        return config.balance_scale
    if rho < config.balance_low:
        return config.balance_scale * rho / config.balance_low
    return config.balance_scale * config.balance_high / rho


def settle_headline(edited: EditedHeadline,
                    config: ScoringConfig = ScoringConfig()) -> int:
    """Editing-points delta for the editor of a settled headline.

    Flagged-removed headlines yield zero, depriving abusive editors of
    points; anything still in the pool is an error.
    """
    if edited.state == EditState.FLAGGED_REMOVED:
        return 0
    if edited.state != EditState.FULLY_RATED:
        raise NotFullyRated(f"{edited.id} holds {len(edited.ratings)} ratings")
    return editing_points(edited.mean_grade(), config)


def settle_rating(grade: int, others: list[int],
                  config: ScoringConfig = ScoringConfig()) -> int:
    return rating_points(grade, others, config)


def is_qualified(edit_count: int, rating_count: int,
                 config: ScoringConfig = ScoringConfig()) -> bool:
    return (config.qualify_min_edits <= edit_count <= config.qualify_max_edits
            and config.qualify_min_ratings <= rating_count <= config.qualify_max_ratings)


def balance_advice(edit_count: int, rating_count: int,
                   config: ScoringConfig = ScoringConfig()) -> dict[str, int]:
    """How many more edits or ratings would bring the ratio into the band."""
    denom = max(edit_count, 1)
    rho = rating_count / denom
    more_ratings = more_edits = 0
    if rho < config.balance_low:
        more_ratings = math.ceil(config.balance_low * denom) - rating_count
    elif rho > config.balance_high:
        more_edits = math.ceil(rating_count / config.balance_high) - edit_count
    return {"more_ratings": more_ratings, "more_edits": more_edits}


@dataclass(frozen=True)
class ScoreState:
    player_id: str
    editing_points: int
    rating_points: int
    balance_points: int
    mean_received_rating: float | None

    @property
    def total(self) -> int:
        return self.editing_points + self.rating_points + self.balance_points


@dataclass(frozen=True)
class LeaderboardEntry:
    rank: int
    player_id: str
    value: float


@dataclass(frozen=True)
class FunnyEntry:
    rank: int
    edit_id: str
    editor_id: str
    text: str
    value: float


@dataclass(frozen=True)
class Boards:
    points_board: list[LeaderboardEntry]
    mean_rating_board: list[LeaderboardEntry]
    top10_funny: list[FunnyEntry]


def score_state(engine: "GameEngine", player_id: str,
                config: ScoringConfig = ScoringConfig()) -> ScoreState:
    player = engine.players[player_id]
    settled = engine.settled_mean_grades(player_id)
    mean_received = sum(settled) / len(settled) if settled else None
    return ScoreState(
        player_id=player_id,
        editing_points=player.editing_points,
        rating_points=player.rating_points,
        balance_points=balance_points(player.edit_count, player.rating_count, config),
        mean_received_rating=mean_received,
    )


def leaderboards(engine: "GameEngine", now: datetime,
                 config: ScoringConfig = ScoringConfig()) -> Boards:
    """Both boards plus the recent top-10 funny list.

    Board 1 ranks by total points, board 2 by mean received rating among
    players with enough settled headlines; ties always break toward the
    earlier joiner so output is deterministic.
    """
    states = {pid: score_state(engine, pid, config) for pid in engine.players}

    def join_key(pid: str):
        return (engine.players[pid].joined_at, pid)

    points_order = sorted(states, key=lambda p: (-states[p].total,) + join_key(p))
    points_board = [
        LeaderboardEntry(rank=i + 1, player_id=pid, value=states[pid].total)
        for i, pid in enumerate(points_order)
    ]

    eligible = [
        pid for pid in states
        if len(engine.settled_mean_grades(pid)) >= config.board2_min_rated
    ]
    mean_order = sorted(
        eligible, key=lambda p: (-states[p].mean_received_rating,) + join_key(p))
    mean_rating_board = [
        LeaderboardEntry(rank=i + 1, player_id=pid,
                         value=states[pid].mean_received_rating)
        for i, pid in enumerate(mean_order)
    ]

    cutoff = now - timedelta(days=config.funny_window_days)
    window = [
        e for e in engine.completed_edits()
        if e.completed_at is not None and e.completed_at >= cutoff
    ]
    window.sort(key=lambda e: (-e.mean_grade(), e.completed_seq))
    top10_funny = [
        FunnyEntry(rank=i + 1, edit_id=e.id, editor_id=e.editor_id,
                   text=engine.edited_text(e.id), value=e.mean_grade())
        for i, e in enumerate(window[:10])
    ]
    return Boards(points_board, mean_rating_board, top10_funny)
