"""Event-sourced game engine.

All game state is a pure fold over an append-only event log: commands
validate against current state, append one or more events, and the
``_apply`` step (shared with replay) performs every mutation. Replaying a
log therefore reproduces the exact state the live engine held, including
points, moderation standing, and the idempotency table.

Concurrency model: a single lock serializes all mutating commands (one
writer); queries take the same lock briefly and return plain data, so
they are safe from any thread.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Optional

from quipline import events as ev
from quipline import moderation
from quipline import scoring
from quipline.errors import (
    AlreadyRemoved,
    BlacklistedWord,
    CapReached,
    DuplicateRating,
    EmptyOthers,
    GradeOutOfRange,
    HeadlineNotAvailable,
    HeadlineNotInPool,
    InvalidCategory,
    NotReplaceableIndex,
    NotSingleWord,
    PairCapReached,
    SelfFlag,
    SelfRating,
    SubstituteEqualsOriginal,
    SuspendedPlayer,
    TooFast,
    UnknownHeadline,
    UnknownPlayer,
)
from quipline.models import (
    Category,
    EditedHeadline,
    EditState,
    FULL_RATING_COUNT,
    GRADES,
    Player,
    RatingEvent,
    SourceHeadline,
    SourceStatus,
    Standing,
)
from quipline.textutil import mark_token, norm_token, normalize_text, render_tokens

CONSENSUS_BAND = 0.5  # "reasonably close" is within half a grade of the others' mean


class Feedback(str, Enum):
    CLOSE = "close"
    HIGHER = "higher"
    LOWER = "lower"


def _feedback_from_delta(delta: float) -> Feedback:
    if abs(delta) <= CONSENSUS_BAND:
        return Feedback.CLOSE
    return Feedback.HIGHER if delta > 0 else Feedback.LOWER


def compare_to_consensus(grade: int, others: list[int]) -> Feedback:
    """Position a grade against the other raters' mean: close within half a
    grade, otherwise higher or lower."""
    if not others:
        raise EmptyOthers("no prior ratings to compare against")
    return _feedback_from_delta(grade - sum(others) / len(others))


@dataclass(frozen=True)
class GameConfig:
    max_edits: int = 150
    max_ratings: int = 500
    pair_cap: Optional[int] = 10  # lifetime ratings by one rater on one editor
    feedback_min_prior: int = 2   # instant feedback needs this many prior ratings
    moderation: moderation.ModerationPolicy = field(
        default_factory=moderation.ModerationPolicy)
    scoring: scoring.ScoringConfig = field(default_factory=scoring.ScoringConfig)


@dataclass(frozen=True)
class EditResult:
    edit_id: str
    estimate: float | None = None
    estimate_source: str | None = None


@dataclass(frozen=True)
class RatingOutcome:
    edit_id: str
    accepted: bool
    count: int
    settled: bool
    feedback: Feedback | None


class GameEngine:
    def __init__(self, config: GameConfig | None = None):
        self.config = config or GameConfig()
        self.log: list[ev.GameEvent] = []
        self.players: dict[str, Player] = {}
        self.sources: dict[str, SourceHeadline] = {}
        self.edits: dict[str, EditedHeadline] = {}
        # Advisory-only hook; never touches state (see submit_edit).
        self.scorer: Optional[Callable[[str, str], Any]] = None
        self._seq = 0
        self._lock = threading.RLock()
        self._next_id = {"p": 0, "h": 0, "e": 0}
        self._norm_texts: set[str] = set()
        self._daily_admissions: dict[str, int] = {}  # UTC date iso -> count
        self._ingest_order: dict[str, int] = {}
        self._player_edits: dict[str, list[str]] = {}
        self._player_ratings: dict[str, list[tuple[str, int, datetime]]] = {}
        self._rated: dict[str, set[str]] = {}
        self._pair: dict[tuple[str, str], int] = {}
        self._received: dict[str, int] = {}
        self._settled_outcomes: dict[str, list[tuple[int, float]]] = {}
        self._settled_means: dict[str, list[float]] = {}
        self._warn_mark: dict[str, int] = {}
        self._completed: list[str] = []
        self._idempotent: dict[str, dict] = {}

    # ------------------------------------------------------------------
    # plumbing

    @property
    def seq(self) -> int:
        return self._seq

    @property
    def lock(self) -> threading.RLock:
        return self._lock

    def _emit(self, kind: str, data: dict, at: datetime):
        event = ev.GameEvent(seq=self._seq + 1, at=at, kind=kind, data=data)
        self._seq = event.seq
        self.log.append(event)
        return self._apply(event)

    @classmethod
    def replay(cls, log: list[ev.GameEvent],
               config: GameConfig | None = None) -> "GameEngine":
        """Rebuild full state from an event log; log must be gap-free."""
        ev.validate_sequence(log)
        engine = cls(config)
        for event in log:
            engine._apply(event)
        engine.log = list(log)
        engine._seq = log[-1].seq if log else 0
        return engine

    def _bump_id(self, kind: str, raw_id: str) -> None:
        try:
            n = int(raw_id[1:])
        except ValueError:
            return
        if n > self._next_id[kind]:
            self._next_id[kind] = n

    def _fresh_id(self, kind: str) -> str:
        return f"{kind}{self._next_id[kind] + 1}"

    def _require_player(self, player_id: str) -> Player:
        player = self.players.get(player_id)
        if player is None:
            raise UnknownPlayer(f"no player {player_id!r}")
        return player

    def _require_active(self, player: Player) -> Player:
        if player.standing == Standing.SUSPENDED:
            raise SuspendedPlayer(f"{player.id} is suspended")
        return player

    # ------------------------------------------------------------------
    # commands

    def register_player(self, display_name: str, now: datetime,
                        idempotency_key: str | None = None) -> str:
        with self._lock:
            if idempotency_key and idempotency_key in self._idempotent:
                return self._idempotent[idempotency_key]["player_id"]
            data = {"player_id": self._fresh_id("p"),
                    "display_name": display_name}
            if idempotency_key:
                data["idempotency_key"] = idempotency_key
            result = self._emit(ev.PLAYER_JOINED, data, now)
            return result["player_id"]

    def ingest_headline(self, tokens: list[str], category: str,
                        source_name: str, article_url: str,
                        published_at: datetime, replaceable: set[int],
                        now: datetime) -> str:
        """Admit one headline. Policy filtering (length, duplicates, the
        daily cap) lives in the ingestion module; this checks structure."""
        with self._lock:
            try:
                category = Category(category)
            except ValueError:
                raise InvalidCategory(f"unknown category {category!r}")
            if not replaceable:
                raise NotReplaceableIndex("replaceable set must be non-empty")
            if any(i < 0 or i >= len(tokens) for i in replaceable):
                raise NotReplaceableIndex("replaceable index out of range")
            data = {
                "headline_id": self._fresh_id("h"),
                "tokens": list(tokens),
                "category": category.value,
                "source_name": source_name,
                "article_url": article_url,
                "published_at": ev.ts_to_str(published_at),
                "replaceable": sorted(replaceable),
            }
            result = self._emit(ev.HEADLINE_INGESTED, data, now)
            return result["headline_id"]

    def submit_edit(self, player_id: str, source_id: str, index: int,
                    word: str, now: datetime,
                    idempotency_key: str | None = None) -> EditResult:
        with self._lock:
            if idempotency_key and idempotency_key in self._idempotent:
                edit_id = self._idempotent[idempotency_key]["edit_id"]
                return self._edit_result(edit_id)
            player = self._require_active(self._require_player(player_id))
            if player.edit_count >= self.config.max_edits:
                raise CapReached(
                    f"edit cap of {self.config.max_edits} reached")
            source = self.sources.get(source_id)
            if source is None:
                raise UnknownHeadline(f"no headline {source_id!r}")
            if source.status != SourceStatus.AVAILABLE:
                raise HeadlineNotAvailable(f"{source_id} is {source.status.value}")
            if index not in source.replaceable:
                raise NotReplaceableIndex(
                    f"token {index} of {source_id} is not replaceable")
            word = word.strip()
            if not word or len(word.split()) != 1:
                raise NotSingleWord("substitute must be exactly one word")
            if norm_token(word) == norm_token(source.tokens[index]):
                raise SubstituteEqualsOriginal(
                    "substitute matches the replaced token")
            reason = moderation.check_blacklist(word, self.config.moderation)
            if reason:
                raise BlacklistedWord(reason)
            data = {
                "edit_id": self._fresh_id("e"),
                "source_id": source_id,
                "editor_id": player_id,
                "replaced_index": index,
                "substitute": word,
            }
            if idempotency_key:
                data["idempotency_key"] = idempotency_key
            result = self._emit(ev.EDIT_SUBMITTED, data, now)
            edit_id = result["edit_id"]
        # estimate computed outside the lock: scorer latency (external plugins
        # have a network timeout) must never stall the single writer
        return self._edit_result(edit_id)

    def _edit_result(self, edit_id: str) -> EditResult:
        estimate = None
        source = None
        if self.scorer is not None:
            edit = self.edits[edit_id]
            original = render_tokens(self.sources[edit.source_id].tokens)
            edited = self.edited_text(edit_id)
            try:
                est = self.scorer(original, edited)
                estimate, source = est.score, est.source
            except Exception:
                pass  # advisory only; the edit is already committed
        return EditResult(edit_id=edit_id, estimate=estimate,
                          estimate_source=source)

    def submit_rating(self, player_id: str, edit_id: str, grade: int,
                      served_at: datetime, now: datetime,
                      idempotency_key: str | None = None) -> RatingOutcome:
        with self._lock:
            if idempotency_key and idempotency_key in self._idempotent:
                return self._outcome_from_dict(self._idempotent[idempotency_key])
            player = self._require_active(self._require_player(player_id))
            if not isinstance(grade, int) or grade not in GRADES:
                raise GradeOutOfRange(f"grade must be one of {GRADES}")
            if player.rating_count >= self.config.max_ratings:
                raise CapReached(
                    f"rating cap of {self.config.max_ratings} reached")
            edit = self.edits.get(edit_id)
            if edit is None:
                raise UnknownHeadline(f"no edited headline {edit_id!r}")
            if edit.state != EditState.IN_POOL:
                raise HeadlineNotInPool(f"{edit_id} is {edit.state.value}")
            if edit.editor_id == player_id:
                raise SelfRating("editors may not rate their own headlines")
            if edit_id in self._rated.get(player_id, ()):
                raise DuplicateRating(f"{player_id} already rated {edit_id}")
            cap = self.config.pair_cap
            if cap is not None and self._pair.get((player_id, edit.editor_id), 0) >= cap:
                raise PairCapReached(
                    f"{player_id} already rated {cap} headlines of {edit.editor_id}")
            if not moderation.check_dwell(served_at, now, self.config.moderation):
                raise TooFast("rating submitted before the minimum dwell time")
            data = {
                "edit_id": edit_id,
                "rater_id": player_id,
                "grade": grade,
                "served_at": ev.ts_to_str(served_at),
            }
            if idempotency_key:
                data["idempotency_key"] = idempotency_key
            result = self._emit(ev.RATING_SUBMITTED, data, now)
            outcome = self._outcome_from_dict(result)
            if outcome.settled:
                self._escalate_lowballers(edit, now)
            return outcome

    @staticmethod
    def _outcome_from_dict(raw: dict) -> RatingOutcome:
        return RatingOutcome(
            edit_id=raw["edit_id"], accepted=True, count=raw["count"],
            settled=raw["settled"],
            feedback=Feedback(raw["feedback"]) if raw.get("feedback") else None,
        )

    def _escalate_lowballers(self, edit: EditedHeadline, now: datetime) -> None:
        """After a settlement, walk the five raters through the lowball
        detector and append warn/suspend events for any that trip it."""
        for rating in list(edit.ratings):
            player = self.players[rating.rater_id]
            outcomes = self._settled_outcomes.get(player.id, [])
            mark = self._warn_mark.get(player.id, 0)
            verdict = moderation.detect_lowballing(
                outcomes[mark:], player.standing.value, self.config.moderation)
            if verdict == "warn":
                self._emit(ev.PLAYER_WARNED,
                           {"player_id": player.id, "reason": "lowballing"}, now)
            elif verdict == "suspend":
                self._emit(ev.PLAYER_SUSPENDED,
                           {"player_id": player.id, "reason": "lowballing"}, now)

    def flag_headline(self, player_id: str, edit_id: str, now: datetime) -> None:
        with self._lock:
            self._require_active(self._require_player(player_id))
            edit = self.edits.get(edit_id)
            if edit is None:
                raise UnknownHeadline(f"no edited headline {edit_id!r}")
            if edit.state == EditState.FLAGGED_REMOVED:
                raise AlreadyRemoved(f"{edit_id} was already removed")
            if edit.state != EditState.IN_POOL:
                raise HeadlineNotInPool(f"{edit_id} is {edit.state.value}")
            if edit.editor_id == player_id:
                raise SelfFlag("editors may not flag their own headlines")
            if player_id in edit.flaggers:
                return  # already counted
            self._emit(ev.HEADLINE_FLAGGED,
                       {"edit_id": edit_id, "flagger_id": player_id}, now)

    def skip_headline(self, player_id: str, headline_id: str, now: datetime) -> None:
        """Permanently hide a headline (source or edited) from this player.
        Idempotent: repeat skips are accepted without appending events."""
        with self._lock:
            player = self._require_active(self._require_player(player_id))
            if headline_id not in self.sources and headline_id not in self.edits:
                raise UnknownHeadline(f"no headline {headline_id!r}")
            if headline_id in player.skipped:
                return
            self._emit(ev.HEADLINE_SKIPPED,
                       {"player_id": player_id, "headline_id": headline_id}, now)

    def warn_player(self, player_id: str, now: datetime,
                    reason: str = "moderation") -> None:
        with self._lock:
            player = self._require_player(player_id)
            if player.standing != Standing.ACTIVE:
                return
            self._emit(ev.PLAYER_WARNED,
                       {"player_id": player_id, "reason": reason}, now)

    def suspend_player(self, player_id: str, now: datetime,
                       reason: str = "moderation") -> None:
        with self._lock:
            player = self._require_player(player_id)
            if player.standing == Standing.SUSPENDED:
                return
            self._emit(ev.PLAYER_SUSPENDED,
                       {"player_id": player_id, "reason": reason}, now)

    def reinstate_headline(self, edit_id: str, now: datetime) -> None:
        """Moderator override returning a flag-removed headline to the pool."""
        with self._lock:
            edit = self.edits.get(edit_id)
            if edit is None:
                raise UnknownHeadline(f"no edited headline {edit_id!r}")
            if edit.state != EditState.FLAGGED_REMOVED:
                return
            self._emit(ev.HEADLINE_REINSTATED, {"edit_id": edit_id}, now)

    # ------------------------------------------------------------------
    # state transitions (the fold)

    def _apply(self, event: ev.GameEvent) -> dict | None:
        handler = getattr(self, f"_apply_{event.kind}", None)
        if handler is None:
            raise ev.CorruptLog(f"unknown event kind {event.kind!r}", seq=event.seq)
        return handler(event)

    def _apply_player_joined(self, event: ev.GameEvent) -> dict:
        pid = event.data["player_id"]
        self._bump_id("p", pid)
        self.players[pid] = Player(
            id=pid, display_name=event.data["display_name"], joined_at=event.at)
        self._player_edits[pid] = []
        self._player_ratings[pid] = []
        self._rated[pid] = set()
        self._settled_outcomes[pid] = []
        self._settled_means[pid] = []
        result = {"player_id": pid}
        key = event.data.get("idempotency_key")
        if key:
            self._idempotent[key] = result
        return result

    def _apply_headline_ingested(self, event: ev.GameEvent) -> dict:
        hid = event.data["headline_id"]
        self._bump_id("h", hid)
        tokens = list(event.data["tokens"])
        self.sources[hid] = SourceHeadline(
            id=hid,
            tokens=tokens,
            category=Category(event.data["category"]),
            source_name=event.data["source_name"],
            article_url=event.data["article_url"],
            published_at=ev.ts_from_str(event.data["published_at"]),
            replaceable=frozenset(event.data["replaceable"]),
        )
        self._ingest_order[hid] = event.seq
        self._norm_texts.add(normalize_text(" ".join(tokens)))
        day = event.at.date().isoformat()
        self._daily_admissions[day] = self._daily_admissions.get(day, 0) + 1
        return {"headline_id": hid}

    def _apply_edit_submitted(self, event: ev.GameEvent) -> dict:
        eid = event.data["edit_id"]
        self._bump_id("e", eid)
        editor = event.data["editor_id"]
        self.edits[eid] = EditedHeadline(
            id=eid,
            source_id=event.data["source_id"],
            editor_id=editor,
            replaced_index=event.data["replaced_index"],
            substitute=event.data["substitute"],
            created_at=event.at,
        )
        self.players[editor].edit_count += 1
        self._player_edits[editor].append(eid)
        result = {"edit_id": eid}
        key = event.data.get("idempotency_key")
        if key:
            self._idempotent[key] = result
        return result

    def _apply_rating_submitted(self, event: ev.GameEvent) -> dict:
        eid = event.data["edit_id"]
        rater = event.data["rater_id"]
        grade = event.data["grade"]
        edit = self.edits[eid]
        prior = [r.grade for r in edit.ratings]
        edit.ratings.append(RatingEvent(
            rater_id=rater, grade=grade,
            served_at=ev.ts_from_str(event.data["served_at"]),
            submitted_at=event.at,
        ))
        self.players[rater].rating_count += 1
        self._player_ratings[rater].append((eid, grade, event.at))
        self._rated[rater].add(eid)
        pair = (rater, edit.editor_id)
        self._pair[pair] = self._pair.get(pair, 0) + 1
        self._received[edit.editor_id] = self._received.get(edit.editor_id, 0) + 1
        settled = False
        if len(edit.ratings) == FULL_RATING_COUNT:
            settled = True
            edit.state = EditState.FULLY_RATED
            edit.completed_at = event.at
            edit.completed_seq = event.seq
            self._completed.append(eid)
            self._settle(edit)
        feedback = None
        if len(prior) >= self.config.feedback_min_prior:
            feedback = compare_to_consensus(grade, prior).value
        result = {"edit_id": eid, "count": len(edit.ratings),
                  "settled": settled, "feedback": feedback}
        key = event.data.get("idempotency_key")
        if key:
            self._idempotent[key] = result
        return result

    def _settle(self, edit: EditedHeadline) -> None:
        """Grant all points from a completed headline atomically."""
        cfg = self.config.scoring
        editor = self.players[edit.editor_id]
        editor.editing_points += scoring.settle_headline(edit, cfg)
        self._settled_means[edit.editor_id].append(edit.mean_grade())
        grades = [r.grade for r in edit.ratings]
        for i, rating in enumerate(edit.ratings):
            others = grades[:i] + grades[i + 1:]
            points = scoring.settle_rating(rating.grade, others, cfg)
            rater = self.players[rating.rater_id]
            rater.rating_points += points
            self._settled_outcomes[rating.rater_id].append(
                (rating.grade, sum(others) / len(others)))

    def _apply_headline_flagged(self, event: ev.GameEvent) -> dict:
        edit = self.edits[event.data["edit_id"]]
        edit.flaggers.add(event.data["flagger_id"])
        threshold = self.config.moderation.flag_removal_threshold
        if edit.state == EditState.IN_POOL and len(edit.flaggers) >= threshold:
            edit.state = EditState.FLAGGED_REMOVED
        return {"edit_id": edit.id, "state": edit.state.value}

    def _apply_headline_skipped(self, event: ev.GameEvent) -> dict:
        pid = event.data["player_id"]
        self.players[pid].skipped.add(event.data["headline_id"])
        return {"player_id": pid}

    def _apply_player_warned(self, event: ev.GameEvent) -> dict:
        player = self.players[event.data["player_id"]]
        if player.standing == Standing.ACTIVE:
            player.standing = Standing.WARNED
        self._warn_mark[player.id] = len(self._settled_outcomes[player.id])
        return {"player_id": player.id}

    def _apply_player_suspended(self, event: ev.GameEvent) -> dict:
        player = self.players[event.data["player_id"]]
        player.standing = Standing.SUSPENDED
        return {"player_id": player.id}

    def _apply_headline_reinstated(self, event: ev.GameEvent) -> dict:
        edit = self.edits[event.data["edit_id"]]
        if edit.state == EditState.FLAGGED_REMOVED:
            edit.state = EditState.IN_POOL
            edit.flaggers.clear()
        return {"edit_id": edit.id}

    # ------------------------------------------------------------------
    # queries

    def edited_text(self, edit_id: str) -> str:
        edit = self.edits[edit_id]
        source = self.sources[edit.source_id]
        return render_tokens(source.tokens, edit.replaced_index, edit.substitute)

    def original_marked(self, edit_id: str) -> str:
        edit = self.edits[edit_id]
        return mark_token(self.sources[edit.source_id].tokens, edit.replaced_index)

    def in_pool_edits(self) -> list[EditedHeadline]:
        with self._lock:
            return [e for e in self.edits.values() if e.state == EditState.IN_POOL]

    def completed_edits(self) -> list[EditedHeadline]:
        """Fully rated headlines in completion order."""
        with self._lock:
            return [self.edits[eid] for eid in self._completed
                    if self.edits[eid].state == EditState.FULLY_RATED]

    def settled_mean_grades(self, player_id: str) -> list[float]:
        return self._settled_means.get(player_id, [])

    def player_edit_ids(self, player_id: str) -> list[str]:
        """The player's edits in creation order."""
        return self._player_edits.get(player_id, [])

    def player_rating_history(self, player_id: str) -> list[tuple[str, int, datetime]]:
        """(edit_id, grade, submitted_at) triples in submission order."""
        return self._player_ratings.get(player_id, [])

    def received_count(self, editor_id: str) -> int:
        return self._received.get(editor_id, 0)

    def pair_count(self, rater_id: str, editor_id: str) -> int:
        return self._pair.get((rater_id, editor_id), 0)

    def pair_counts(self) -> dict[tuple[str, str], int]:
        return dict(self._pair)

    def rated_set(self, rater_id: str) -> set[str]:
        return self._rated.get(rater_id, set())

    def is_duplicate_text(self, text: str) -> bool:
        return normalize_text(text) in self._norm_texts

    def daily_admissions(self, day: str) -> int:
        return self._daily_admissions.get(day, 0)

    def idempotent_result(self, key: str) -> dict | None:
        return self._idempotent.get(key)

    def list_editable(self, player_id: str | None = None,
                      category: str | None = None,
                      limit: int | None = None) -> list[SourceHeadline]:
        """Available sources for editing, most recently published first."""
        with self._lock:
            skipped: set[str] = set()
            if player_id is not None:
                skipped = self._require_player(player_id).skipped
            if category is not None:
                category = Category(category).value
            rows = [
                s for s in self.sources.values()
                if s.status == SourceStatus.AVAILABLE
                and s.id not in skipped
                and (category is None or s.category.value == category)
            ]
            rows.sort(key=lambda s: (s.published_at, self._ingest_order[s.id]),
                      reverse=True)
            return rows[:limit] if limit is not None else rows

    def editor_feedback(self, player_id: str) -> dict:
        """Top 5 funniest edits, 10 most recent, and any removed as abusive."""
        with self._lock:
            self._require_player(player_id)
            edit_ids = self._player_edits.get(player_id, [])
            own = [self.edits[eid] for eid in edit_ids]

            def entry(e: EditedHeadline) -> dict:
                return {
                    "edit_id": e.id,
                    "text": self.edited_text(e.id),
                    "mean_grade": e.mean_grade(),
                    "ratings": len(e.ratings),
                    "created_at": ev.ts_to_str(e.created_at),
                    "state": e.state.value,
                }

            order = {eid: i for i, eid in enumerate(edit_ids)}
            visible = [e for e in own if e.state != EditState.FLAGGED_REMOVED]
            rated = sorted((e for e in visible if e.ratings),
                           key=lambda e: (-e.mean_grade(), order[e.id]))
            unrated = sorted((e for e in visible if not e.ratings),
                             key=lambda e: order[e.id])
            top5 = [entry(e) for e in (rated + unrated)[:5]]
            recent10 = [entry(e) for e in sorted(
                own, key=lambda e: order[e.id], reverse=True)[:10]]
            abusive = [entry(e) for e in own
                       if e.state == EditState.FLAGGED_REMOVED]
            return {"top5": top5, "recent10": recent10, "abusive": abusive}

    def rater_feedback(self, player_id: str) -> dict:
        """Grade histogram, over/under percentages on settled headlines, and
        the 10 most recent ratings."""
        with self._lock:
            self._require_player(player_id)
            history = self._player_ratings.get(player_id, [])
            histogram = {g: 0 for g in GRADES}
            for _, grade, _ in history:
                histogram[grade] += 1
            outcomes = self._settled_outcomes.get(player_id, [])
            over = under = 0
            for grade, mean_others in outcomes:
                verdict = _feedback_from_delta(grade - mean_others)
                if verdict == Feedback.HIGHER:
                    over += 1
                elif verdict == Feedback.LOWER:
                    under += 1
            n = len(outcomes)
            recent10 = [
                {"edit_id": eid, "grade": grade, "at": ev.ts_to_str(at)}
                for eid, grade, at in reversed(history[-10:])
            ]
            return {
                "histogram": histogram,
                "pct_over": 100.0 * over / n if n else 0.0,
                "pct_under": 100.0 * under / n if n else 0.0,
                "recent10": recent10,
            }
