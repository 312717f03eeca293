"""HTTP API, sessions, and durable persistence.

All mutations flow through one commit path: the engine command runs under
the service mutex, the new events are fsync-appended to the log, and only
then is the client acknowledged. Startup replays the log (repairing a
torn final line); a mid-file gap or unparseable record halts startup.

Every engine error code maps to exactly one HTTP status; the test suite
asserts the mapping is exhaustive.
"""
from __future__ import annotations

import logging
import secrets
import threading
from contextlib import asynccontextmanager
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from quipline import analytics, scoring
from quipline.config import AppConfig
from quipline.engine import GameEngine
from quipline.errors import GameError, InvalidSession
from quipline.events import LogWriter, read_log, ts_to_str
from quipline.ingestion import Ingestor, LexiconTagger, load_lexicon, poll_feed
from quipline.sampler import Sampler
from quipline.scorer import BuiltinHeuristic, ExternalHttpScorer

logger = logging.getLogger("quipline.service")

ERROR_STATUS = {
    "UNKNOWN_PLAYER": 404,
    "UNKNOWN_HEADLINE": 404,
    "SUSPENDED_PLAYER": 403,
    "CAP_REACHED": 409,
    "PAIR_CAP_REACHED": 409,
    "DUPLICATE_RATING": 409,
    "SELF_RATING": 409,
    "SELF_FLAG": 409,
    "ALREADY_REMOVED": 409,
    "HEADLINE_NOT_IN_POOL": 409,
    "HEADLINE_NOT_AVAILABLE": 409,
    "EMPTY_DATASET": 409,
    "TOO_FAST": 429,
    "GRADE_OUT_OF_RANGE": 400,
    "NOT_REPLACEABLE_INDEX": 400,
    "SUBSTITUTE_EQUALS_ORIGINAL": 400,
    "NOT_SINGLE_WORD": 400,
    "BLACKLISTED_WORD": 400,
    "EMPTY_OTHERS": 400,
    "EMPTY_TEXT": 400,
    "INVALID_CATEGORY": 400,
    "NOT_SINGLE_SUBSTITUTION": 400,
    "INSUFFICIENT_DATA": 400,
    "NOT_FULLY_RATED": 400,
    "UNKNOWN_KNOB": 400,
    "INVALID_SESSION": 401,
    "CORRUPT_LOG": 500,
}


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class GameService:
    """Engine + persistence + sessions behind the HTTP app."""

    def __init__(self, config: AppConfig, log_path: str | Path):
        self.config = config
        self.log_path = Path(log_path)
        if self.log_path.exists() and self.log_path.stat().st_size > 0:
            events, repaired = read_log(self.log_path, repair=True)
            if repaired:
                logger.warning("dropped a partial trailing record from %s",
                               self.log_path)
                # rewrite so the partial bytes don't corrupt later appends
                from quipline.events import write_log
                write_log(events, self.log_path)
            self.engine = GameEngine.replay(events, config.game)
            logger.info("replayed %d events from %s", len(events), self.log_path)
        else:
            self.engine = GameEngine(config.game)
        self._persisted = len(self.engine.log)
        self.writer = LogWriter(self.log_path)
        self._mutex = threading.Lock()

        lexicon = load_lexicon(config.ingestion.lexicon_file)
        self.tagger = LexiconTagger(lexicon)
        self.ingestor = Ingestor(
            self.engine, self.tagger, daily_cap=config.ingestion.daily_cap,
            min_tokens=config.ingestion.min_tokens,
            max_tokens=config.ingestion.max_tokens)
        self.sampler = Sampler(self.engine, config.sampler)

        builtin = BuiltinHeuristic(config.scorer.weights, self.tagger)
        if config.scorer.plugin == "external" and config.scorer.endpoint:
            plugin = ExternalHttpScorer(config.scorer.endpoint,
                                        config.scorer.timeout_s, builtin)
        else:
            plugin = builtin
        self.scorer = plugin
        self.engine.scorer = plugin.estimate

        self.sessions: dict[str, tuple[str, datetime]] = {}
        self.served: dict[tuple[str, str], datetime] = {}
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    # -------------------------------------------------------------- commits

    def commit(self, command):
        """Run a mutating engine command, fsync its events, then return.

        The ack a caller sees therefore implies the events are on disk; a
        crash before the append loses only unacknowledged work.
        """
        with self._mutex:
            result = command()
            new_events = self.engine.log[self._persisted:]
            if new_events:
                self.writer.append(new_events)
                self._persisted = len(self.engine.log)
            return result

    # -------------------------------------------------------------- sessions

    def create_session(self, player_id: str, now: datetime) -> dict:
        self.engine._require_player(player_id)
        token = secrets.token_urlsafe(16)
        expires = now + timedelta(seconds=self.config.service.session_ttl_s)
        self.sessions[token] = (player_id, expires)
        return {"token": token, "player_id": player_id,
                "expires_at": ts_to_str(expires)}

    def session_player(self, token: str | None, now: datetime) -> str:
        if not token or token not in self.sessions:
            raise InvalidSession("missing or unknown session token")
        player_id, expires = self.sessions[token]
        if now >= expires:
            del self.sessions[token]
            raise InvalidSession("session expired")
        return player_id

    # -------------------------------------------------------------- feeds

    def poll_feeds_once(self, now: datetime | None = None) -> int:
        now = now or utcnow()
        admitted = 0
        for feed in self.config.feeds:
            try:
                report = self.commit(lambda f=feed: poll_feed(self.ingestor, f, now))
                admitted += report.admitted
            except Exception:
                logger.exception("feed %s failed", feed.location)
        return admitted

    def start_background(self) -> None:
        if self.config.feeds:
            def poll_loop():
                while not self._stop.wait(min(f.poll_interval_s
                                              for f in self.config.feeds)):
                    self.poll_feeds_once()
            t = threading.Thread(target=poll_loop, daemon=True)
            t.start()
            self._threads.append(t)

        def refresh_loop():
            while not self._stop.wait(self.sampler.config.refresh_interval_s):
                self.sampler.refresh(utcnow())
        t = threading.Thread(target=refresh_loop, daemon=True)
        t.start()
        self._threads.append(t)

    def stop_background(self) -> None:
        self._stop.set()

    def close(self) -> None:
        self.stop_background()
        self.writer.close()


# ---------------------------------------------------------------- request bodies

class PlayerBody(BaseModel):
    display_name: str
    idempotency_key: Optional[str] = None


class SessionBody(BaseModel):
    player_id: str


class EditBody(BaseModel):
    headline_id: str
    index: int
    word: str
    idempotency_key: Optional[str] = None


class RatingBody(BaseModel):
    edit_id: str
    grade: int
    idempotency_key: Optional[str] = None


class FlagBody(BaseModel):
    edit_id: str


class SkipBody(BaseModel):
    headline_id: str


class ReinstateBody(BaseModel):
    edit_id: str


class SuspendBody(BaseModel):
    player_id: str
    reason: str = "moderation"


# ---------------------------------------------------------------- app factory

def build_app(service: GameService) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        service.poll_feeds_once()
        service.start_background()
        yield
        service.stop_background()

    app = FastAPI(title="quipline", version="0.1.0", lifespan=lifespan)
    app.state.service = service
    engine = service.engine

    @app.exception_handler(GameError)
    async def game_error_handler(request: Request, exc: GameError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(status_code=status,
                            content={"error": exc.code, "message": str(exc)})

    def player_from(x_session: str | None) -> str:
        return service.session_player(x_session, utcnow())

    def require_admin(x_admin_token: str | None) -> None:
        expected = service.config.service.admin_token
        if expected and x_admin_token != expected:
            raise InvalidSession("admin token required")

    # ---------------------------------------------------------- plumbing

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "seq": engine.seq}

    @app.get("/stats")
    def stats():
        return {
            "seq": engine.seq,
            "players": len(engine.players),
            "sources": len(engine.sources),
            "edits": len(engine.edits),
            "ratings": sum(p.rating_count for p in engine.players.values()),
            "fully_rated": len(engine.completed_edits()),
        }

    # ---------------------------------------------------------- players

    @app.post("/players")
    def create_player(body: PlayerBody):
        player_id = service.commit(
            lambda: engine.register_player(body.display_name, utcnow(),
                                           body.idempotency_key))
        return {"player_id": player_id}

    @app.post("/session")
    def create_session(body: SessionBody):
        return service.create_session(body.player_id, utcnow())

    # ---------------------------------------------------------- editing

    @app.get("/headlines/editable")
    def editable(category: Optional[str] = None,
                 limit: int = Query(default=50, ge=1, le=500),
                 x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        rows = engine.list_editable(player_id, category=category, limit=limit)
        return {"items": [
            {
                "headline_id": s.id,
                "text": s.text,
                "tokens": s.tokens,
                "replaceable": sorted(s.replaceable),
                "category": s.category.value,
                "source_name": s.source_name,
                "article_url": s.article_url,
                "published_at": ts_to_str(s.published_at),
            }
            for s in rows
        ]}

    @app.post("/edits")
    def submit_edit(body: EditBody,
                    x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        result = service.commit(
            lambda: engine.submit_edit(player_id, body.headline_id, body.index,
                                       body.word, utcnow(),
                                       body.idempotency_key))
        return {"edit_id": result.edit_id, "estimate": result.estimate,
                "estimate_source": result.estimate_source}

    # ---------------------------------------------------------- rating

    @app.get("/rate-queue")
    def rate_queue(k: int = Query(default=10, ge=1, le=100),
                   category: Optional[str] = None,
                   x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        now = utcnow()
        ids = service.sampler.serve_for_rating(player_id, k, now,
                                               category=category)
        items = []
        for eid in ids:
            service.served[(player_id, eid)] = now
            edit = engine.edits[eid]
            source = engine.sources[edit.source_id]
            items.append({
                "edit_id": eid,
                "text": engine.edited_text(eid),
                "category": source.category.value,
                "source_name": source.source_name,
                "published_at": ts_to_str(source.published_at),
            })
        return {"items": items}

    @app.post("/ratings")
    def submit_rating(body: RatingBody,
                      x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        now = utcnow()
        # server-side serve time; rating an item that was never served is
        # treated as zero dwell and bounces off the minimum-dwell check
        served_at = service.served.get((player_id, body.edit_id), now)
        outcome = service.commit(
            lambda: engine.submit_rating(player_id, body.edit_id, body.grade,
                                         served_at, now, body.idempotency_key))
        return {
            "accepted": outcome.accepted,
            "count": outcome.count,
            "settled": outcome.settled,
            "feedback": outcome.feedback.value if outcome.feedback else None,
        }

    @app.post("/flags")
    def flag(body: FlagBody, x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        service.commit(lambda: engine.flag_headline(player_id, body.edit_id,
                                                    utcnow()))
        return {"ok": True}

    @app.post("/skips")
    def skip(body: SkipBody, x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        service.commit(lambda: engine.skip_headline(player_id, body.headline_id,
                                                    utcnow()))
        return {"ok": True}

    # ---------------------------------------------------------- boards & feedback

    @app.get("/leaderboards")
    def leaderboards():
        boards = scoring.leaderboards(engine, utcnow(),
                                      service.config.game.scoring)
        return {
            "points_board": [
                {"rank": e.rank, "player": e.player_id, "value": e.value}
                for e in boards.points_board],
            "mean_rating_board": [
                {"rank": e.rank, "player": e.player_id, "value": e.value}
                for e in boards.mean_rating_board],
            "top10_funny": [
                {"rank": f.rank, "edit_id": f.edit_id, "editor": f.editor_id,
                 "text": f.text, "value": f.value}
                for f in boards.top10_funny],
        }

    @app.get("/me/feedback")
    def my_feedback(x_session: Optional[str] = Header(default=None)):
        player_id = player_from(x_session)
        player = engine.players[player_id]
        cfg = service.config.game.scoring
        return {
            "player_id": player_id,
            "standing": player.standing.value,
            "editor": engine.editor_feedback(player_id),
            "rater": engine.rater_feedback(player_id),
            "counts": {"edits": player.edit_count,
                       "ratings": player.rating_count},
            "qualified": scoring.is_qualified(player.edit_count,
                                              player.rating_count, cfg),
            "advice": scoring.balance_advice(player.edit_count,
                                             player.rating_count, cfg),
        }

    # ---------------------------------------------------------- analytics

    @app.get("/report")
    def report(budget_cents: Optional[float] = None):
        budget = budget_cents if budget_cents is not None \
            else service.config.service.budget_cents
        quality = analytics.quality_report(engine, budget)
        return {
            "quality": quality.rendered(),
            "quality_raw": {
                "size": quality.size,
                "mean_funniness": quality.mean_funniness,
                "cost_per_datum_cents": quality.cost_per_datum_cents,
                "alpha": quality.alpha,
                "unique_word_pct": quality.unique_word_pct,
                "editor_count": quality.editor_count,
                "rater_count": quality.rater_count,
            },
            "categories": analytics.category_report(engine),
        }

    @app.get("/export")
    def export():
        payload = analytics.export_bytes(engine)
        return Response(content=payload, media_type="text/csv")

    # ---------------------------------------------------------- admin

    @app.post("/admin/reinstate")
    def reinstate(body: ReinstateBody,
                  x_admin_token: Optional[str] = Header(default=None)):
        require_admin(x_admin_token)
        service.commit(lambda: engine.reinstate_headline(body.edit_id, utcnow()))
        return {"ok": True}

    @app.post("/admin/suspend")
    def suspend(body: SuspendBody,
                x_admin_token: Optional[str] = Header(default=None)):
        require_admin(x_admin_token)
        service.commit(lambda: engine.suspend_player(body.player_id, utcnow(),
                                                     body.reason))
        return {"ok": True}

    return app


def create_app(config: AppConfig | None = None,
               log_path: str | Path = "quipline-events.ndjson") -> FastAPI:
    service = GameService(config or AppConfig(), log_path)
    return build_app(service)
