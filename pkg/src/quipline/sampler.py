"""Rating-queue ordering.

Every headline in the pool gets a sampling weight, the product of four
factors: editor volume, editor newness, recency, and rating fill. The
ordering is recomputed on a cadence (default every five minutes) and
cached between refreshes; serving filters the cached order per rater
(own edits, already rated, skipped, and editors the rater has already
rated ten times are excluded).
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, replace
from datetime import datetime
from typing import TYPE_CHECKING

from quipline.errors import CapReached, SuspendedPlayer, UnknownPlayer
from quipline.models import Category, EditState, Standing

if TYPE_CHECKING:
    from quipline.engine import GameEngine

DEFAULT_REFRESH_INTERVAL_S = 300.0
DEFAULT_NEWCOMER_THRESHOLD = 5
DEFAULT_RECENCY_DECAY_HOURS = 24.0


@dataclass(frozen=True)
class SamplerConfig:
    refresh_interval_s: float = DEFAULT_REFRESH_INTERVAL_S
    newcomer_threshold: int = DEFAULT_NEWCOMER_THRESHOLD
    recency_decay_hours: float = DEFAULT_RECENCY_DECAY_HOURS
    jitter_seed: int = 0
    fill_factor_enabled: bool = True  # ablation hook
    pair_cap_enabled: bool = True     # ablation hook


@dataclass(frozen=True)
class SamplingWeight:
    headline_id: str
    w_volume: float
    w_newcomer: float
    w_recency: float
    w_fill: float

    @property
    def weight(self) -> float:
        return self.w_volume * self.w_newcomer * self.w_recency * self.w_fill


def compute_weights(engine: "GameEngine", now: datetime,
                    config: SamplerConfig = SamplerConfig()) -> list[SamplingWeight]:
    """Weights for every in-pool headline at ``now``."""
    out = []
    for edit in engine.in_pool_edits():
        editor = engine.players[edit.editor_id]
        w_volume = 1.0 + math.log2(1.0 + editor.edit_count)
        w_newcomer = 2.0 if engine.received_count(edit.editor_id) < config.newcomer_threshold else 1.0
        age_hours = max((now - edit.created_at).total_seconds(), 0.0) / 3600.0
        w_recency = math.exp(-age_hours / config.recency_decay_hours)
        w_fill = 1.0 + len(edit.ratings) if config.fill_factor_enabled else 1.0
        out.append(SamplingWeight(edit.id, w_volume, w_newcomer, w_recency, w_fill))
    return out


def _jitter(seed: int, headline_id: str) -> float:
    """Stable tie-break in [0, 1): same seed and id always jitter alike."""
    return zlib.crc32(f"{seed}:{headline_id}".encode()) / 2**32


class Sampler:
    """Caches a weight ordering over the pool and serves per-rater slices."""

    def __init__(self, engine: "GameEngine",
                 config: SamplerConfig = SamplerConfig()):
        self.engine = engine
        self.config = config
        self._order: list[str] = []
        self._last_refresh: datetime | None = None

    def set_refresh_interval(self, seconds: float) -> None:
        if seconds <= 0:
            raise ValueError("refresh interval must be positive")
        self.config = replace(self.config, refresh_interval_s=seconds)

    def stale(self, now: datetime) -> bool:
        if self._last_refresh is None:
            return True
        return (now - self._last_refresh).total_seconds() >= self.config.refresh_interval_s

    def refresh(self, now: datetime) -> None:
        weights = compute_weights(self.engine, now, self.config)
        seed = self.config.jitter_seed
        weights.sort(key=lambda w: (-w.weight, _jitter(seed, w.headline_id),
                                    w.headline_id))
        self._order = [w.headline_id for w in weights]
        self._last_refresh = now

    def serve_for_rating(self, rater_id: str, k: int, now: datetime,
                         category: str | None = None) -> list[str]:
        """Top-k eligible headline ids for this rater, best weight first."""
        engine = self.engine
        player = engine.players.get(rater_id)
        if player is None:
            raise UnknownPlayer(f"no player {rater_id!r}")
        if player.standing == Standing.SUSPENDED:
            raise SuspendedPlayer(f"{rater_id} is suspended")
        if player.rating_count >= engine.config.max_ratings:
            raise CapReached("rating cap reached")
        if category is not None:
            category = Category(category).value
        if self.stale(now):
            self.refresh(now)
        rated = engine.rated_set(rater_id)
        cap = engine.config.pair_cap if self.config.pair_cap_enabled else None
        served: list[str] = []
        for eid in self._order:
            edit = engine.edits.get(eid)
            if edit is None or edit.state != EditState.IN_POOL:
                continue  # completed or removed since the last refresh
            if edit.editor_id == rater_id:
                continue
            if eid in rated or eid in player.skipped:
                continue
            if cap is not None and engine.pair_count(rater_id, edit.editor_id) >= cap:
                continue
            if category is not None:
                if engine.sources[edit.source_id].category.value != category:
                    continue
            served.append(eid)
            if len(served) == k:
                break
        return served
