"""Quipline: a competitive headline-editing game that turns play into a rated humor dataset.

Players substitute a single word in real news headlines, peers grade the
results on a 0-3 scale, and the engine's incentive machinery (points,
leaderboards, task balancing, anti-abuse checks) keeps the stream of
fully rated headlines flowing. Everything is event-sourced: game state is
a pure fold over an append-only log, so analytics can recompute any
historical metric.
"""

from quipline.engine import GameEngine, GameConfig, compare_to_consensus
from quipline.errors import GameError

__all__ = ["GameEngine", "GameConfig", "GameError", "compare_to_consensus"]

__version__ = "0.1.0"
