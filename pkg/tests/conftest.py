from datetime import datetime, timedelta, timezone

import pytest

from quipline.engine import GameConfig, GameEngine

T0 = datetime(2024, 1, 1, tzinfo=timezone.utc)

HEADLINES = [
    "Mayor plans to open new bridge downtown",
    "Senate approves budget after long night debate",
    "Scientists discover ancient city under the sea",
    "Local team wins championship after dramatic finish",
    "Tech firm unveils robot that cooks dinner",
    "Storm forces airport to cancel hundred flights",
    "Museum returns stolen painting to rightful owner",
    "Farmers protest new tax on imported machinery",
    "Singer cancels tour after losing her voice",
    "City council votes to ban plastic bottles",
    "Police arrest suspect in downtown bank robbery",
    "New study links coffee to longer life",
]


def at(seconds: float = 0.0, days: float = 0.0) -> datetime:
    return T0 + timedelta(seconds=seconds, days=days)


def add_player(engine: GameEngine, name: str = "ann", now=None) -> str:
    return engine.register_player(name, now or T0)


def add_headline(engine: GameEngine, text: str | None = None,
                 category: str = "politics", replaceable=None,
                 now=None, published=None) -> str:
    if text is None:
        used = len(engine.sources)
        text = HEADLINES[used % len(HEADLINES)]
        if used >= len(HEADLINES):
            text = f"{text} again {used}"
    tokens = text.split()
    if replaceable is None:
        replaceable = set(range(len(tokens)))
    return engine.ingest_headline(
        tokens=tokens, category=category, source_name="wire",
        article_url="http://example.com/a", published_at=published or (now or T0),
        replaceable=replaceable, now=now or T0)


def add_edit(engine: GameEngine, editor: str, source: str, index: int = 1,
             word: str = "zebra", now=None):
    return engine.submit_edit(editor, source, index, word, now or T0)


def rate(engine: GameEngine, rater: str, edit_id: str, grade: int, now=None):
    """Submit a dwell-compliant rating."""
    now = now or T0
    return engine.submit_rating(rater, edit_id, grade,
                                served_at=now - timedelta(seconds=5), now=now)


def rate_out(engine: GameEngine, edit_id: str, grades: list[int],
             raters: list[str], start=None):
    """Rate one edit with the given grades, one rater each."""
    outcomes = []
    base = start or T0
    for i, (rater, grade) in enumerate(zip(raters, grades)):
        outcomes.append(rate(engine, rater, edit_id, grade,
                             now=base + timedelta(seconds=10 * (i + 1))))
    return outcomes


@pytest.fixture
def engine() -> GameEngine:
    return GameEngine(GameConfig())
