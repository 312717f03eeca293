"""Append-only event log.

One event per line of newline-delimited JSON, each record carrying the
sequence number, an ISO-8601 timestamp, the event kind, and the payload
fields flattened alongside. Sequence numbers start at 1 and are
consecutive; a gap or regression means the log is corrupt. A partial
final line (crash mid-append) is repairable by dropping it.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from quipline.errors import CorruptLog

PLAYER_JOINED = "player_joined"
HEADLINE_INGESTED = "headline_ingested"
EDIT_SUBMITTED = "edit_submitted"
RATING_SUBMITTED = "rating_submitted"
HEADLINE_FLAGGED = "headline_flagged"
HEADLINE_SKIPPED = "headline_skipped"
PLAYER_WARNED = "player_warned"
PLAYER_SUSPENDED = "player_suspended"
HEADLINE_REINSTATED = "headline_reinstated"

EVENT_KINDS = frozenset({
    PLAYER_JOINED,
    HEADLINE_INGESTED,
    EDIT_SUBMITTED,
    RATING_SUBMITTED,
    HEADLINE_FLAGGED,
    HEADLINE_SKIPPED,
    PLAYER_WARNED,
    PLAYER_SUSPENDED,
    HEADLINE_REINSTATED,
})


def ts_to_str(at: datetime) -> str:
    return at.astimezone(timezone.utc).isoformat()


def ts_from_str(raw: str) -> datetime:
    return datetime.fromisoformat(raw.replace("Z", "+00:00"))


@dataclass(frozen=True)
class GameEvent:
    seq: int
    at: datetime
    kind: str
    data: dict = field(default_factory=dict)

    def to_line(self) -> str:
        record = {"seq": self.seq, "at": ts_to_str(self.at), "kind": self.kind}
        record.update(self.data)
        return json.dumps(record, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str) -> "GameEvent":
        record = json.loads(line)
        return cls(
            seq=record.pop("seq"),
            at=ts_from_str(record.pop("at")),
            kind=record.pop("kind"),
            data=record,
        )


def validate_sequence(events: Iterable[GameEvent]) -> None:
    """Raise CorruptLog on the first gap or non-monotone sequence number."""
    expected = 1
    for ev in events:
        if ev.seq != expected:
            raise CorruptLog(
                f"expected seq {expected}, found {ev.seq}", seq=ev.seq)
        expected += 1


def write_log(events: Iterable[GameEvent], path: str | Path) -> int:
    """Write a whole log file atomically-ish (truncate then append all)."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(ev.to_line() + "\n")
            n += 1
    return n


def read_log(path: str | Path, repair: bool = True) -> tuple[list[GameEvent], bool]:
    """Read an event log.

    Returns (events, repaired). With ``repair`` a trailing partial record is
    dropped and ``repaired`` is True; damage anywhere else raises CorruptLog
    with the offending sequence number.
    """
    events: list[GameEvent] = []
    repaired = False
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    lines = raw.split("\n")
    trailing_complete = raw.endswith("\n")
    if trailing_complete or lines[-1] == "":
        lines = lines[:-1] if lines and lines[-1] == "" else lines
        tail_partial = False
    else:
        tail_partial = True
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        is_last = i == len(lines) - 1
        try:
            events.append(GameEvent.from_line(line))
        except (json.JSONDecodeError, KeyError, ValueError):
            if repair and is_last and tail_partial:
                repaired = True
                break
            raise CorruptLog(
                f"unparseable record at line {i + 1}",
                seq=events[-1].seq + 1 if events else 1,
            )
    validate_sequence(events)
    return events, repaired


class LogWriter:
    """Durable appender: every event is flushed and fsynced before the
    caller acknowledges it."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, events: Iterable[GameEvent]) -> None:
        for ev in events:
            self._fh.write(ev.to_line() + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        self._fh.close()
