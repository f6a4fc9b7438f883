"""Append-only per-session event log; the sole source of truth.

One UTF-8 file per session, one JSON object per line with exactly the fields
seq, session_id, ts, kind, payload. Appends are durable (flushed and fsynced)
before the engine acknowledges the causing command. Replaying a journal
reconstructs the exact live SessionState, and every prefix of a valid journal
replays to a valid intermediate state.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Sequence

from indigo.engine import SessionState, evolve
from indigo.errors import CorruptionError, StorageError
from indigo.events import ALL_KINDS, TERMINAL_KINDS, Event

_FIELDS = ("seq", "session_id", "ts", "kind", "payload")


def event_to_json(event: Event) -> str:
    record = {
        "seq": event.seq,
        "session_id": event.session_id,
        "ts": event.ts,
        "kind": event.kind,
        "payload": event.payload,
    }
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def event_from_json(line: str, lineno: int = 0) -> Event:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorruptionError(f"line {lineno}: invalid JSON: {exc}") from exc
    if not isinstance(record, dict) or set(record) != set(_FIELDS):
        raise CorruptionError(
            f"line {lineno}: journal record must have exactly fields {list(_FIELDS)}"
        )
    if not isinstance(record["seq"], int) or not isinstance(record["payload"], dict):
        raise CorruptionError(f"line {lineno}: malformed seq or payload")
    return Event(
        seq=record["seq"],
        session_id=str(record["session_id"]),
        ts=str(record["ts"]),
        kind=str(record["kind"]),
        payload=record["payload"],
    )


def _check_append(last: Event | None, event: Event) -> None:
    if event.kind not in ALL_KINDS:
        raise CorruptionError(f"unknown event kind: {event.kind!r}", {"seq": event.seq})
    if last is None:
        if event.seq != 0:
            raise CorruptionError(f"first event must have seq 0, got {event.seq}", {"seq": event.seq})
        if event.kind != "SessionCreated":
            raise CorruptionError(
                f"first event must be SessionCreated, got {event.kind}", {"seq": event.seq}
            )
        return
    if last.kind in TERMINAL_KINDS:
        raise CorruptionError(
            f"session terminated by {last.kind}; no further events accepted", {"seq": event.seq}
        )
    if event.seq != last.seq + 1:
        raise CorruptionError(
            f"seq gap: expected {last.seq + 1}, got {event.seq}", {"seq": event.seq}
        )
    if event.session_id != last.session_id:
        raise CorruptionError(
            f"session_id mismatch: {event.session_id!r} != {last.session_id!r}",
            {"seq": event.seq},
        )


class MemoryJournal:
    """In-memory journal for simulation and tests; same append contract."""

    def __init__(self):
        self.events: list[Event] = []

    @property
    def last(self) -> Event | None:
        return self.events[-1] if self.events else None

    def append(self, event: Event) -> None:
        _check_append(self.last, event)
        self.events.append(event)


class FileJournal:
    """Durable JSONL journal: one file per session, fsync on every append."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.events: list[Event] = []
        if self.path.exists():
            self.events = read_journal(self.path)
        self._handle = None

    @classmethod
    def for_session(cls, data_dir: str | Path, session_id: str) -> "FileJournal":
        return cls(Path(data_dir) / f"{session_id}.journal.jsonl")

    @property
    def last(self) -> Event | None:
        return self.events[-1] if self.events else None

    def append(self, event: Event) -> None:
        _check_append(self.last, event)
        line = event_to_json(event)
        try:
            if self._handle is None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                self._handle = open(self.path, "a", encoding="utf-8")
            self._handle.write(line + "\n")
            self._handle.flush()
            os.fsync(self._handle.fileno())
        except OSError as exc:
            raise StorageError(f"journal write failed: {exc}") from exc
        self.events.append(event)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def read_journal(path: str | Path) -> list[Event]:
    events = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            events.append(event_from_json(line, lineno))
    return events


def replay(events: Sequence[Event] | Iterable[Event]) -> SessionState:
    """Fold a full or truncated journal back into a SessionState.

    Validates the append invariants (dense seq, SessionCreated first, nothing
    after a terminal event) and reports the offending seq on any violation.
    """
    state: SessionState | None = None
    last: Event | None = None
    for event in events:
        _check_append(last, event)
        try:
            state = evolve(state, event.kind, event.payload)
        except CorruptionError:
            raise
        except Exception as exc:
            raise CorruptionError(
                f"replay failed at seq {event.seq} ({event.kind}): {exc}",
                {"seq": event.seq},
            ) from exc
        last = event
    if state is None:
        raise CorruptionError("empty journal: missing SessionCreated")
    return state
