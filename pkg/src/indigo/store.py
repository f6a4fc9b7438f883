"""Live session registry: single-writer command execution over the journal.

Every mutation funnels through the session's condition lock, appends its
events durably, then folds them into the in-memory state, so the journal and
the state can never diverge (a failed write halts the session instead).
Reads take consistent snapshots under the same lock; long-polls wait on the
condition. Different sessions are fully independent.
"""

from __future__ import annotations

import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Sequence

from indigo import engine
from indigo import events as ev
from indigo.engine import Phase, SessionState
from indigo.errors import (
    AuthorizationError,
    ConflictError,
    NotFoundError,
    StaleTargetError,
    StorageError,
    ValidationError,
)
from indigo.events import Event, EventDraft
from indigo.journal import FileJournal, MemoryJournal
from indigo.model import Goal, ScoreVector, ScoringSchema
from indigo.participants import Capability, ParticipantDescriptor, Role
from indigo.plan import ProposalDraft
from indigo.scoring import ConvergenceConfig

Clock = Callable[[], datetime]

_OWED_CAPABILITY = {
    Phase.AWAITING_SCORES: Capability.SCORER,
    Phase.AWAITING_PROPOSALS: Capability.PROPOSER,
    Phase.AWAITING_VOTES: Capability.VOTER,
}


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _done_ids(state: SessionState) -> frozenset[str]:
    cur = state.current
    if state.phase == Phase.AWAITING_SCORES:
        return cur.scored_ids()
    if state.phase == Phase.AWAITING_PROPOSALS:
        return cur.proposed_ids()
    if state.phase == Phase.AWAITING_VOTES:
        return cur.voted_ids()
    return frozenset()


def pending_participants(state: SessionState) -> list[ParticipantDescriptor]:
    """Roster members who still owe an action in the current phase."""
    capability = _OWED_CAPABILITY.get(state.phase)
    if capability is None:
        return []
    done = _done_ids(state)
    return [p for p in state.with_capability(capability) if p.participant_id not in done]


class LiveSession:
    def __init__(self, state: SessionState, journal, tokens: dict[str, str], now: datetime):
        self.state = state
        self.journal = journal
        self.tokens = tokens
        self.cond = threading.Condition()
        self.phase_entered_at = now
        self.halted = False

    @property
    def events(self) -> list[Event]:
        return self.journal.events


class SessionManager:
    """Owns all live sessions in a process.

    data_dir=None keeps journals in memory (simulation and tests); otherwise
    each session writes <session_id>.journal.jsonl under data_dir.
    ai_timeout_seconds bounds how long a phase waits for AI participants
    before they are abstained; humans never time out.
    """

    def __init__(
        self,
        data_dir: str | Path | None = None,
        clock: Clock = utc_now,
        ai_timeout_seconds: float | None = 60.0,
    ):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.clock = clock
        self.ai_timeout_seconds = ai_timeout_seconds
        self._sessions: dict[str, LiveSession] = {}
        self._registry_lock = threading.Lock()

    # -- lifecycle ----------------------------------------------------------

    def create_session(
        self,
        goal: Goal,
        schema: ScoringSchema,
        initial_weights: Sequence[float],
        initial_plan_items: Sequence[str],
        roster: Sequence[ParticipantDescriptor],
        convergence: ConvergenceConfig | None = None,
        merge_mode: str = engine.MERGE_MEAN,
        session_id: str | None = None,
    ) -> LiveSession:
        sid = session_id or uuid.uuid4().hex[:12]
        state, drafts = engine.create_session(
            goal=goal,
            schema=schema,
            initial_weights=initial_weights,
            initial_plan_items=initial_plan_items,
            roster=roster,
            convergence=convergence,
            session_id=sid,
            merge_mode=merge_mode,
        )
        if self.data_dir is not None:
            journal = FileJournal.for_session(self.data_dir, sid)
            if journal.events:
                raise ConflictError(f"journal for session {sid!r} already exists")
        else:
            journal = MemoryJournal()

        with self._registry_lock:
            if sid in self._sessions:
                raise ConflictError(f"session {sid!r} already exists")
            tokens = {p.participant_id: uuid.uuid4().hex for p in roster}
            live = LiveSession(state, journal, tokens, self.clock())
            self._sessions[sid] = live

        with live.cond:
            self._append_drafts(live, drafts)
            live.state = state
            live.cond.notify_all()
        return live

    def get(self, session_id: str) -> LiveSession:
        with self._registry_lock:
            live = self._sessions.get(session_id)
        if live is None:
            raise NotFoundError(f"unknown session: {session_id!r}")
        return live

    def session_ids(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._sessions)

    def authorize(self, live: LiveSession, participant_id: str, token: str | None) -> None:
        expected = live.tokens.get(participant_id)
        if expected is None:
            raise NotFoundError(f"unknown participant: {participant_id!r}")
        if token != expected:
            raise AuthorizationError(f"bad token for participant {participant_id!r}")

    # -- command execution --------------------------------------------------

    def _append_drafts(self, live: LiveSession, drafts: Sequence[EventDraft]) -> list[Event]:
        """Durably append; on write failure fold what made it in and halt."""
        appended: list[EventDraft] = []
        out: list[Event] = []
        ts = self.clock().isoformat()
        try:
            for draft in drafts:
                last = live.journal.last
                event = Event(
                    seq=(last.seq + 1) if last else 0,
                    session_id=live.state.session_id,
                    ts=ts,
                    kind=draft.kind,
                    payload=draft.payload,
                )
                live.journal.append(event)
                appended.append(draft)
                out.append(event)
        except StorageError:
            live.state = engine.fold(live.state, appended)
            live.halted = True
            live.cond.notify_all()
            raise
        return out

    def _run_locked(
        self, live: LiveSession, op: Callable[[SessionState], tuple[SessionState, list[EventDraft]]]
    ) -> tuple[SessionState, list[Event]]:
        """Run one engine command plus the applies it unlocks. Caller holds cond."""
        if live.halted:
            raise StorageError("session halted after a journal write failure")
        before_phase = live.state.phase
        new_state, drafts = op(live.state)
        events = self._append_drafts(live, drafts)
        live.state = new_state
        # The applying phase is transient: the winner is applied in the same
        # command exchange, since clients have no apply endpoint.
        while live.state.phase == Phase.APPLYING:
            applied_state, applied_drafts = engine.apply_winning(live.state)
            events += self._append_drafts(live, applied_drafts)
            live.state = applied_state
        if live.state.phase != before_phase:
            live.phase_entered_at = self.clock()
        live.cond.notify_all()
        return live.state, events

    def execute(
        self,
        session_id: str,
        op: Callable[[SessionState], tuple[SessionState, list[EventDraft]]],
    ) -> tuple[SessionState, list[Event]]:
        live = self.get(session_id)
        with live.cond:
            self._expire_ai_locked(live)
            return self._run_locked(live, op)

    def submit_scores(self, session_id: str, participant_id: str, scores: ScoreVector):
        return self.execute(session_id, lambda s: engine.submit_scores(s, participant_id, scores))

    def submit_proposal(self, session_id: str, participant_id: str, draft: ProposalDraft):
        live = self.get(session_id)
        with live.cond:
            self._expire_ai_locked(live)
            try:
                return self._run_locked(
                    live, lambda s: engine.submit_proposal(s, participant_id, draft)
                )
            except StaleTargetError as exc:
                # Audit the rejection; the proposer may resubmit within the phase.
                self._append_drafts(
                    live,
                    [
                        EventDraft(
                            ev.PROPOSAL_REJECTED,
                            {
                                "participant": participant_id,
                                "reason": exc.message,
                                "details": dict(exc.details),
                            },
                        )
                    ],
                )
                live.cond.notify_all()
                raise

    def cast_ballot(self, session_id: str, participant_id: str, choice: str):
        return self.execute(session_id, lambda s: engine.cast_ballot(s, participant_id, choice))

    def abstain(self, session_id: str, participant_id: str):
        return self.execute(session_id, lambda s: engine.abstain(s, participant_id))

    def update_weights(self, session_id: str, participant_id: str, raw: Sequence[float]):
        return self.execute(session_id, lambda s: engine.update_weights(s, participant_id, raw))

    def abandon(self, session_id: str, participant_id: str, reason: str):
        return self.execute(session_id, lambda s: engine.abandon(s, participant_id, reason))

    def append_adapter_exchange(
        self,
        session_id: str,
        participant_id: str,
        request_body: str,
        response_body: str | None,
        error: str | None = None,
    ) -> None:
        """Audit record of one remote model call; no state effect."""
        live = self.get(session_id)
        with live.cond:
            if live.halted or live.state.is_terminal:
                return
            payload: dict[str, Any] = {
                "participant": participant_id,
                "phase": live.state.phase.value,
                "request": request_body,
                "response": response_body,
            }
            if error is not None:
                payload["error"] = error
            self._append_drafts(live, [EventDraft(ev.ADAPTER_EXCHANGE, payload)])
            live.cond.notify_all()

    # -- reads ---------------------------------------------------------------

    def snapshot(self, session_id: str) -> dict:
        live = self.get(session_id)
        with live.cond:
            self._expire_ai_locked(live)
            return engine.state_to_wire(live.state)

    def events_after(
        self, session_id: str, after: int, wait_seconds: float = 0.0
    ) -> list[Event]:
        """Events with seq > after; blocks up to wait_seconds for new ones."""
        live = self.get(session_id)
        deadline = self.clock().timestamp() + wait_seconds
        with live.cond:
            while True:
                self._expire_ai_locked(live)
                fresh = [e for e in live.events if e.seq > after]
                remaining = deadline - self.clock().timestamp()
                if fresh or remaining <= 0:
                    return fresh
                # Wake periodically so AI phase deadlines fire during the wait.
                live.cond.wait(timeout=min(remaining, 0.5))

    # -- AI phase timeouts ----------------------------------------------------

    def _expire_ai_locked(self, live: LiveSession) -> None:
        if self.ai_timeout_seconds is None or live.halted:
            return
        if live.state.phase not in _OWED_CAPABILITY:
            return
        waited = (self.clock() - live.phase_entered_at).total_seconds()
        if waited < self.ai_timeout_seconds:
            return
        entry_phase = live.state.phase
        for p in pending_participants(live.state):
            if p.role != Role.AI:
                continue
            try:
                self._run_locked(live, lambda s, pid=p.participant_id: engine.abstain(s, pid))
            except (ValidationError, ConflictError, AuthorizationError):
                continue  # e.g. the last scorer with no submissions; keep waiting
            if live.state.phase != entry_phase:
                break  # a new phase started; its own deadline applies
