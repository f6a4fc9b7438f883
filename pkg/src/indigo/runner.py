"""Headless session driving: scripted humans, oracle AIs, remote adapters.

A driver answers for one participant whenever the loop owes an action from
them. run_session repeatedly snapshots the session, finds the next pending
participant with a driver, and executes their move until the session reaches
a terminal phase. The simulation harness runs batches of pure oracle sessions
and reports iterations-to-converge per seed.
"""

from __future__ import annotations

import queue
import threading
from dataclasses import dataclass
from typing import Protocol, Sequence

from indigo.engine import HOLD_STEADY, Phase, SessionState
from indigo.errors import (
    ConflictError,
    IndigoError,
    PhaseError,
    UpstreamAdapterError,
    ValidationError,
)
from indigo.model import Criterion, Goal, ScoreVector, ScoringSchema, preset_schema
from indigo.participants import Capability, ParticipantDescriptor, Role
from indigo.participants.adapter import RemoteParticipant, Transport, http_transport
from indigo.participants.grammar import build_prompt
from indigo.participants.oracle import (
    OracleConfig,
    oracle_propose,
    oracle_score,
    oracle_vote,
    pick_best_claimed,
)
from indigo.plan import ProposalDraft
from indigo.scoring import ConvergenceConfig
from indigo.serialize import (
    convergence_from_wire,
    draft_from_wire,
    goal_from_wire,
    schema_from_wire,
)
from indigo.store import SessionManager, pending_participants


class Driver(Protocol):
    """Answers for one participant. None always means abstain."""

    def scores(self, state: SessionState) -> ScoreVector | None: ...
    def propose(self, state: SessionState) -> ProposalDraft | None: ...
    def vote(self, state: SessionState) -> str | None: ...


class OracleDriver:
    def __init__(self, config: OracleConfig):
        self.config = config

    def scores(self, state: SessionState) -> ScoreVector | None:
        return oracle_score(self.config, state.plan)

    def propose(self, state: SessionState) -> ProposalDraft | None:
        return oracle_propose(self.config, state.plan, state.schema, state.weights)

    def vote(self, state: SessionState) -> str | None:
        return oracle_vote(self.config, state.current.proposals, state.weights)


VOTE_BEST_CLAIMED = "best_claimed"
VOTE_HOLD_STEADY = "hold_steady"


class ScriptedDriver:
    """Plays the human seat from a config script.

    scores: list of [s1, s2, s3] rows, one per iteration; the last row repeats
    once the script runs out. votes: "best_claimed" (default) or
    "hold_steady". proposals: optional list of proposal dicts keyed by
    iteration (1-based); otherwise the participant abstains from proposing.
    """

    def __init__(self, script: dict):
        rows = script.get("scores") or []
        if not rows:
            raise ValidationError("scripted participant needs at least one scores row")
        self._rows = [ScoreVector.of(*[float(v) for v in row]) for row in rows]
        self._vote_policy = script.get("votes", VOTE_BEST_CLAIMED)
        if self._vote_policy not in (VOTE_BEST_CLAIMED, VOTE_HOLD_STEADY):
            raise ValidationError(f"unknown vote policy: {self._vote_policy!r}")
        self._proposals = {
            int(k): draft_from_wire(v) for k, v in (script.get("proposals") or {}).items()
        }

    def scores(self, state: SessionState) -> ScoreVector | None:
        idx = min(state.current.index - 1, len(self._rows) - 1)
        return self._rows[idx]

    def propose(self, state: SessionState) -> ProposalDraft | None:
        return self._proposals.get(state.current.index)

    def vote(self, state: SessionState) -> str | None:
        if self._vote_policy == VOTE_HOLD_STEADY:
            return HOLD_STEADY
        return pick_best_claimed(state.current.proposals, state.weights)


class AdapterDriver:
    """Bridges a remote text model into the loop; logs every exchange."""

    def __init__(
        self,
        descriptor: ParticipantDescriptor,
        manager: SessionManager,
        session_id: str,
        transport: Transport = http_transport,
    ):
        self.descriptor = descriptor
        self._remote = RemoteParticipant(
            descriptor,
            transport=transport,
            exchange_log=lambda req, resp, err: manager.append_adapter_exchange(
                session_id, descriptor.participant_id, req, resp, err
            ),
        )

    def _respond(self, state: SessionState):
        prompt = build_prompt(
            state.goal,
            state.schema,
            state.weights,
            state.plan,
            state.phase,
            proposals=state.current.proposals if state.current else (),
        )
        return self._remote.respond(prompt, state.phase, state.plan)

    def scores(self, state: SessionState) -> ScoreVector | None:
        return self._respond(state)

    def propose(self, state: SessionState) -> ProposalDraft | None:
        return self._respond(state)

    def vote(self, state: SessionState) -> str | None:
        return self._respond(state)


def step_participant(
    manager: SessionManager, session_id: str, driver: Driver, participant_id: str,
    state: SessionState,
) -> None:
    """Execute one pending participant's move for the current phase."""
    try:
        if state.phase == Phase.AWAITING_SCORES:
            answer = driver.scores(state)
            if answer is None:
                manager.abstain(session_id, participant_id)
            else:
                manager.submit_scores(session_id, participant_id, answer)
        elif state.phase == Phase.AWAITING_PROPOSALS:
            draft = driver.propose(state)
            if draft is None:
                manager.abstain(session_id, participant_id)
            else:
                manager.submit_proposal(session_id, participant_id, draft)
        elif state.phase == Phase.AWAITING_VOTES:
            choice = driver.vote(state)
            if choice is None:
                manager.abstain(session_id, participant_id)
            else:
                manager.cast_ballot(session_id, participant_id, choice)
    except UpstreamAdapterError:
        manager.abstain(session_id, participant_id)


def run_session(
    manager: SessionManager,
    session_id: str,
    drivers: dict[str, Driver],
    max_commands: int = 100_000,
) -> SessionState:
    """Drive a session until it reaches a terminal phase."""
    live = manager.get(session_id)
    for _ in range(max_commands):
        with live.cond:
            state = live.state
        if state.is_terminal:
            return state
        pending = pending_participants(state)
        if not pending:
            raise RuntimeError(f"phase {state.phase.value} has nobody pending and did not advance")
        actor = next((p for p in pending if p.participant_id in drivers), None)
        if actor is None:
            raise RuntimeError(
                f"no driver for pending participants {[p.participant_id for p in pending]}"
            )
        step_participant(manager, session_id, drivers[actor.participant_id], actor.participant_id, state)
    raise RuntimeError(f"session did not terminate within {max_commands} commands")


# ---------------------------------------------------------------------------
# Oracle simulation batches
# ---------------------------------------------------------------------------

_DEFAULT_GOAL = Goal(
    title="Cover the hidden target",
    statement="Refine the plan until it covers every hidden target keyword.",
    success_criteria="All three criteria score 10.0.",
)

# Seed offset separating the AI oracle's noise stream from the human's.
_AI_SEED_OFFSET = 100_003


@dataclass(frozen=True)
class SimulationResult:
    seed: int
    iterations: int
    converged: bool
    initial_aggregate: float
    final_aggregate: float


def _schema_from_spec(spec: dict) -> ScoringSchema:
    raw = spec.get("schema")
    if raw is None:
        return preset_schema("iron_triangle")
    if "preset" in raw:
        third = raw.get("third_criterion")
        return preset_schema(
            raw["preset"],
            Criterion(str(third["name"]), str(third.get("description", ""))) if third else None,
        )
    return schema_from_wire(raw)


def build_oracle_session(
    manager: SessionManager, spec: dict, seed: int, session_id: str | None = None
) -> tuple[str, dict[str, Driver]]:
    """Create a two-seat oracle session (scripted human + scripted AI).

    Both seats score, propose, and vote from the same hidden target; the seed
    separates their noise streams so noisy scorers disagree realistically.
    """
    base = OracleConfig.from_wire(spec)
    human_cfg = OracleConfig(
        base.hidden_target, base.noise_half_units, base.proposal_policy, seed
    )
    ai_cfg = OracleConfig(
        base.hidden_target, base.noise_half_units, base.proposal_policy, seed + _AI_SEED_OFFSET
    )
    caps = (Capability.SCORER, Capability.PROPOSER, Capability.VOTER)
    roster = [
        ParticipantDescriptor("expert", Role.HUMAN, caps),
        ParticipantDescriptor("indigo-ai", Role.AI, caps),
    ]
    goal = goal_from_wire(spec["goal"]) if "goal" in spec else _DEFAULT_GOAL
    weights = spec.get("weights", [1, 1, 1])
    plan_items = spec.get("initial_plan", ["Initial outline."])
    convergence = (
        convergence_from_wire(spec["convergence"]) if "convergence" in spec else ConvergenceConfig()
    )
    live = manager.create_session(
        goal=goal,
        schema=_schema_from_spec(spec),
        initial_weights=weights,
        initial_plan_items=plan_items,
        roster=roster,
        convergence=convergence,
        session_id=session_id,
    )
    drivers: dict[str, Driver] = {
        "expert": OracleDriver(human_cfg),
        "indigo-ai": OracleDriver(ai_cfg),
    }
    return live.state.session_id, drivers


def simulate_seed(spec: dict, seed: int, manager: SessionManager | None = None) -> SimulationResult:
    manager = manager or SessionManager(ai_timeout_seconds=None)
    session_id, drivers = build_oracle_session(manager, spec, seed)
    final = run_session(manager, session_id, drivers)
    return SimulationResult(
        seed=seed,
        iterations=len(final.iterations),
        converged=final.phase == Phase.CONVERGED,
        initial_aggregate=final.iterations[0].aggregate,
        final_aggregate=final.iterations[-1].aggregate,
    )


def simulate_seeds(spec: dict, seeds: Sequence[int]) -> list[SimulationResult]:
    return [simulate_seed(spec, seed) for seed in seeds]


# ---------------------------------------------------------------------------
# Background driving of adapter-configured AI seats (serve mode)
# ---------------------------------------------------------------------------


class AdapterAutoDriver:
    """Worker thread that answers for remote-AI seats whenever they owe an
    action. The HTTP layer pokes it after every state-changing request; all
    commands still serialize through the session's single writer, so races
    with human requests simply turn into conflict errors that are ignored."""

    def __init__(self, manager: SessionManager, transport: Transport = http_transport):
        self.manager = manager
        self.transport = transport
        self._queue: "queue.SimpleQueue[str]" = queue.SimpleQueue()
        self._thread: threading.Thread | None = None
        self._stopping = False

    def start(self) -> None:
        if self._thread is None:
            self._thread = threading.Thread(target=self._loop, daemon=True)
            self._thread.start()

    def stop(self) -> None:
        self._stopping = True
        self._queue.put("")
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def poke(self, session_id: str) -> None:
        self._queue.put(session_id)

    def _loop(self) -> None:
        while not self._stopping:
            session_id = self._queue.get()
            if not session_id or self._stopping:
                continue
            try:
                self.drive(session_id)
            except IndigoError:
                continue  # session gone or halted; nothing to drive

    def drive(self, session_id: str) -> None:
        """Answer for every adapter AI currently owing an action."""
        while True:
            live = self.manager.get(session_id)
            with live.cond:
                state = live.state
            if state.is_terminal:
                return
            seat = next(
                (
                    p
                    for p in pending_participants(state)
                    if p.role == Role.AI and p.adapter_config is not None
                ),
                None,
            )
            if seat is None:
                return
            driver = AdapterDriver(seat, self.manager, session_id, transport=self.transport)
            try:
                step_participant(self.manager, session_id, driver, seat.participant_id, state)
            except (ConflictError, PhaseError):
                continue  # raced with another command; re-snapshot and retry
