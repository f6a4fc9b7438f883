"""The optimization-loop state machine.

One iteration runs score -> propose -> vote -> apply. Commands validate
against the current state and emit journal event drafts; `evolve` folds events
into the next state. Live sessions and journal replays fold the exact same
events, which is what makes replay reproduce live state field-for-field.

All decide functions are pure: they either raise (leaving state untouched) or
return the folded state plus the events that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

from indigo import events as ev
from indigo import serialize as wire
from indigo.errors import (
    AuthorizationError,
    ConflictError,
    NotFoundError,
    PhaseError,
    ValidationError,
)
from indigo.events import EventDraft
from indigo.model import Goal, ScoreVector, ScoringSchema, WeightVector, normalize_weights
from indigo.participants import Capability, ParticipantDescriptor, Role
from indigo.plan import Plan, Proposal, ProposalDraft, apply_proposal, draft_plan
from indigo.scoring import (
    ConvergenceConfig,
    ConvergenceState,
    aggregate_score,
    check_convergence,
    merge_participant_scores,
)

HOLD_STEADY = "HOLD_STEADY"

MERGE_MEAN = "mean"
MERGE_HUMAN_OVERRIDE = "human_override"
MERGE_MODES = (MERGE_MEAN, MERGE_HUMAN_OVERRIDE)


class Phase(str, Enum):
    DRAFTING = "drafting"
    AWAITING_SCORES = "awaiting_scores"
    AWAITING_PROPOSALS = "awaiting_proposals"
    AWAITING_VOTES = "awaiting_votes"
    APPLYING = "applying"
    CONVERGED = "converged"
    ITERATION_CAPPED = "iteration_capped"
    ABANDONED = "abandoned"


TERMINAL_PHASES = frozenset({Phase.CONVERGED, Phase.ITERATION_CAPPED, Phase.ABANDONED})


@dataclass(frozen=True)
class Ballot:
    voter: str
    choice: str  # a proposal_id or HOLD_STEADY


@dataclass(frozen=True)
class IterationRecord:
    """Finalized outcome of one full loop iteration."""

    index: int
    plan_revision: int  # the revision the scores rated (entering the iteration)
    merged_scores: ScoreVector
    aggregate: float
    weights_in_effect: WeightVector
    winning_proposal: str | None  # None when HOLD_STEADY won
    proposals: tuple[Proposal, ...]
    ballots: tuple[Ballot, ...]


@dataclass(frozen=True)
class WorkingIteration:
    """Bookkeeping for the iteration currently in flight."""

    index: int
    plan_revision: int
    submitted_scores: tuple[tuple[str, ScoreVector], ...] = ()
    abstained_scorers: tuple[str, ...] = ()
    merged_scores: ScoreVector | None = None
    aggregate: float | None = None
    weights_in_effect: WeightVector | None = None
    proposals: tuple[Proposal, ...] = ()
    abstained_proposers: tuple[str, ...] = ()
    ballots: tuple[Ballot, ...] = ()
    abstained_voters: tuple[str, ...] = ()
    winner: str | None = None  # proposal_id or HOLD_STEADY once tallied

    def scored_ids(self) -> frozenset[str]:
        return frozenset(pid for pid, _ in self.submitted_scores) | frozenset(self.abstained_scorers)

    def proposed_ids(self) -> frozenset[str]:
        return frozenset(p.author for p in self.proposals) | frozenset(self.abstained_proposers)

    def voted_ids(self) -> frozenset[str]:
        return frozenset(b.voter for b in self.ballots) | frozenset(self.abstained_voters)


@dataclass(frozen=True)
class SessionState:
    session_id: str
    phase: Phase
    participants: tuple[ParticipantDescriptor, ...]
    convergence: ConvergenceConfig
    merge_mode: str
    goal: Goal | None = None
    schema: ScoringSchema | None = None
    weights: WeightVector | None = None
    plan: Plan | None = None
    iterations: tuple[IterationRecord, ...] = ()
    # Aggregates accumulated since the last window reset; the convergence
    # check never looks across a reset because these are cleared on reweight.
    epoch_history: tuple[float, ...] = ()
    current: WorkingIteration | None = None
    abandon_reason: str | None = None

    def participant(self, participant_id: str) -> ParticipantDescriptor:
        for p in self.participants:
            if p.participant_id == participant_id:
                return p
        raise NotFoundError(f"unknown participant: {participant_id!r}")

    def with_capability(self, capability: Capability) -> list[ParticipantDescriptor]:
        return [p for p in self.participants if p.can(capability)]

    @property
    def is_terminal(self) -> bool:
        return self.phase in TERMINAL_PHASES


# ---------------------------------------------------------------------------
# evolve: fold one event into the state. Pure and total over engine-produced
# events; malformed payloads raise ValidationError (replay maps those to
# corruption errors with the offending seq).
# ---------------------------------------------------------------------------


def evolve(state: SessionState | None, kind: str, payload: dict[str, Any]) -> SessionState:
    if kind == ev.SESSION_CREATED:
        if state is not None:
            raise ValidationError("SessionCreated must be the first event")
        return SessionState(
            session_id=str(payload["session_id"]),
            phase=Phase.DRAFTING,
            participants=tuple(wire.participant_from_wire(p) for p in payload["participants"]),
            convergence=wire.convergence_from_wire(payload["convergence"]),
            merge_mode=str(payload["merge_mode"]),
            goal=wire.goal_from_wire(payload["goal"]),
        )
    if state is None:
        raise ValidationError(f"first event must be SessionCreated, got {kind}")

    if kind == ev.SCHEMA_SET:
        return replace(state, schema=wire.schema_from_wire(payload["schema"]))

    if kind == ev.WEIGHTS_SET:
        return replace(state, weights=wire.weights_from_wire(payload["weights"]))

    if kind == ev.PLAN_DRAFTED:
        plan = Plan(
            revision=0,
            items=wire.plan_items_from_wire(payload["items"]),
            parent_revision=None,
            next_item_seq=len(payload["items"]) + 1,
        )
        return replace(
            state,
            plan=plan,
            phase=Phase.AWAITING_SCORES,
            current=WorkingIteration(index=1, plan_revision=0),
        )

    if kind == ev.SCORES_SUBMITTED:
        cur = state.current
        pid = str(payload["participant"])
        if payload.get("abstained"):
            cur = replace(cur, abstained_scorers=cur.abstained_scorers + (pid,))
        else:
            scores = wire.scores_from_wire(payload["scores"])
            cur = replace(cur, submitted_scores=cur.submitted_scores + ((pid, scores),))
        return replace(state, current=cur)

    if kind == ev.SCORES_MERGED:
        merged = wire.scores_from_wire(payload["merged"])
        weights = wire.weights_from_wire(payload["weights"])
        cur = replace(
            state.current,
            merged_scores=merged,
            aggregate=float(payload["aggregate"]),
            weights_in_effect=weights,
        )
        return replace(state, current=cur, phase=Phase.AWAITING_PROPOSALS)

    if kind == ev.PROPOSAL_SUBMITTED:
        cur = state.current
        pid = str(payload["participant"])
        if payload.get("abstained"):
            cur = replace(cur, abstained_proposers=cur.abstained_proposers + (pid,))
        else:
            proposal = wire.proposal_from_wire(payload["proposal"])
            cur = replace(cur, proposals=cur.proposals + (proposal,))
        next_state = replace(state, current=cur)
        proposers = next_state.with_capability(Capability.PROPOSER)
        done = cur.proposed_ids()
        if proposers and all(p.participant_id in done for p in proposers) and cur.proposals:
            next_state = replace(next_state, phase=Phase.AWAITING_VOTES)
        return next_state

    if kind == ev.PROPOSAL_REJECTED:
        return state  # audit only

    if kind == ev.BALLOT_CAST:
        cur = state.current
        pid = str(payload["voter"])
        if payload.get("abstained"):
            cur = replace(cur, abstained_voters=cur.abstained_voters + (pid,))
        else:
            cur = replace(cur, ballots=cur.ballots + (Ballot(pid, str(payload["choice"])),))
        return replace(state, current=cur)

    if kind == ev.TALLY_DECIDED:
        cur = replace(state.current, winner=str(payload["winner"]))
        return replace(state, current=cur, phase=Phase.APPLYING)

    if kind == ev.PROPOSAL_APPLIED:
        cur = state.current
        winner = str(payload["winner"])
        plan = state.plan
        winning_id: str | None = None
        if winner != HOLD_STEADY:
            winning_id = winner
            proposal = next(p for p in cur.proposals if p.proposal_id == winner)
            plan = apply_proposal(plan, proposal)
        record = IterationRecord(
            index=cur.index,
            plan_revision=cur.plan_revision,
            merged_scores=cur.merged_scores,
            aggregate=cur.aggregate,
            weights_in_effect=cur.weights_in_effect,
            winning_proposal=winning_id,
            proposals=cur.proposals,
            ballots=cur.ballots,
        )
        return replace(
            state,
            plan=plan,
            iterations=state.iterations + (record,),
            epoch_history=state.epoch_history + (cur.aggregate,),
            phase=Phase.AWAITING_SCORES,
            current=WorkingIteration(index=cur.index + 1, plan_revision=plan.revision),
        )

    if kind == ev.WEIGHTS_UPDATED:
        weights = wire.weights_from_wire(payload["weights"])
        next_state = replace(state, weights=weights)
        cur = state.current
        if cur is not None and cur.merged_scores is not None:
            # The current iteration's aggregate was computed under the old
            # weights; recompute so it joins the new weight epoch and the
            # record invariant (aggregate = f(merged, weights_in_effect)) holds.
            cur = replace(
                cur,
                aggregate=aggregate_score(cur.merged_scores, weights).value,
                weights_in_effect=weights,
            )
            next_state = replace(next_state, current=cur)
        return next_state

    if kind == ev.WINDOW_RESET:
        return replace(state, epoch_history=())

    if kind == ev.CONVERGENCE_DECLARED:
        return replace(state, phase=Phase.CONVERGED, current=None)

    if kind == ev.ITERATION_CAPPED:
        return replace(state, phase=Phase.ITERATION_CAPPED, current=None)

    if kind == ev.ABANDONED:
        return replace(state, phase=Phase.ABANDONED, current=None,
                       abandon_reason=str(payload.get("reason", "")))

    if kind == ev.ADAPTER_EXCHANGE:
        return state  # audit only

    raise ValidationError(f"unknown event kind: {kind!r}")


def fold(state: SessionState | None, drafts: Sequence[EventDraft]) -> SessionState:
    for draft in drafts:
        state = evolve(state, draft.kind, draft.payload)
    return state


# ---------------------------------------------------------------------------
# Tally
# ---------------------------------------------------------------------------


def claimed_gain(weights: WeightVector, proposal: Proposal) -> Fraction:
    return wire.exact_claimed_gain(weights, proposal.claimed_deltas)


def tally(
    proposals: Sequence[Proposal], ballots: Sequence[Ballot], weights: WeightVector
) -> str:
    """Pick the iteration's winner: plurality by ballot count, ties broken by
    highest claimed weighted gain, then earliest submission.

    HOLD_STEADY is a full candidate with claimed gain 0 and is treated as
    submitted at iteration start, so full stalemates resolve to no move.
    """
    order: dict[str, int] = {HOLD_STEADY: -1}
    gains: dict[str, Fraction] = {HOLD_STEADY: Fraction(0)}
    for i, p in enumerate(proposals):
        order[p.proposal_id] = i
        gains[p.proposal_id] = claimed_gain(weights, p)
    counts: dict[str, int] = {c: 0 for c in order}
    for b in ballots:
        if b.choice not in counts:
            raise ValidationError(f"ballot references unknown proposal: {b.choice!r}")
        counts[b.choice] += 1
    return min(counts, key=lambda c: (-counts[c], -gains[c], order[c]))


# ---------------------------------------------------------------------------
# Commands. Each returns (new_state, emitted_event_drafts).
# ---------------------------------------------------------------------------

CommandResult = tuple[SessionState, list[EventDraft]]


def _require_phase(state: SessionState, *allowed: Phase) -> None:
    if state.phase not in allowed:
        raise PhaseError(
            f"operation not allowed in phase {state.phase.value}",
            {"phase": state.phase.value, "allowed": [p.value for p in allowed]},
        )


def _require_capability(p: ParticipantDescriptor, capability: Capability) -> None:
    if not p.can(capability):
        raise AuthorizationError(
            f"participant {p.participant_id!r} lacks the {capability.value} capability"
        )


def create_session(
    goal: Goal,
    schema: ScoringSchema,
    initial_weights: Sequence[float],
    initial_plan_items: Sequence[str],
    roster: Sequence[ParticipantDescriptor],
    convergence: ConvergenceConfig | None = None,
    session_id: str = "",
    merge_mode: str = MERGE_MEAN,
) -> CommandResult:
    if not session_id:
        raise ValidationError("session_id must be nonempty")
    if merge_mode not in MERGE_MODES:
        raise ValidationError(f"unknown merge_mode: {merge_mode!r}")
    roster = tuple(roster)
    ids = [p.participant_id for p in roster]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"duplicate participant ids: {ids}")
    if not any(p.role == Role.HUMAN for p in roster):
        raise ValidationError("roster needs at least one human participant")
    if not any(p.role == Role.AI for p in roster):
        raise ValidationError("roster needs at least one AI participant")
    if not any(p.can(Capability.SCORER) for p in roster):
        raise ValidationError("roster needs at least one scorer")
    weights = normalize_weights(tuple(float(w) for w in initial_weights))
    plan = draft_plan(list(initial_plan_items))
    config = convergence or ConvergenceConfig()

    drafts = [
        EventDraft(
            ev.SESSION_CREATED,
            {
                "session_id": session_id,
                "goal": wire.goal_to_wire(goal),
                "participants": [wire.participant_to_wire(p) for p in roster],
                "convergence": wire.convergence_to_wire(config),
                "merge_mode": merge_mode,
            },
        ),
        EventDraft(ev.SCHEMA_SET, {"schema": wire.schema_to_wire(schema)}),
        EventDraft(
            ev.WEIGHTS_SET,
            {"raw": [float(w) for w in initial_weights], "weights": wire.weights_to_wire(weights)},
        ),
        EventDraft(
            ev.PLAN_DRAFTED,
            {"items": [{"item_id": it.item_id, "text": it.text} for it in plan.items]},
        ),
    ]
    return fold(None, drafts), drafts


def _merge_submissions(state: SessionState) -> list[ScoreVector]:
    subs = state.current.submitted_scores
    if state.merge_mode == MERGE_HUMAN_OVERRIDE:
        human = [sv for pid, sv in subs if state.participant(pid).role == Role.HUMAN]
        if human:
            return human
    return [sv for _, sv in subs]


def _cascade(state: SessionState) -> list[EventDraft]:
    """Events implied by a completed phase: the implicit HOLD_STEADY when no
    proposals exist, and the tally once every voter is accounted for."""
    if state.phase == Phase.AWAITING_PROPOSALS and state.current.merged_scores is not None:
        proposers = state.with_capability(Capability.PROPOSER)
        done = state.current.proposed_ids()
        if all(p.participant_id in done for p in proposers) and not state.current.proposals:
            return [EventDraft(ev.TALLY_DECIDED, {"winner": HOLD_STEADY, "implicit": True})]
    if state.phase == Phase.AWAITING_VOTES:
        voters = state.with_capability(Capability.VOTER)
        done = state.current.voted_ids()
        if all(v.participant_id in done for v in voters):
            winner = tally(state.current.proposals, state.current.ballots, state.weights)
            return [
                EventDraft(
                    ev.TALLY_DECIDED,
                    {
                        "winner": winner,
                        "implicit": False,
                        "counts": _ballot_counts(state.current),
                    },
                )
            ]
    return []


def _ballot_counts(cur: WorkingIteration) -> dict[str, int]:
    counts = {HOLD_STEADY: 0, **{p.proposal_id: 0 for p in cur.proposals}}
    for b in cur.ballots:
        counts[b.choice] += 1
    return counts


def _fold_with_cascade(state: SessionState, drafts: list[EventDraft]) -> CommandResult:
    state = fold(state, drafts)
    extra = _cascade(state)
    while extra:
        state = fold(state, extra)
        drafts = drafts + extra
        extra = _cascade(state)
    return state, drafts


def submit_scores(state: SessionState, participant_id: str, scores: ScoreVector) -> CommandResult:
    p = state.participant(participant_id)
    _require_phase(state, Phase.AWAITING_SCORES)
    _require_capability(p, Capability.SCORER)
    if participant_id in state.current.scored_ids():
        raise ConflictError(f"{participant_id!r} already scored this iteration")

    drafts = [
        EventDraft(
            ev.SCORES_SUBMITTED,
            {"participant": participant_id, "scores": wire.scores_to_wire(scores)},
        )
    ]
    tentative = fold(state, drafts)
    drafts += _maybe_merge(tentative)
    return _fold_with_cascade(state, drafts)


def _maybe_merge(state: SessionState) -> list[EventDraft]:
    scorers = state.with_capability(Capability.SCORER)
    done = state.current.scored_ids()
    if not all(s.participant_id in done for s in scorers):
        return []
    merged = merge_participant_scores(_merge_submissions(state))
    aggregate = aggregate_score(merged, state.weights)
    return [
        EventDraft(
            ev.SCORES_MERGED,
            {
                "merged": wire.scores_to_wire(merged),
                "aggregate": aggregate.value,
                "weights": wire.weights_to_wire(state.weights),
            },
        )
    ]


def submit_proposal(
    state: SessionState, participant_id: str, draft: ProposalDraft
) -> CommandResult:
    p = state.participant(participant_id)
    _require_phase(state, Phase.AWAITING_PROPOSALS)
    _require_capability(p, Capability.PROPOSER)
    if participant_id in state.current.proposed_ids():
        raise ConflictError(f"{participant_id!r} already proposed this iteration")

    # Dry-run now so a stale proposal is rejected atomically; the plan is
    # frozen for the rest of the iteration, so apply-time cannot fail.
    apply_proposal(state.plan, draft)

    proposal = Proposal(
        proposal_id=f"p{state.current.index}-{len(state.current.proposals) + 1}",
        author=participant_id,
        edits=draft.edits,
        rationale=draft.rationale,
        claimed_deltas=draft.claimed_deltas,
    )
    drafts = [
        EventDraft(
            ev.PROPOSAL_SUBMITTED,
            {"participant": participant_id, "proposal": wire.proposal_to_wire(proposal)},
        )
    ]
    return _fold_with_cascade(state, drafts)


def cast_ballot(state: SessionState, participant_id: str, choice: str) -> CommandResult:
    p = state.participant(participant_id)
    _require_phase(state, Phase.AWAITING_VOTES)
    _require_capability(p, Capability.VOTER)
    if participant_id in state.current.voted_ids():
        raise ConflictError(f"{participant_id!r} already voted this iteration")
    if choice != HOLD_STEADY and choice not in {q.proposal_id for q in state.current.proposals}:
        raise ValidationError(f"ballot references unknown proposal: {choice!r}")

    drafts = [EventDraft(ev.BALLOT_CAST, {"voter": participant_id, "choice": choice})]
    return _fold_with_cascade(state, drafts)


def abstain(state: SessionState, participant_id: str) -> CommandResult:
    """Mark a participant as sitting out the current phase.

    The session driver invokes this on AI timeout; participants can also
    abstain explicitly. Human scorers never abstain: the human rating is the
    loop's ground truth, so a human holding the scorer capability must score.
    """
    p = state.participant(participant_id)
    _require_phase(state, Phase.AWAITING_SCORES, Phase.AWAITING_PROPOSALS, Phase.AWAITING_VOTES)

    if state.phase == Phase.AWAITING_SCORES:
        _require_capability(p, Capability.SCORER)
        if p.role == Role.HUMAN:
            raise AuthorizationError("human scorers do not abstain; a human rating is required")
        if participant_id in state.current.scored_ids():
            raise ConflictError(f"{participant_id!r} already scored this iteration")
        scorers = state.with_capability(Capability.SCORER)
        others_done = state.current.scored_ids() | {participant_id}
        if all(s.participant_id in others_done for s in scorers) and not state.current.submitted_scores:
            raise ValidationError("cannot abstain: no score submissions would remain")
        drafts = [
            EventDraft(ev.SCORES_SUBMITTED, {"participant": participant_id, "abstained": True})
        ]
        tentative = fold(state, drafts)
        drafts += _maybe_merge(tentative)
        return _fold_with_cascade(state, drafts)

    if state.phase == Phase.AWAITING_PROPOSALS:
        _require_capability(p, Capability.PROPOSER)
        if participant_id in state.current.proposed_ids():
            raise ConflictError(f"{participant_id!r} already proposed this iteration")
        drafts = [
            EventDraft(ev.PROPOSAL_SUBMITTED, {"participant": participant_id, "abstained": True})
        ]
        return _fold_with_cascade(state, drafts)

    _require_capability(p, Capability.VOTER)
    if participant_id in state.current.voted_ids():
        raise ConflictError(f"{participant_id!r} already voted this iteration")
    drafts = [EventDraft(ev.BALLOT_CAST, {"voter": participant_id, "abstained": True})]
    return _fold_with_cascade(state, drafts)


def apply_winning(state: SessionState) -> CommandResult:
    """Apply the tallied winner, finalize the iteration record, and run the
    convergence check on the aggregates accumulated since the last reset."""
    _require_phase(state, Phase.APPLYING)
    cur = state.current
    new_revision = state.plan.revision + (0 if cur.winner == HOLD_STEADY else 1)
    drafts = [EventDraft(ev.PROPOSAL_APPLIED, {"winner": cur.winner, "new_revision": new_revision})]
    tentative = fold(state, drafts)

    status = check_convergence(tentative.epoch_history, state.convergence)
    if status.state == ConvergenceState.CONVERGED:
        drafts.append(
            EventDraft(ev.CONVERGENCE_DECLARED, {"deltas": list(status.deltas_considered)})
        )
    elif len(tentative.iterations) >= state.convergence.max_iterations:
        drafts.append(EventDraft(ev.ITERATION_CAPPED, {"iterations": len(tentative.iterations)}))
    return fold(state, drafts), drafts


def update_weights(
    state: SessionState, participant_id: str, raw: Sequence[float]
) -> CommandResult:
    """Replace the objective weights (human only) and reset the convergence
    window: aggregates under different weights are incomparable."""
    p = state.participant(participant_id)
    if p.role != Role.HUMAN:
        raise AuthorizationError("only a human participant may adjust the weights")
    _require_phase(state, Phase.AWAITING_SCORES, Phase.AWAITING_PROPOSALS)
    weights = normalize_weights(tuple(float(w) for w in raw))
    drafts = [
        EventDraft(
            ev.WEIGHTS_UPDATED,
            {
                "participant": participant_id,
                "raw": [float(w) for w in raw],
                "weights": wire.weights_to_wire(weights),
            },
        ),
        EventDraft(ev.WINDOW_RESET, {}),
    ]
    return fold(state, drafts), drafts


def abandon(state: SessionState, participant_id: str, reason: str) -> CommandResult:
    p = state.participant(participant_id)
    if p.role != Role.HUMAN:
        raise AuthorizationError("only a human participant may abandon the session")
    if state.is_terminal:
        raise PhaseError(f"session already terminal ({state.phase.value})")
    drafts = [EventDraft(ev.ABANDONED, {"participant": participant_id, "reason": reason})]
    return fold(state, drafts), drafts


# ---------------------------------------------------------------------------
# Snapshot serialization (wire codecs for engine-level types live here to
# keep serialize.py free of engine imports).
# ---------------------------------------------------------------------------


def ballot_to_wire(ballot: Ballot) -> dict:
    return {"voter": ballot.voter, "choice": ballot.choice}


def iteration_to_wire(record: IterationRecord) -> dict:
    return {
        "index": record.index,
        "plan_revision": record.plan_revision,
        "merged_scores": wire.scores_to_wire(record.merged_scores),
        "aggregate": record.aggregate,
        "weights_in_effect": wire.weights_to_wire(record.weights_in_effect),
        "winning_proposal": record.winning_proposal,
        "proposals": [wire.proposal_to_wire(p, record.weights_in_effect) for p in record.proposals],
        "ballots": [ballot_to_wire(b) for b in record.ballots],
    }


def working_to_wire(cur: WorkingIteration, weights: WeightVector | None) -> dict:
    return {
        "index": cur.index,
        "plan_revision": cur.plan_revision,
        "scored": [pid for pid, _ in cur.submitted_scores],
        "abstained_scorers": list(cur.abstained_scorers),
        "merged_scores": wire.scores_to_wire(cur.merged_scores) if cur.merged_scores else None,
        "aggregate": cur.aggregate,
        "proposals": [wire.proposal_to_wire(p, weights) for p in cur.proposals],
        "abstained_proposers": list(cur.abstained_proposers),
        "ballots": [ballot_to_wire(b) for b in cur.ballots],
        "abstained_voters": list(cur.abstained_voters),
        "winner": cur.winner,
    }


def state_to_wire(state: SessionState, redact_adapters: bool = True) -> dict:
    """Full session snapshot; adapter auth headers are redacted for API use."""
    return {
        "session_id": state.session_id,
        "phase": state.phase.value,
        "goal": wire.goal_to_wire(state.goal) if state.goal else None,
        "schema": wire.schema_to_wire(state.schema) if state.schema else None,
        "weights": wire.weights_to_wire(state.weights) if state.weights else None,
        "merge_mode": state.merge_mode,
        "convergence": wire.convergence_to_wire(state.convergence),
        "participants": [
            wire.participant_to_wire(p, redact_adapter=redact_adapters) for p in state.participants
        ],
        "plan": wire.plan_to_wire(state.plan) if state.plan else None,
        "iterations": [iteration_to_wire(r) for r in state.iterations],
        "epoch_history": list(state.epoch_history),
        "current": working_to_wire(state.current, state.weights) if state.current else None,
        "abandon_reason": state.abandon_reason,
    }
