"""Event kinds and envelopes for the append-only session journal.

The engine emits EventDraft values (kind + payload); the journal wraps them
into full Events with a dense sequence number, session id, and timestamp.
Payloads are plain JSON-compatible dicts so that the live fold and a replay
from disk consume byte-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

SESSION_CREATED = "SessionCreated"
SCHEMA_SET = "SchemaSet"
WEIGHTS_SET = "WeightsSet"
PLAN_DRAFTED = "PlanDrafted"
SCORES_SUBMITTED = "ScoresSubmitted"
SCORES_MERGED = "ScoresMerged"
PROPOSAL_SUBMITTED = "ProposalSubmitted"
PROPOSAL_REJECTED = "ProposalRejected"
BALLOT_CAST = "BallotCast"
TALLY_DECIDED = "TallyDecided"
PROPOSAL_APPLIED = "ProposalApplied"
WEIGHTS_UPDATED = "WeightsUpdated"
WINDOW_RESET = "WindowReset"
CONVERGENCE_DECLARED = "ConvergenceDeclared"
ITERATION_CAPPED = "IterationCapped"
ABANDONED = "Abandoned"
ADAPTER_EXCHANGE = "AdapterExchange"

ALL_KINDS = frozenset(
    {
        SESSION_CREATED,
        SCHEMA_SET,
        WEIGHTS_SET,
        PLAN_DRAFTED,
        SCORES_SUBMITTED,
        SCORES_MERGED,
        PROPOSAL_SUBMITTED,
        PROPOSAL_REJECTED,
        BALLOT_CAST,
        TALLY_DECIDED,
        PROPOSAL_APPLIED,
        WEIGHTS_UPDATED,
        WINDOW_RESET,
        CONVERGENCE_DECLARED,
        ITERATION_CAPPED,
        ABANDONED,
        ADAPTER_EXCHANGE,
    }
)

# A session accepts no further events after one of these.
TERMINAL_KINDS = frozenset({CONVERGENCE_DECLARED, ITERATION_CAPPED, ABANDONED})


@dataclass(frozen=True)
class EventDraft:
    kind: str
    payload: dict[str, Any]


@dataclass(frozen=True)
class Event:
    seq: int
    session_id: str
    ts: str  # RFC 3339
    kind: str
    payload: dict[str, Any]

    def draft(self) -> EventDraft:
        return EventDraft(self.kind, self.payload)
