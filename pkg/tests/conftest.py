"""Shared helpers: standard rosters, engine-level iteration driving, clocks."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from indigo import engine
from indigo.model import Criterion, Goal, ScoringSchema, ScoreVector
from indigo.participants import Capability, ParticipantDescriptor, Role
from indigo.scoring import ConvergenceConfig

ALL_CAPS = (Capability.SCORER, Capability.PROPOSER, Capability.VOTER)

HUMAN = "expert"
AI = "robo"


def standard_roster(
    human_caps: tuple[Capability, ...] = ALL_CAPS,
    ai_caps: tuple[Capability, ...] = ALL_CAPS,
) -> list[ParticipantDescriptor]:
    return [
        ParticipantDescriptor(HUMAN, Role.HUMAN, human_caps),
        ParticipantDescriptor(AI, Role.AI, ai_caps),
    ]


def standard_schema() -> ScoringSchema:
    return ScoringSchema(
        (
            Criterion("reach", "How many people the plan touches."),
            Criterion("depth", "How thoroughly it solves the problem."),
            Criterion("thrift", "How favorable the spend is."),
        )
    )


def standard_goal() -> Goal:
    return Goal("Ship the launch plan", "Produce a plan the team can execute next quarter.")


def new_session(
    convergence: ConvergenceConfig | None = None,
    roster: list[ParticipantDescriptor] | None = None,
    weights=(1, 1, 1),
    plan_items=("Draft the announcement.",),
    merge_mode: str = engine.MERGE_MEAN,
    session_id: str = "s-test",
) -> engine.SessionState:
    state, _ = engine.create_session(
        goal=standard_goal(),
        schema=standard_schema(),
        initial_weights=weights,
        initial_plan_items=list(plan_items),
        roster=roster or standard_roster(),
        convergence=convergence,
        session_id=session_id,
        merge_mode=merge_mode,
    )
    return state


def iteration_with(state: engine.SessionState, triple) -> engine.SessionState:
    """Run one full iteration where both seats submit the same lattice triple
    and nobody proposes, so the plan holds steady."""
    sv = ScoreVector.of(*triple)
    state, _ = engine.submit_scores(state, HUMAN, sv)
    state, _ = engine.submit_scores(state, AI, sv)
    state, _ = engine.abstain(state, HUMAN)  # proposer seat
    state, _ = engine.abstain(state, AI)
    state, _ = engine.apply_winning(state)
    return state


def uniform_iteration(state: engine.SessionState, value: float) -> engine.SessionState:
    """Iteration scored (v, v, v); the aggregate equals v under any weights."""
    return iteration_with(state, (value, value, value))


class FakeClock:
    """Injectable wall clock for deterministic journals and timeout tests."""

    def __init__(self, start: datetime | None = None):
        self.now = start or datetime(2026, 1, 1, 12, 0, 0, tzinfo=timezone.utc)

    def __call__(self) -> datetime:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += timedelta(seconds=seconds)


@pytest.fixture
def fake_clock() -> FakeClock:
    return FakeClock()


ORACLE_SPEC_12 = {
    "hidden_target": [
        ["alpha", "bravo", "charlie", "delta"],
        ["echo", "foxtrot", "golf", "hotel"],
        ["india", "juliet", "kilo", "lima"],
    ],
    "noise_half_units": 0,
    "proposal_policy": "greedy",
}
