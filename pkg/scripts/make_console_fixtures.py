#!/usr/bin/env python3
"""Regenerate the frontend test fixtures from the engine.

gain_parity.json: 100 random proposals with the exact tie-break gain the
engine would use, for the client-arithmetic parity test.
console_session.json: real snapshots + event logs (one mid-vote with an
earlier reweight, one converged) for view-model reconstruction tests.
"""

from __future__ import annotations

import json
import random
import sys
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from indigo import engine  # noqa: E402
from indigo.journal import event_to_json  # noqa: E402
from indigo.model import ScoreVector, encode_delta, normalize_weights  # noqa: E402
from indigo.plan import Edit, EditKind, ProposalDraft  # noqa: E402
from indigo.runner import build_oracle_session, run_session  # noqa: E402
from indigo.serialize import exact_claimed_gain  # noqa: E402
from indigo.store import SessionManager  # noqa: E402

OUT = ROOT / "frontend" / "tests" / "fixtures"


def gain_parity() -> None:
    rng = random.Random(606)
    lattice = [h / 2 for h in range(-20, 21)]
    cases = []
    for _ in range(100):
        weights = normalize_weights(tuple(rng.uniform(0.01, 1) for _ in range(3)))
        deltas = tuple(rng.choice(lattice) for _ in range(3))
        cases.append(
            {
                "weights": list(weights.weights),
                "claimed_deltas": [encode_delta(d) for d in deltas],
                "engine_gain": float(exact_claimed_gain(weights, deltas)),
            }
        )
    (OUT / "gain_parity.json").write_text(json.dumps(cases, indent=1), encoding="utf-8")


def console_session() -> None:
    frozen = datetime(2026, 2, 2, 9, 0, 0, tzinfo=timezone.utc)
    manager = SessionManager(clock=lambda: frozen, ai_timeout_seconds=None)
    template_goal = {
        "title": "Tighten the launch plan",
        "statement": "Iterate until the team is confident.",
        "success_criteria": "Stable scores.",
    }
    from indigo.model import preset_schema
    from indigo.participants import Capability, ParticipantDescriptor, Role
    from indigo.serialize import goal_from_wire

    caps = (Capability.SCORER, Capability.PROPOSER, Capability.VOTER)
    manager.create_session(
        goal=goal_from_wire(template_goal),
        schema=preset_schema("iron_triangle"),
        initial_weights=[2, 1, 1],
        initial_plan_items=["Write the announcement.", "Collect sign-offs."],
        roster=[
            ParticipantDescriptor("expert", Role.HUMAN, caps),
            ParticipantDescriptor("robo", Role.AI, caps),
        ],
        session_id="console-mid",
    )
    sid = "console-mid"
    # one full iteration, a reweight, then stop mid-vote in iteration 2
    manager.submit_scores(sid, "expert", ScoreVector.of(5, 5, 5))
    manager.submit_scores(sid, "robo", ScoreVector.of(6, 5, 5))
    manager.abstain(sid, "expert")
    manager.abstain(sid, "robo")
    manager.update_weights(sid, "expert", [1, 1, 2])
    manager.submit_scores(sid, "expert", ScoreVector.of(5.5, 5, 5))
    manager.submit_scores(sid, "robo", ScoreVector.of(6, 5, 5))
    manager.submit_proposal(
        sid,
        "expert",
        ProposalDraft(
            (Edit(EditKind.REPLACE, target_id="it-1", new_text="Write a sharper announcement."),),
            "sharper opening reads better",
            (1.0, 0.5, 0.0),
        ),
    )
    manager.submit_proposal(
        sid,
        "robo",
        ProposalDraft(
            (
                Edit(EditKind.INSERT_AFTER, target_id="it-2", new_text="Schedule the retro."),
                Edit(EditKind.DELETE, target_id="it-1"),
            ),
            "closes the loop after launch",
            (0.5, 0.0, 0.5),
        ),
    )
    live = manager.get(sid)
    mid = {
        "snapshot": engine.state_to_wire(live.state),
        "events": [json.loads(event_to_json(e)) for e in live.events],
    }

    spec = json.loads((ROOT / "configs" / "demo_oracle.json").read_text(encoding="utf-8"))
    manager2 = SessionManager(clock=lambda: frozen, ai_timeout_seconds=None)
    sid2, drivers = build_oracle_session(manager2, spec, seed=0, session_id="console-done")
    run_session(manager2, sid2, drivers)
    live2 = manager2.get(sid2)
    terminal = {
        "snapshot": engine.state_to_wire(live2.state),
        "events": [json.loads(event_to_json(e)) for e in live2.events],
    }
    (OUT / "console_session.json").write_text(
        json.dumps({"mid": mid, "terminal": terminal}, indent=1), encoding="utf-8"
    )


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    gain_parity()
    console_session()
    print(f"wrote fixtures to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
