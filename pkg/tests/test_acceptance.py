"""Acceptance criteria, one test per criterion, with runtime budgets.

Run with `pytest tests/test_acceptance.py -s` to see one PASS/FAIL line per
criterion.
"""

from __future__ import annotations

import json
import math
import random
import string
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from time import perf_counter

import pytest

from conftest import HUMAN, ORACLE_SPEC_12, iteration_with, new_session, uniform_iteration
from indigo import engine
from indigo.cli import main as cli_main
from indigo.engine import HOLD_STEADY, Ballot, Phase
from indigo.errors import ValidationError
from indigo.journal import read_journal, replay
from indigo.model import ScoreValue, ScoreVector, normalize_weights, quantize
from indigo.participants.grammar import parse_response, render_proposal
from indigo.plan import Edit, EditKind, Proposal, ProposalDraft, draft_plan
from indigo.runner import build_oracle_session, run_session
from indigo.scoring import ConvergenceConfig, ConvergenceState, aggregate_score, check_convergence
from indigo.store import SessionManager

ROOT = Path(__file__).resolve().parent.parent


@contextmanager
def criterion(name: str, budget_seconds: float | None = None):
    start = perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    elapsed = perf_counter() - start
    if budget_seconds is not None and elapsed >= budget_seconds:
        print(f"[FAIL] {name} (runtime {elapsed:.2f}s over budget {budget_seconds}s)")
        raise AssertionError(f"{name}: runtime {elapsed:.2f}s exceeds budget {budget_seconds}s")
    print(f"[PASS] {name} ({elapsed:.2f}s)")


def test_quantization_suite():
    with criterion("quantization suite", budget_seconds=1.0):
        for h in range(21):  # all 21 lattice values round-trip
            assert quantize(ScoreValue(h).display) == ScoreValue(h)
            assert ScoreValue.parse(ScoreValue(h).encode()) == ScoreValue(h)
        rng = random.Random(101)
        for _ in range(10_000):
            x = rng.uniform(0.0, 10.0)
            assert abs(quantize(x).display - x) <= 0.25
        for k in range(20):  # every odd multiple of 0.25 rounds up
            x = (2 * k + 1) / 4
            assert quantize(x).half_units == int(2 * x) + 1


def _random_vector(rng):
    return ScoreVector(tuple(ScoreValue(rng.randint(0, 20)) for _ in range(3)))


def _brute_aggregate(scores: ScoreVector, weights) -> float:
    total = Fraction(0)
    for w, s in zip(weights.weights, scores.scores):
        total += Fraction(w) * Fraction(s.half_units, 2)
    return float(total)


def test_aggregate_properties():
    with criterion("aggregate properties", budget_seconds=10.0):
        rng = random.Random(202)

        # bounds + agreement with exact rational arithmetic
        for _ in range(10_000):
            sv = _random_vector(rng)
            w = normalize_weights(tuple(rng.uniform(0, 1) + 1e-6 for _ in range(3)))
            value = aggregate_score(sv, w).value
            assert 0.0 <= value <= 10.0
            assert math.isclose(value, _brute_aggregate(sv, w), abs_tol=1e-9)

        # strict monotonicity per criterion under positive weights
        for _ in range(10_000):
            sv = _random_vector(rng)
            w = normalize_weights(tuple(rng.uniform(0.01, 1) for _ in range(3)))
            i = rng.randrange(3)
            if sv.scores[i].half_units == 20:
                continue
            bump = rng.randint(1, 20 - sv.scores[i].half_units)
            bumped = list(sv.scores)
            bumped[i] = ScoreValue(sv.scores[i].half_units + bump)
            assert aggregate_score(ScoreVector(tuple(bumped)), w).value > aggregate_score(sv, w).value

        # permutation symmetry under equal weights
        equal = normalize_weights((1, 1, 1))
        for _ in range(10_000):
            s = [rng.randint(0, 20) for _ in range(3)]
            base = aggregate_score(ScoreVector(tuple(ScoreValue(h) for h in s)), equal).value
            perm = rng.sample(range(3), 3)
            shuffled = aggregate_score(
                ScoreVector(tuple(ScoreValue(s[p]) for p in perm)), equal
            ).value
            assert math.isclose(base, shuffled, abs_tol=1e-12)

        # argmax invariance under weight rescaling
        for _ in range(10_000):
            raw = tuple(rng.uniform(0.01, 1) for _ in range(3))
            c = rng.uniform(1e-3, 1e3)
            w1 = normalize_weights(raw)
            w2 = normalize_weights(tuple(c * x for x in raw))
            vectors = []
            seen = set()
            for _ in range(rng.randint(2, 6)):
                sv = _random_vector(rng)
                if sv.displays not in seen:
                    seen.add(sv.displays)
                    vectors.append(sv)
            argmax1 = max(range(len(vectors)), key=lambda i: (aggregate_score(vectors[i], w1).value, -i))
            argmax2 = max(range(len(vectors)), key=lambda i: (aggregate_score(vectors[i], w2).value, -i))
            assert argmax1 == argmax2


def test_convergence_semantics():
    with criterion("convergence semantics"):
        config = ConvergenceConfig(threshold=0.5, window=3, max_iterations=50)

        # the documented example history converges at threshold 0.5, window 3
        status = check_convergence([5.0, 7.0, 7.2, 7.4, 7.3], config)
        assert status.state == ConvergenceState.CONVERGED
        assert list(status.deltas_considered) == pytest.approx([0.2, 0.2, 0.1])

        # strictness: a delta exactly at the threshold does not converge
        flat = ConvergenceConfig(threshold=0.5, window=1, max_iterations=50)
        assert check_convergence([5.0, 5.5], flat).state != ConvergenceState.CONVERGED

        # window reset after reweight, verified end-to-end through the engine
        state = new_session()
        for triple in ((5, 5, 5), (5, 5, 5.5), (5, 5.5, 5.5)):
            state = iteration_with(state, triple)  # two sub-threshold deltas
        state, _ = engine.update_weights(state, HUMAN, (2, 1, 1))
        assert state.epoch_history == ()
        state = uniform_iteration(state, 5.5)
        state = uniform_iteration(state, 5.5)  # one post-reset delta
        assert state.phase == Phase.AWAITING_SCORES, "must not converge across a weight change"
        state = uniform_iteration(state, 5.5)
        state = uniform_iteration(state, 5.5)
        assert state.phase == Phase.CONVERGED


def test_oracle_convergence():
    with criterion("oracle convergence", budget_seconds=30.0):
        # noise 0: every seed reaches the exact optimum quickly
        for seed in range(20):
            manager = SessionManager(ai_timeout_seconds=None)
            sid, drivers = build_oracle_session(manager, ORACLE_SPEC_12, seed)
            final = run_session(manager, sid, drivers)
            history = [r.aggregate for r in final.iterations]
            assert final.phase == Phase.CONVERGED, f"seed {seed} did not converge"
            assert len(final.iterations) <= 25, f"seed {seed} took {len(final.iterations)}"
            assert history[-1] == 10.0, f"seed {seed} final aggregate {history[-1]}"
            assert all(
                b >= a for a, b in zip(history, history[1:])
            ), f"seed {seed} history decreased: {history}"

        # noise 1 half-unit: at least 18 of 20 seeds converge within 40
        noisy_spec = dict(ORACLE_SPEC_12, noise_half_units=1)
        converged = 0
        for seed in range(20):
            manager = SessionManager(ai_timeout_seconds=None)
            sid, drivers = build_oracle_session(manager, noisy_spec, seed)
            final = run_session(manager, sid, drivers)
            if final.phase == Phase.CONVERGED and len(final.iterations) <= 40:
                converged += 1
        assert converged >= 18, f"only {converged}/20 noisy seeds converged"


def _reference_tally(proposals, ballots, weights) -> str:
    ids = [p.proposal_id for p in proposals]
    candidates = [HOLD_STEADY] + ids
    counts = {c: 0 for c in candidates}
    for b in ballots:
        counts[b.choice] += 1

    def gain(cid):
        if cid == HOLD_STEADY:
            return Fraction(0)
        p = proposals[ids.index(cid)]
        return sum(
            (Fraction(w) * Fraction(d) for w, d in zip(weights.weights, p.claimed_deltas)),
            Fraction(0),
        )

    def order(cid):
        return -1 if cid == HOLD_STEADY else ids.index(cid)

    return sorted(candidates, key=lambda c: (-counts[c], -gain(c), order(c)))[0]


def test_tally_determinism():
    with criterion("tally determinism"):
        rng = random.Random(303)
        lattice = [h / 2 for h in range(-20, 21)]
        tie_break_cases = {"count": 0, "gain": 0, "order": 0}
        for _ in range(10_000):
            n = rng.randint(0, 5)
            # coarse lattice and tiny vote counts make ties common
            deltas_pool = [0.0, 0.5, 1.0]
            proposals = [
                Proposal(
                    f"p{i}",
                    f"a{i}",
                    (Edit(EditKind.INSERT_AT_START, new_text="t"),),
                    "r",
                    tuple(rng.choice(deltas_pool if rng.random() < 0.7 else lattice) for _ in range(3)),
                )
                for i in range(n)
            ]
            weights = normalize_weights(tuple(rng.uniform(0.01, 1) for _ in range(3)))
            choices = [HOLD_STEADY] + [p.proposal_id for p in proposals]
            ballots = [Ballot(f"v{j}", rng.choice(choices)) for j in range(rng.randint(0, 5))]
            expected = _reference_tally(proposals, ballots, weights)
            actual = engine.tally(proposals, ballots, weights)
            assert actual == expected
            # classify which stage decided, to prove both tie-breaks fire
            counts = {c: sum(1 for b in ballots if b.choice == c) for c in choices}
            top = max(counts.values())
            tied = [c for c in choices if counts[c] == top]
            if len(tied) == 1:
                tie_break_cases["count"] += 1
            else:
                gains = {
                    c: Fraction(0)
                    if c == HOLD_STEADY
                    else sum(
                        (
                            Fraction(w) * Fraction(d)
                            for w, d in zip(
                                weights.weights, proposals[int(c[1:])].claimed_deltas
                            )
                        ),
                        Fraction(0),
                    )
                    for c in tied
                }
                best_gain = max(gains.values())
                if sum(1 for g in gains.values() if g == best_gain) == 1:
                    tie_break_cases["gain"] += 1
                else:
                    tie_break_cases["order"] += 1
        assert all(tie_break_cases[stage] > 0 for stage in ("count", "gain", "order")), (
            f"tie-break stages not all exercised: {tie_break_cases}"
        )

        # the documented stalemate: one ballot each, zero claimed gain
        p1 = Proposal(
            "p1", "a", (Edit(EditKind.INSERT_AT_START, new_text="t"),), "r", (0.0, 0.0, 0.0)
        )
        ballots = [Ballot("x", "p1"), Ballot("y", HOLD_STEADY)]
        assert engine.tally([p1], ballots, normalize_weights((1, 1, 1))) == HOLD_STEADY


def _random_session_spec(rng) -> dict:
    words = rng.sample([f"w{i:02d}" for i in range(60)], k=rng.randint(3, 9))
    split1 = rng.randint(1, len(words) - 2)
    split2 = rng.randint(split1 + 1, len(words) - 1)
    return {
        "hidden_target": [words[:split1], words[split1:split2], words[split2:]],
        "noise_half_units": rng.choice([0, 0, 1, 2]),
        "proposal_policy": rng.choice(["greedy", "random"]),
        "weights": [rng.uniform(0.1, 3) for _ in range(3)],
        "initial_plan": ["Starting point."],
        "convergence": {
            "threshold": 0.5,
            "window": rng.choice([2, 3]),
            "max_iterations": 30,
        },
    }


def test_replay_determinism(tmp_path):
    with criterion("replay determinism", budget_seconds=60.0):
        rng = random.Random(404)
        for case in range(100):
            spec = _random_session_spec(rng)
            manager = SessionManager(data_dir=tmp_path, ai_timeout_seconds=None)
            sid = f"replay-{case}"
            session_id, drivers = build_oracle_session(manager, spec, seed=case, session_id=sid)
            live = manager.get(session_id)

            reweight_after = rng.choice([None, 1, 2])
            while True:
                with live.cond:
                    state = live.state
                if state.is_terminal:
                    break
                if (
                    reweight_after is not None
                    and len(state.iterations) == reweight_after
                    and state.phase == Phase.AWAITING_SCORES
                ):
                    manager.update_weights(
                        session_id, "expert", [rng.uniform(0.1, 3) for _ in range(3)]
                    )
                    reweight_after = None
                    continue
                from indigo.store import pending_participants

                actor = pending_participants(state)[0]
                from indigo.runner import step_participant

                step_participant(
                    manager, session_id, drivers[actor.participant_id], actor.participant_id, state
                )

            final = live.state
            events = read_journal(tmp_path / f"{sid}.journal.jsonl")
            assert replay(events) == final, f"case {case}: replay diverged from live state"
            for k in range(1, len(events) + 1):
                replay(events[:k])  # every prefix replays cleanly


def test_parser_robustness():
    with criterion("parser robustness"):
        rng = random.Random(505)
        lattice = [h / 2 for h in range(-20, 21)]

        # 1,000 generated proposals round-trip through the canonical grammar
        for _ in range(1_000):
            plan = draft_plan([f"item number {i}" for i in range(rng.randint(1, 6))])
            edits = []
            for _ in range(rng.randint(1, 4)):
                kind = rng.choice(list(EditKind))
                text = "t" + "".join(rng.choices(string.ascii_lowercase + " ", k=10)).strip()
                target = rng.choice(plan.items).item_id
                if kind == EditKind.INSERT_AT_START:
                    edits.append(Edit(kind, new_text=text))
                elif kind == EditKind.DELETE:
                    edits.append(Edit(kind, target_id=target))
                else:
                    edits.append(Edit(kind, target_id=target, new_text=text))
            draft = ProposalDraft(
                tuple(edits),
                "because " + "".join(rng.choices(string.ascii_lowercase, k=8)),
                tuple(rng.choice(lattice) for _ in range(3)),
            )
            canonical = render_proposal(draft)
            parsed = parse_response(canonical, Phase.AWAITING_PROPOSALS, plan)
            assert parsed == draft
            assert render_proposal(parsed) == canonical

        # 10,000-case fuzz: rejections only, never crashes
        plan = draft_plan(["alpha item", "beta item"])
        prefixes = [
            "",
            "SCORES: ",
            "EDIT 1: ",
            "EDIT 1: REPLACE it-1 :: ",
            "RATIONALE 1: ",
            "DELTAS 1: ",
            "VOTE: ",
            "ABSTAIN",
        ]
        phases = [Phase.AWAITING_SCORES, Phase.AWAITING_PROPOSALS, Phase.AWAITING_VOTES]
        for _ in range(10_000):
            raw = rng.choice(prefixes) + "".join(
                rng.choices(string.printable, k=rng.randint(0, 60))
            )
            try:
                parse_response(raw, rng.choice(phases), plan)
            except ValidationError:
                pass

        # targeted rejections: off-lattice scores and unknown item ids
        with pytest.raises(ValidationError):
            parse_response("SCORES: 7.3 6.0 8.0", Phase.AWAITING_SCORES, plan)
        with pytest.raises(ValidationError):
            parse_response(
                "EDIT 1: DELETE it-99\nRATIONALE 1: r\nDELTAS 1: 0.0 0.0 0.0",
                Phase.AWAITING_PROPOSALS,
                plan,
            )


def test_full_headless_loop(tmp_path, capsys):
    with criterion("full headless loop"):
        config = json.loads((ROOT / "configs" / "demo_run.json").read_text(encoding="utf-8"))
        config["data_dir"] = str(tmp_path)
        path = tmp_path / "run.json"
        path.write_text(json.dumps(config), encoding="utf-8")
        assert cli_main(["run", "--config", str(path)]) == 0
        out = capsys.readouterr().out
        assert "converged" in out
        journal_path = tmp_path / "demo-run.journal.jsonl"
        assert journal_path.exists()
        state = replay(read_journal(journal_path))
        assert state.phase == Phase.CONVERGED
        # the scripted human scored every iteration (human-in-the-loop check)
        human_scores = [
            e
            for e in read_journal(journal_path)
            if e.kind == "ScoresSubmitted"
            and e.payload["participant"] == "expert"
            and not e.payload.get("abstained")
        ]
        assert len(human_scores) == len(state.iterations)
