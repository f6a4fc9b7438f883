"""Command line entry point.

    indigo serve    --addr host:port --data-dir path
    indigo run      --config file          headless full loop, scripted human
    indigo simulate --seeds a..b --oracle file --out csv
    indigo replay   <journal.jsonl> [--at-seq n]
    indigo presets

Exit codes: 0 success, 1 validation/usage failure, 2 journal corruption.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

from indigo.errors import CorruptionError, IndigoError, ValidationError
from indigo.journal import read_journal, replay
from indigo.model import describe_presets
from indigo.participants import Capability, ParticipantDescriptor, Role
from indigo.participants.oracle import OracleConfig
from indigo.runner import (
    AdapterDriver,
    Driver,
    OracleDriver,
    ScriptedDriver,
    run_session,
    simulate_seeds,
)
from indigo.serialize import adapter_from_wire, convergence_from_wire, goal_from_wire
from indigo.store import SessionManager

DEFAULT_ADDR = "127.0.0.1:8800"
DEFAULT_DATA_DIR = "./indigo-data"


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from None


def _parse_seeds(text: str) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise ValidationError(f"bad seed range: {text!r}") from None
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise ValidationError(f"bad seed list: {text!r}") from None


def _schema_from_config(raw) -> object:
    from indigo.api import _schema_from_body

    return _schema_from_body(raw)


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from indigo.api import create_app
    from indigo.runner import AdapterAutoDriver

    addr = args.addr or os.environ.get("INDIGO_ADDR") or DEFAULT_ADDR
    data_dir = args.data_dir or os.environ.get("INDIGO_DATA_DIR") or DEFAULT_DATA_DIR
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValidationError(f"--addr must be host:port, got {addr!r}")
    manager = SessionManager(data_dir=data_dir)
    driver = AdapterAutoDriver(manager)
    driver.start()
    app = create_app(manager, auto_driver=driver)
    try:
        uvicorn.run(app, host=host, port=int(port), log_level="info")
    finally:
        driver.stop()
    return 0


def _build_run_drivers(
    config: dict, manager: SessionManager, session_id: str
) -> dict[str, Driver]:
    drivers: dict[str, Driver] = {}
    human = config["human"]
    drivers[str(human["participant_id"])] = ScriptedDriver(human.get("script") or {})
    for entry in config.get("ais", []):
        pid = str(entry["participant_id"])
        if "oracle" in entry:
            drivers[pid] = OracleDriver(OracleConfig.from_wire(entry["oracle"]))
        elif "adapter" in entry:
            descriptor = _ai_descriptor(entry)
            drivers[pid] = AdapterDriver(descriptor, manager, session_id)
        else:
            raise ValidationError(f"AI {pid!r} needs an 'oracle' or 'adapter' section")
    return drivers


def _capabilities(entry: dict) -> tuple[Capability, ...]:
    names = entry.get("capabilities", ["scorer", "proposer", "voter"])
    return tuple(Capability(str(c)) for c in names)


def _ai_descriptor(entry: dict) -> ParticipantDescriptor:
    return ParticipantDescriptor(
        participant_id=str(entry["participant_id"]),
        role=Role.AI,
        capabilities=_capabilities(entry),
        adapter_config=adapter_from_wire(entry["adapter"]) if "adapter" in entry else None,
    )


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_json(args.config)
    for field in ("goal", "schema", "weights", "initial_plan", "human", "ais"):
        if field not in config:
            raise ValidationError(f"run config missing field: {field}")

    data_dir = config.get("data_dir")
    manager = SessionManager(data_dir=data_dir, ai_timeout_seconds=None)
    human = config["human"]
    roster = [
        ParticipantDescriptor(str(human["participant_id"]), Role.HUMAN, _capabilities(human))
    ] + [_ai_descriptor(entry) for entry in config.get("ais", [])]

    live = manager.create_session(
        goal=goal_from_wire(config["goal"]),
        schema=_schema_from_config(config["schema"]),
        initial_weights=[float(w) for w in config["weights"]],
        initial_plan_items=[str(t) for t in config["initial_plan"]],
        roster=roster,
        convergence=(
            convergence_from_wire(config["convergence"]) if "convergence" in config else None
        ),
        merge_mode=config.get("merge_mode", "mean"),
        session_id=config.get("session_id"),
    )
    session_id = live.state.session_id
    drivers = _build_run_drivers(config, manager, session_id)
    final = run_session(manager, session_id, drivers)

    for record in final.iterations:
        winner = record.winning_proposal or "HOLD_STEADY"
        print(
            f"iteration {record.index}: revision {record.plan_revision} "
            f"scored {record.merged_scores.encode()} aggregate {record.aggregate:.4f} "
            f"winner {winner}"
        )
    print(f"session {session_id}: {final.phase.value} after {len(final.iterations)} iterations")
    for item in final.plan.items:
        print(f"  [{item.item_id}] {item.text}")
    if data_dir:
        print(f"journal: {Path(data_dir) / (session_id + '.journal.jsonl')}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_json(args.oracle)
    seeds = _parse_seeds(args.seeds)
    if not seeds:
        raise ValidationError("no seeds given")
    results = simulate_seeds(spec, seeds)
    rows = [
        {
            "seed": r.seed,
            "iterations": r.iterations,
            "converged": str(r.converged).lower(),
            "initial_aggregate": f"{r.initial_aggregate:.6f}",
            "final_aggregate": f"{r.final_aggregate:.6f}",
        }
        for r in results
    ]
    fieldnames = ["seed", "iterations", "converged", "initial_aggregate", "final_aggregate"]
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    converged = sum(1 for r in results if r.converged)
    print(f"{converged}/{len(results)} seeds converged", file=sys.stderr)
    return 0


def _plan_fingerprint(plan) -> str:
    material = "\x1f".join(f"{it.item_id}={it.text}" for it in plan.items)
    return hashlib.sha256(f"r{plan.revision}|{material}".encode()).hexdigest()[:16]


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        events = read_journal(args.journal)
    except FileNotFoundError:
        raise ValidationError(f"journal not found: {args.journal}") from None
    if args.at_seq is not None:
        events = [e for e in events if e.seq <= args.at_seq]
    state = replay(events)
    print(f"session {state.session_id}")
    print(f"phase: {state.phase.value}")
    print(f"events: {len(events)}")
    print(f"iterations: {len(state.iterations)}")
    if state.plan is not None:
        print(f"plan revision: {state.plan.revision} (fingerprint {_plan_fingerprint(state.plan)})")
        for item in state.plan.items:
            print(f"  [{item.item_id}] {item.text}")
    if state.iterations:
        history = " ".join(f"{r.aggregate:.3f}" for r in state.iterations)
        print(f"aggregate history: {history}")
    return 0


def cmd_presets(args: argparse.Namespace) -> int:
    for preset in describe_presets():
        names = ", ".join(c["name"] for c in preset["criteria"])
        extra = " + caller-supplied third" if preset["requires_third_criterion"] else ""
        print(f"{preset['preset_id']}: {names}{extra}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indigo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--addr", default=None, help=f"host:port (default {DEFAULT_ADDR})")
    p.add_argument("--data-dir", default=None, help=f"journal directory (default {DEFAULT_DATA_DIR})")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("run", help="headless session with a scripted human")
    p.add_argument("--config", required=True, help="JSON run config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="batch oracle sessions")
    p.add_argument("--seeds", required=True, help="range a..b or comma list")
    p.add_argument("--oracle", required=True, help="JSON oracle spec")
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="reconstruct state from a journal")
    p.add_argument("journal", help="path to <session>.journal.jsonl")
    p.add_argument("--at-seq", type=int, default=None, help="replay only events with seq <= n")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("presets", help="list schema presets")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CorruptionError as exc:
        print(f"corruption: {exc.message}", file=sys.stderr)
        return 2
    except IndigoError as exc:
        print(f"error ({exc.code}): {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
