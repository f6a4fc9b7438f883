#!/usr/bin/env python3
"""Regenerate fixtures/converged.journal.jsonl deterministically.

Runs one noise-free oracle session against the demo hidden target with a
frozen clock, so the committed journal is byte-stable across regenerations.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from indigo.runner import build_oracle_session, run_session  # noqa: E402
from indigo.store import SessionManager  # noqa: E402


def main() -> int:
    spec = json.loads((ROOT / "configs" / "demo_oracle.json").read_text(encoding="utf-8"))
    out_dir = ROOT / "fixtures"
    out_dir.mkdir(exist_ok=True)
    target = out_dir / "converged.journal.jsonl"
    if target.exists():
        target.unlink()

    frozen = datetime(2026, 1, 1, 12, 0, 0, tzinfo=timezone.utc)
    manager = SessionManager(data_dir=out_dir, clock=lambda: frozen, ai_timeout_seconds=None)
    session_id, drivers = build_oracle_session(manager, spec, seed=0, session_id="converged")
    final = run_session(manager, session_id, drivers)
    print(f"wrote {target}: phase={final.phase.value}, iterations={len(final.iterations)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
