"""CLI surface: run, simulate, replay, presets, and exit codes."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from indigo.cli import main

ROOT = Path(__file__).resolve().parent.parent
DEMO_RUN = ROOT / "configs" / "demo_run.json"
DEMO_ORACLE = ROOT / "configs" / "demo_oracle.json"
FIXTURE = ROOT / "fixtures" / "converged.journal.jsonl"


class TestRun:
    def test_headless_loop_completes(self, capsys, tmp_path):
        config = json.loads(DEMO_RUN.read_text(encoding="utf-8"))
        config["data_dir"] = str(tmp_path)
        path = tmp_path / "run.json"
        path.write_text(json.dumps(config), encoding="utf-8")
        assert main(["run", "--config", str(path)]) == 0
        out = capsys.readouterr().out
        assert "converged" in out
        assert (tmp_path / "demo-run.journal.jsonl").exists()

    def test_malformed_config_exits_1(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["run", "--config", str(path)]) == 1

    def test_missing_fields_exit_1(self, tmp_path):
        path = tmp_path / "incomplete.json"
        path.write_text(json.dumps({"goal": {"title": "t", "statement": "s"}}), encoding="utf-8")
        assert main(["run", "--config", str(path)]) == 1

    def test_missing_file_exits_1(self):
        assert main(["run", "--config", "/nonexistent/x.json"]) == 1


class TestSimulate:
    def test_twenty_seeds_all_converge(self, capsys, tmp_path):
        out = tmp_path / "sim.csv"
        code = main(
            ["simulate", "--seeds", "0..19", "--oracle", str(DEMO_ORACLE), "--out", str(out)]
        )
        assert code == 0
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 20
        assert [r["seed"] for r in rows] == [str(s) for s in range(20)]
        assert all(r["converged"] == "true" for r in rows)
        assert all(float(r["final_aggregate"]) == 10.0 for r in rows)
        assert set(rows[0]) == {
            "seed",
            "iterations",
            "converged",
            "initial_aggregate",
            "final_aggregate",
        }

    def test_comma_seed_list_to_stdout(self, capsys):
        assert main(["simulate", "--seeds", "3,5", "--oracle", str(DEMO_ORACLE)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("seed,iterations,converged")
        assert len(out.strip().splitlines()) == 3

    def test_bad_seed_range_exits_1(self):
        assert main(["simulate", "--seeds", "x..y", "--oracle", str(DEMO_ORACLE)]) == 1


class TestReplay:
    def test_fixture_replays_to_converged(self, capsys):
        assert main(["replay", str(FIXTURE)]) == 0
        out = capsys.readouterr().out
        assert "phase: converged" in out
        assert "iterations: 16" in out

    def test_at_seq_prefix_is_mid_session(self, capsys):
        assert main(["replay", str(FIXTURE), "--at-seq", "10"]) == 0
        out = capsys.readouterr().out
        assert "phase: awaiting" in out

    def test_corrupted_journal_exits_2(self, tmp_path, capsys):
        lines = FIXTURE.read_text(encoding="utf-8").splitlines()
        broken = tmp_path / "broken.journal.jsonl"
        broken.write_text("\n".join([lines[0]] + lines[2:]), encoding="utf-8")  # seq gap
        assert main(["replay", str(broken)]) == 2

    def test_tampered_payload_exits_2(self, tmp_path):
        lines = FIXTURE.read_text(encoding="utf-8").splitlines()
        record = json.loads(lines[3])
        record["payload"] = {"items": "wat"}
        lines[3] = json.dumps(record)
        broken = tmp_path / "tampered.journal.jsonl"
        broken.write_text("\n".join(lines), encoding="utf-8")
        assert main(["replay", str(broken)]) == 2

    def test_missing_journal_exits_1(self):
        assert main(["replay", "/nonexistent.journal.jsonl"]) == 1


class TestPresets:
    def test_lists_all_presets(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        assert "iron_triangle: speed, quality, cost" in out
        assert "eisenhower: importance, urgency + caller-supplied third" in out
        assert "ease_effect: impact, ease + caller-supplied third" in out


class TestEntryPoint:
    def test_console_script_installed(self):
        import subprocess

        result = subprocess.run(
            ["indigo", "presets"], capture_output=True, text=True, timeout=60
        )
        assert result.returncode == 0
        assert "iron_triangle" in result.stdout
