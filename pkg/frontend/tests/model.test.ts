import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import type { JournalEvent, SessionSnapshot } from "../src/api.js";
import { buildViewModel } from "../src/model.js";

interface FixtureSession {
  snapshot: SessionSnapshot;
  events: JournalEvent[];
}

const here = dirname(fileURLToPath(import.meta.url));
const fixture: { mid: FixtureSession; terminal: FixtureSession } = JSON.parse(
  readFileSync(join(here, "fixtures", "console_session.json"), "utf-8"),
);

describe("view model from a real mid-vote session", () => {
  const vm = buildViewModel(fixture.mid.snapshot, fixture.mid.events, "expert");

  it("reload reconstructs the identical view from the same API responses", () => {
    const again = buildViewModel(
      JSON.parse(JSON.stringify(fixture.mid.snapshot)),
      JSON.parse(JSON.stringify(fixture.mid.events)),
      "expert",
    );
    expect(again).toEqual(vm);
  });

  it("derives the aggregate series from the iteration records", () => {
    expect(vm.aggregateSeries).toEqual(
      fixture.mid.snapshot.iterations.map((r) => ({
        iteration: r.index,
        aggregate: r.aggregate,
      })),
    );
  });

  it("marks the window reset after the reweight", () => {
    // the fixture reweights after iteration 1 completed
    expect(vm.resetsAfterIteration).toEqual([1]);
  });

  it("computes client gains that match the engine's snapshot values", () => {
    const engineGains = fixture.mid.snapshot.current!.proposals.map((p) => p.claimed_gain!);
    const clientGains = vm.proposals.map((p) => p.clientGain);
    clientGains.forEach((gain, i) => {
      expect(Math.abs(gain - engineGains[i]!)).toBeLessThanOrEqual(1e-9);
    });
  });

  it("lists HOLD_STEADY last among the ballot options", () => {
    expect(vm.ballotOptions.at(-1)?.choice).toBe("HOLD_STEADY");
    expect(vm.ballotOptions.map((o) => o.choice).slice(0, -1)).toEqual(
      vm.proposals.map((p) => p.proposalId),
    );
  });

  it("renders a replace edit as old-versus-new and sequential deletes correctly", () => {
    const replaceDiff = vm.proposals[0]!.diff[0]!;
    expect(replaceDiff.kind).toBe("replace");
    expect(replaceDiff.oldText).toBe("Write the announcement.");
    expect(replaceDiff.newText).toBe("Write a sharper announcement.");
    const second = vm.proposals[1]!;
    expect(second.diff.map((d) => d.kind)).toEqual(["insert", "delete"]);
    expect(second.diff[1]!.oldText).toBe("Write the announcement.");
  });

  it("tells the viewer to vote, since they have not yet", () => {
    expect(vm.phase).toBe("awaiting_votes");
    expect(vm.viewer.voted).toBe(false);
    expect(vm.callToAction).toMatch(/ballot/i);
  });

  it("has no terminal banner mid-session", () => {
    expect(vm.terminal).toBeNull();
  });
});

describe("view model at a converged session", () => {
  const vm = buildViewModel(fixture.terminal.snapshot, fixture.terminal.events, "expert");

  it("shows the terminal banner with the final plan available", () => {
    expect(vm.terminal).toEqual({ kind: "converged", reason: null });
    expect(vm.planItems.length).toBeGreaterThan(0);
    expect(vm.callToAction).toMatch(/converged/i);
  });

  it("keeps the full aggregate history for the chart", () => {
    expect(vm.aggregateSeries.length).toBe(fixture.terminal.snapshot.iterations.length);
    expect(vm.aggregateSeries.at(-1)?.aggregate).toBe(10.0);
  });
});
