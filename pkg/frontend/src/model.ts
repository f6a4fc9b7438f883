/**
 * View model: everything the console renders, derived purely from API
 * responses (the snapshot plus the event log). There is no client-local
 * source of truth, so rebuilding from a fresh fetch after a reload yields
 * the identical view.
 */

import type {
  EditWire,
  JournalEvent,
  PlanItemWire,
  ProposalWire,
  SessionSnapshot,
} from "./api.js";
import { HOLD_STEADY } from "./api.js";
import { claimedGain, parseDelta } from "./lattice.js";

export interface DiffRow {
  kind: "replace" | "delete" | "insert" | "keep";
  itemId: string | null;
  oldText: string | null;
  newText: string | null;
}

export interface ProposalView {
  proposalId: string;
  author: string;
  rationale: string;
  deltas: [number, number, number];
  /** Client-recomputed weighted gain; display-only, must match the engine. */
  clientGain: number;
  diff: DiffRow[];
}

export interface BallotOption {
  choice: string;
  label: string;
}

export interface SeriesPoint {
  iteration: number;
  aggregate: number;
}

export interface ViewModel {
  sessionId: string;
  phase: string;
  goalTitle: string;
  criteria: { name: string; description: string }[];
  weights: [number, number, number];
  planRevision: number;
  planItems: PlanItemWire[];
  aggregateSeries: SeriesPoint[];
  /** Iteration counts after which the convergence window was reset. */
  resetsAfterIteration: number[];
  threshold: number;
  proposals: ProposalView[];
  /** Vote choices in display order; HOLD_STEADY is always last. */
  ballotOptions: BallotOption[];
  callToAction: string;
  viewer: { scored: boolean; proposed: boolean; voted: boolean; isScorer: boolean; isProposer: boolean; isVoter: boolean };
  terminal: { kind: string; reason: string | null } | null;
}

function diffForEdits(items: PlanItemWire[], edits: EditWire[]): DiffRow[] {
  // Resolve sequentially, mirroring the engine's edit semantics, so a
  // later edit sees earlier effects within the same proposal.
  const working: PlanItemWire[] = items.map((it) => ({ ...it }));
  const rows: DiffRow[] = [];
  let fresh = 0;
  for (const edit of edits) {
    if (edit.kind === "insert_at_start") {
      const item = { item_id: `new-${++fresh}`, text: edit.new_text ?? "" };
      working.unshift(item);
      rows.push({ kind: "insert", itemId: null, oldText: null, newText: item.text });
      continue;
    }
    const index = working.findIndex((it) => it.item_id === edit.target_id);
    const target = index >= 0 ? working[index] : undefined;
    if (edit.kind === "replace") {
      rows.push({
        kind: "replace",
        itemId: edit.target_id ?? null,
        oldText: target?.text ?? null,
        newText: edit.new_text ?? "",
      });
      if (target) target.text = edit.new_text ?? "";
    } else if (edit.kind === "delete") {
      rows.push({
        kind: "delete",
        itemId: edit.target_id ?? null,
        oldText: target?.text ?? null,
        newText: null,
      });
      if (index >= 0) working.splice(index, 1);
    } else {
      const item = { item_id: `new-${++fresh}`, text: edit.new_text ?? "" };
      if (index >= 0) working.splice(index + 1, 0, item);
      rows.push({
        kind: "insert",
        itemId: edit.target_id ?? null,
        oldText: null,
        newText: item.text,
      });
    }
  }
  return rows;
}

function proposalView(
  proposal: ProposalWire,
  weights: [number, number, number],
  planItems: PlanItemWire[],
): ProposalView {
  const deltas = proposal.claimed_deltas.map(parseDelta) as [number, number, number];
  return {
    proposalId: proposal.proposal_id,
    author: proposal.author,
    rationale: proposal.rationale,
    deltas,
    clientGain: claimedGain(weights, deltas),
    diff: diffForEdits(planItems, proposal.edits),
  };
}

function resetsFromEvents(events: readonly JournalEvent[]): number[] {
  const resets: number[] = [];
  let applied = 0;
  for (const event of events) {
    if (event.kind === "ProposalApplied") applied += 1;
    if (event.kind === "WindowReset") resets.push(applied);
  }
  return resets;
}

function callToAction(snapshot: SessionSnapshot, viewer: ViewModel["viewer"]): string {
  switch (snapshot.phase) {
    case "awaiting_scores":
      if (!viewer.isScorer) return "Waiting for the scorers.";
      return viewer.scored
        ? "Scores in. Waiting for the other scorers."
        : "Rate the current plan on each criterion.";
    case "awaiting_proposals":
      if (!viewer.isProposer) return "Waiting for proposals.";
      return viewer.proposed
        ? "Waiting for the other proposers."
        : "Propose concrete edits, or sit this round out.";
    case "awaiting_votes":
      if (!viewer.isVoter) return "Waiting for the vote.";
      return viewer.voted
        ? "Ballot cast. Waiting for the other voters."
        : "Review the proposals and cast your ballot.";
    case "converged":
      return "Converged: the plan has stabilized.";
    case "iteration_capped":
      return "Stopped at the iteration cap without converging.";
    case "abandoned":
      return "Session abandoned.";
    default:
      return "Working…";
  }
}

export function buildViewModel(
  snapshot: SessionSnapshot,
  events: readonly JournalEvent[],
  viewerId: string,
): ViewModel {
  const weights = (snapshot.weights ?? [1 / 3, 1 / 3, 1 / 3]) as [number, number, number];
  const planItems = snapshot.plan?.items ?? [];
  const me = snapshot.participants.find((p) => p.participant_id === viewerId);
  const current = snapshot.current;
  const viewer = {
    isScorer: me?.capabilities.includes("scorer") ?? false,
    isProposer: me?.capabilities.includes("proposer") ?? false,
    isVoter: me?.capabilities.includes("voter") ?? false,
    scored:
      (current?.scored.includes(viewerId) || current?.abstained_scorers.includes(viewerId)) ??
      false,
    proposed:
      (current?.proposals.some((p) => p.author === viewerId) ||
        current?.abstained_proposers.includes(viewerId)) ??
      false,
    voted:
      (current?.ballots.some((b) => b.voter === viewerId) ||
        current?.abstained_voters.includes(viewerId)) ??
      false,
  };
  const proposals = (current?.proposals ?? []).map((p) => proposalView(p, weights, planItems));
  const terminalKinds = new Set(["converged", "iteration_capped", "abandoned"]);
  return {
    sessionId: snapshot.session_id,
    phase: snapshot.phase,
    goalTitle: snapshot.goal?.title ?? "",
    criteria: snapshot.schema?.criteria ?? [],
    weights,
    planRevision: snapshot.plan?.revision ?? 0,
    planItems,
    aggregateSeries: snapshot.iterations.map((r) => ({
      iteration: r.index,
      aggregate: r.aggregate,
    })),
    resetsAfterIteration: resetsFromEvents(events),
    threshold: snapshot.convergence.threshold,
    proposals,
    ballotOptions: [
      ...proposals.map((p) => ({
        choice: p.proposalId,
        label: `${p.proposalId} by ${p.author} (claimed gain ${p.clientGain.toFixed(3)})`,
      })),
      { choice: HOLD_STEADY, label: "Hold steady (no change this iteration)" },
    ],
    callToAction: callToAction(snapshot, viewer),
    viewer,
    terminal: terminalKinds.has(snapshot.phase)
      ? { kind: snapshot.phase, reason: snapshot.abandon_reason }
      : null,
  };
}
