/**
 * Thin client over the session HTTP API.
 *
 * Every request for the session carries the participant token; every score
 * leaving this module is a canonical lattice string, enforced at the
 * boundary so no request can ever contain an off-lattice value.
 */

import { encodeScore } from "./lattice.js";

export interface GoalWire {
  title: string;
  statement: string;
  success_criteria: string;
}

export interface CriterionWire {
  name: string;
  description: string;
}

export interface PlanItemWire {
  item_id: string;
  text: string;
}

export interface EditWire {
  kind: "insert_after" | "insert_at_start" | "replace" | "delete";
  target_id?: string;
  new_text?: string;
}

export interface ProposalWire {
  proposal_id: string;
  author: string;
  edits: EditWire[];
  rationale: string;
  claimed_deltas: string[];
  claimed_gain?: number;
}

export interface BallotWire {
  voter: string;
  choice: string;
}

export interface IterationWire {
  index: number;
  plan_revision: number;
  merged_scores: string[];
  aggregate: number;
  weights_in_effect: number[];
  winning_proposal: string | null;
  proposals: ProposalWire[];
  ballots: BallotWire[];
}

export interface WorkingWire {
  index: number;
  plan_revision: number;
  scored: string[];
  abstained_scorers: string[];
  merged_scores: string[] | null;
  aggregate: number | null;
  proposals: ProposalWire[];
  abstained_proposers: string[];
  ballots: BallotWire[];
  abstained_voters: string[];
  winner: string | null;
}

export interface ParticipantWire {
  participant_id: string;
  role: "human" | "ai";
  capabilities: string[];
}

export interface SessionSnapshot {
  session_id: string;
  phase: string;
  goal: GoalWire | null;
  schema: { criteria: CriterionWire[]; preset_id: string | null } | null;
  weights: number[] | null;
  merge_mode: string;
  convergence: { threshold: number; window: number; max_iterations: number };
  participants: ParticipantWire[];
  plan: { revision: number; parent_revision: number | null; items: PlanItemWire[] } | null;
  iterations: IterationWire[];
  epoch_history: number[];
  current: WorkingWire | null;
  abandon_reason: string | null;
}

export interface JournalEvent {
  seq: number;
  session_id: string;
  ts: string;
  kind: string;
  payload: Record<string, unknown>;
}

export class ApiCallError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export const HOLD_STEADY = "HOLD_STEADY";

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    public readonly sessionId: string,
    public readonly participantId: string,
    private readonly token: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = {
      method,
      headers: {
        "content-type": "application/json",
        "x-participant-token": this.token,
      },
    };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const apiError = payload as { code?: string; message?: string };
      throw new ApiCallError(
        response.status,
        apiError.code ?? "internal",
        apiError.message ?? `HTTP ${response.status}`,
      );
    }
    return payload as T;
  }

  snapshot(): Promise<SessionSnapshot> {
    return this.request("GET", `/v1/sessions/${this.sessionId}`);
  }

  async events(after: number, waitSeconds?: number): Promise<JournalEvent[]> {
    const wait = waitSeconds === undefined ? "" : `&wait=${waitSeconds}`;
    const body = await this.request<{ events: JournalEvent[] }>(
      "GET",
      `/v1/sessions/${this.sessionId}/events?after=${after}${wait}`,
    );
    return body.events;
  }

  submitScores(values: readonly [number, number, number]): Promise<SessionSnapshot> {
    return this.request("POST", `/v1/sessions/${this.sessionId}/scores`, {
      participant: this.participantId,
      scores: values.map(encodeScore),
    });
  }

  castBallot(choice: string): Promise<SessionSnapshot> {
    return this.request("POST", `/v1/sessions/${this.sessionId}/ballots`, {
      participant: this.participantId,
      choice,
    });
  }

  abstain(kind: "scores" | "proposals" | "ballots"): Promise<unknown> {
    return this.request("POST", `/v1/sessions/${this.sessionId}/${kind}`, {
      participant: this.participantId,
      abstain: true,
    });
  }

  updateWeights(raw: readonly [number, number, number]): Promise<SessionSnapshot> {
    return this.request("POST", `/v1/sessions/${this.sessionId}/weights`, {
      participant: this.participantId,
      weights: [...raw],
    });
  }

  abandon(reason: string): Promise<SessionSnapshot> {
    return this.request("POST", `/v1/sessions/${this.sessionId}/abandon`, {
      participant: this.participantId,
      reason,
    });
  }
}
