/**
 * Interaction state for the three input surfaces. Controllers own the
 * pending user input and the submit guards; all values cross into the
 * ApiClient already snapped to the lattice.
 */

import type { ApiClient, SessionSnapshot } from "./api.js";
import { ApiCallError } from "./api.js";
import { NEUTRAL_MIDPOINT, normalizePreview, snapToLattice } from "./lattice.js";

export class ScoreEntryController {
  /** The midpoint is preselected so "no strong opinion" is one click away. */
  values: [number, number, number] = [NEUTRAL_MIDPOINT, NEUTRAL_MIDPOINT, NEUTRAL_MIDPOINT];

  /** Accepts anything the user typed or dragged; stores the snapped value. */
  setValue(index: 0 | 1 | 2, raw: number): number {
    const snapped = snapToLattice(raw);
    this.values[index] = snapped;
    return snapped;
  }

  reset(): void {
    this.values = [NEUTRAL_MIDPOINT, NEUTRAL_MIDPOINT, NEUTRAL_MIDPOINT];
  }

  submit(client: ApiClient): Promise<SessionSnapshot> {
    return client.submitScores(this.values);
  }
}

export class VoteController {
  private submitted = false;

  get canVote(): boolean {
    return !this.submitted;
  }

  /** Posts exactly one ballot; a conflict (409) also locks the panel. */
  async cast(client: ApiClient, choice: string): Promise<SessionSnapshot | null> {
    if (this.submitted) return null;
    try {
      const snapshot = await client.castBallot(choice);
      this.submitted = true;
      return snapshot;
    } catch (error) {
      if (error instanceof ApiCallError && error.status === 409) {
        this.submitted = true;
      }
      throw error;
    }
  }

  /** A new iteration reopens the ballot. */
  reopen(): void {
    this.submitted = false;
  }
}

export class WeightPanelController {
  raw: [number, number, number] = [1, 1, 1];

  setRaw(index: 0 | 1 | 2, value: number): void {
    this.raw[index] = value;
  }

  /** What the server will store, shown live; null while the input is invalid. */
  preview(): [number, number, number] | null {
    return normalizePreview(this.raw);
  }

  /** Raw values go to the server; it owns normalization. */
  submit(client: ApiClient): Promise<SessionSnapshot> {
    return client.updateWeights(this.raw);
  }
}
