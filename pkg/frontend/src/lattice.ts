/**
 * Half-point score lattice: the 21 admissible values 0.0, 0.5, ..., 10.0.
 *
 * Snapping mirrors the engine's quantization exactly (ties at odd multiples
 * of 0.25 round up), so what the console shows is what the server accepts.
 */

export const SCORE_MIN = 0;
export const SCORE_MAX = 10;
export const SCORE_STEP = 0.5;
export const NEUTRAL_MIDPOINT = 5.0;

export function isLatticeScore(value: number): boolean {
  return (
    Number.isFinite(value) &&
    value >= SCORE_MIN &&
    value <= SCORE_MAX &&
    Number.isInteger(value * 2)
  );
}

/** Nearest lattice value; exact ties round up. Out-of-range input clamps. */
export function snapToLattice(value: number): number {
  const clamped = Math.min(SCORE_MAX, Math.max(SCORE_MIN, value));
  return Math.floor(2 * clamped + 0.5) / 2;
}

/** Canonical wire form with one fractional digit: "7.5", "10.0". */
export function encodeScore(value: number): string {
  if (!isLatticeScore(value)) {
    throw new Error(`not a lattice score: ${value}`);
  }
  return value.toFixed(1);
}

export function parseScore(text: string): number {
  const value = Number(text);
  if (!isLatticeScore(value)) {
    throw new Error(`not a lattice score: ${text}`);
  }
  return value;
}

/** Signed lattice delta like "+1.5", "0.0", "-0.5" to a number. */
export function parseDelta(text: string): number {
  const value = Number(text);
  if (!Number.isFinite(value) || !Number.isInteger(value * 2) || Math.abs(value) > 10) {
    throw new Error(`not a lattice delta: ${text}`);
  }
  return value;
}

export function formatDelta(value: number): string {
  if (value > 0) return `+${value.toFixed(1)}`;
  return value.toFixed(1);
}

/**
 * The claimed weighted gain the engine uses to break voting ties:
 * the weighted sum of a proposal's claimed per-criterion deltas.
 */
export function claimedGain(weights: readonly number[], deltas: readonly number[]): number {
  let total = 0;
  for (let i = 0; i < 3; i++) {
    total += (weights[i] ?? 0) * (deltas[i] ?? 0);
  }
  return total;
}

/** Client-side preview of how the server will normalize raw weights. */
export function normalizePreview(
  raw: readonly [number, number, number],
): [number, number, number] | null {
  if (raw.some((w) => !Number.isFinite(w) || w < 0)) return null;
  const total = raw[0] + raw[1] + raw[2];
  if (total <= 0) return null;
  return [raw[0] / total, raw[1] / total, raw[2] / total];
}
