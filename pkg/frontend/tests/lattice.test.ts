import { describe, expect, it } from "vitest";

import {
  claimedGain,
  encodeScore,
  formatDelta,
  isLatticeScore,
  normalizePreview,
  parseDelta,
  snapToLattice,
} from "../src/lattice.js";

describe("snapToLattice", () => {
  it("matches the engine's tie rule: odd multiples of 0.25 round up", () => {
    expect(snapToLattice(7.25)).toBe(7.5);
    expect(snapToLattice(0.25)).toBe(0.5);
    expect(snapToLattice(9.75)).toBe(10.0);
  });

  it("snaps typed values to the nearest half point", () => {
    expect(snapToLattice(7.3)).toBe(7.5);
    expect(snapToLattice(7.2)).toBe(7.0);
    expect(snapToLattice(7.5)).toBe(7.5);
  });

  it("clamps out-of-range input", () => {
    expect(snapToLattice(-3)).toBe(0);
    expect(snapToLattice(42)).toBe(10);
  });

  it("is idempotent on lattice values and sound within a quarter point", () => {
    for (let h = 0; h <= 20; h++) {
      expect(snapToLattice(h / 2)).toBe(h / 2);
    }
    let seed = 12345;
    const random = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let i = 0; i < 1000; i++) {
      const x = random() * 10;
      const snapped = snapToLattice(x);
      expect(isLatticeScore(snapped)).toBe(true);
      expect(Math.abs(snapped - x)).toBeLessThanOrEqual(0.25);
    }
  });
});

describe("encodeScore", () => {
  it("renders one fractional digit", () => {
    expect(encodeScore(7.5)).toBe("7.5");
    expect(encodeScore(10)).toBe("10.0");
    expect(encodeScore(0)).toBe("0.0");
  });

  it("refuses off-lattice values", () => {
    expect(() => encodeScore(7.3)).toThrow();
    expect(() => encodeScore(-1)).toThrow();
  });
});

describe("deltas", () => {
  it("parses signed lattice decimals", () => {
    expect(parseDelta("+2.5")).toBe(2.5);
    expect(parseDelta("-1.0")).toBe(-1.0);
    expect(parseDelta("0.0")).toBe(0.0);
    expect(() => parseDelta("2.3")).toThrow();
  });

  it("formats with an explicit plus", () => {
    expect(formatDelta(2.5)).toBe("+2.5");
    expect(formatDelta(0)).toBe("0.0");
    expect(formatDelta(-0.5)).toBe("-0.5");
  });
});

describe("normalizePreview", () => {
  it("matches server normalization", () => {
    expect(normalizePreview([4, 1, 1])).toEqual([4 / 6, 1 / 6, 1 / 6]);
    expect(normalizePreview([1, 1, 1])).toEqual([1 / 3, 1 / 3, 1 / 3]);
  });

  it("rejects degenerate input", () => {
    expect(normalizePreview([0, 0, 0])).toBeNull();
    expect(normalizePreview([-1, 1, 1])).toBeNull();
  });
});

describe("claimedGain", () => {
  it("is the plain weighted sum", () => {
    expect(claimedGain([0.5, 0.25, 0.25], [1.0, 0.0, -0.5])).toBeCloseTo(0.375, 12);
  });
});
