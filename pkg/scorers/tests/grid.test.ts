import { describe, expect, it } from "vitest";

import { cosine, getEncoder } from "../src/encoder.js";
import { bilinearResize, buildSimilarityGrid, buildSimilarityGridFromSentences } from "../src/grid.js";
import { configFrom, GRID_COLS, GRID_ROWS } from "../src/types.js";

const config = configFrom({});

describe("encoder", () => {
  it("is deterministic and unit-normalized", () => {
    const encoder = getEncoder("hash-v1");
    const a = encoder.encode("coffee prices rose sharply");
    const b = encoder.encode("coffee prices rose sharply");
    expect(Array.from(a)).toEqual(Array.from(b));
    let norm = 0;
    for (const v of a) norm += v * v;
    expect(Math.sqrt(norm)).toBeCloseTo(1.0, 9);
  });

  it("scores identical sentences at cosine 1", () => {
    const encoder = getEncoder("hash-v1");
    const v = encoder.encode("the garden was quiet");
    expect(cosine(v, v)).toBeCloseTo(1.0, 12);
  });

  it("keeps cosine within [-1, 1] for disjoint sentences", () => {
    const encoder = getEncoder("hash-v1");
    const a = encoder.encode("ocean travel market music");
    const b = encoder.encode("keyboard lantern machine nectar");
    const c = cosine(a, b);
    expect(c).toBeGreaterThanOrEqual(-1);
    expect(c).toBeLessThanOrEqual(1);
    expect(Math.abs(c)).toBeLessThan(0.9); // unrelated content stays far from 1
  });

  it("rejects unknown encoder ids", () => {
    expect(() => getEncoder("bert-large")).toThrow(/unknown encoder/);
  });
});

describe("similarity grid", () => {
  it("gives raw [[1.0]] for an identical single sentence", () => {
    const grid = buildSimilarityGridFromSentences(["The fox ran."], ["The fox ran."], config);
    expect(grid.raw.rows).toBe(1);
    expect(grid.raw.cols).toBe(1);
    expect(grid.raw.data[0]).toBeCloseTo(1.0, 12);
  });

  it("always resizes to 640x32", () => {
    for (const [d, s] of [
      [1, 1],
      [3, 2],
      [50, 7],
      [900, 40],
    ]) {
      const docs = Array.from({ length: d }, (_, i) => `document sentence number ${i} talks about topic ${i % 5}.`);
      const sums = Array.from({ length: s }, (_, i) => `summary sentence ${i} mentions topic ${i % 3}.`);
      const grid = buildSimilarityGridFromSentences(docs, sums, config);
      expect(grid.resized.rows).toBe(GRID_ROWS);
      expect(grid.resized.cols).toBe(GRID_COLS);
      expect(grid.raw.rows).toBe(d);
      expect(grid.raw.cols).toBe(s);
    }
  });

  it("keeps resized entries within the raw min/max (bilinear convexity)", () => {
    const docs = ["alpha beta gamma.", "delta epsilon zeta.", "eta theta iota."];
    const sums = ["alpha beta.", "kappa lambda."];
    const grid = buildSimilarityGridFromSentences(docs, sums, config);
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of grid.raw.data) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
    for (const v of grid.resized.data) {
      expect(v).toBeGreaterThanOrEqual(lo - 1e-9);
      expect(v).toBeLessThanOrEqual(hi + 1e-9);
    }
  });

  it("rejects empty sentence lists", () => {
    expect(() => buildSimilarityGridFromSentences([], ["x."], config)).toThrow(/document/);
    expect(() => buildSimilarityGridFromSentences(["x."], [], config)).toThrow(/summary/);
    expect(() => buildSimilarityGrid("", "summary.", config)).toThrow(/document/);
  });

  it("bilinearResize reproduces a constant grid exactly", () => {
    const input = { rows: 2, cols: 2, data: Float64Array.from([0.5, 0.5, 0.5, 0.5]) };
    const out = bilinearResize(input, 8, 8);
    for (const v of out.data) expect(v).toBeCloseTo(0.5, 12);
  });

  it("bilinearResize interpolates linearly along an axis", () => {
    const input = { rows: 1, cols: 2, data: Float64Array.from([0, 1]) };
    const out = bilinearResize(input, 1, 3);
    expect(Array.from(out.data)).toEqual([0, 0.5, 1]);
  });
});
