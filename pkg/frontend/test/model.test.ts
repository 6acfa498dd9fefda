import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";

import { parseDispersionCsv, EmptySelection } from "../src/csv.js";
import { buildModel, detectCrossings, minimizerAtSmallField } from "../src/model.js";

function fixture(nu: string) {
  const path = new URL(`./fixtures/dispersion_nu_${nu}.csv`, import.meta.url).pathname;
  return parseDispersionCsv(readFileSync(path, "utf-8"));
}

describe("crossing detection", () => {
  it("interpolates a simple sign change", () => {
    const pts: Array<[number, number]> = [
      [1.0, 1.5],
      [2.0, 1.5],
    ];
    // mu - b goes +0.5 -> -0.5: crossing at 1.5
    expect(detectCrossings(pts)).toEqual([1.5]);
  });

  it("skips non-finite points", () => {
    const pts: Array<[number, number]> = [
      [1.0, 2.0],
      [2.0, Number.NaN],
      [3.0, 2.0],
    ];
    expect(detectCrossings(pts)).toEqual([]);
  });
});

describe.each([
  ["0.25", 0.25, [1, 2, 3, 4], 1],
  ["-0.25", -0.25, [1, 2, 3], 0],
  ["0", 0.0, [1, 2, 3], 1],
])("panel for nu=%s", (tag, nu, crossingMs, smallFieldMinimizer) => {
  const rows = fixture(tag);
  const model = buildModel(rows, { nu });

  it("marks crossings at b = 2(m - nu) within 1e-3", () => {
    for (const m of crossingMs) {
      const expected = 2.0 * (m - nu);
      const found = model.crossings.filter((c) => c.m === m);
      expect(found.length).toBe(1);
      expect(Math.abs(found[0].b - expected)).toBeLessThan(1e-3);
    }
  });

  it("has no crossing for non-positive momentum curves", () => {
    expect(model.crossings.every((c) => c.m - nu > 0)).toBe(true);
  });

  it("lowest small-field curve matches the expected minimizer", () => {
    expect(minimizerAtSmallField(model)).toBe(smallFieldMinimizer);
  });

  it("is a pure function of the rows", () => {
    const again = buildModel(rows, { nu });
    expect(again).toEqual(model);
  });
});

describe("selection handling", () => {
  it("raises on empty selection", () => {
    const rows = fixture("0.25");
    expect(() => buildModel(rows, { nu: 0.4 })).toThrow(EmptySelection);
    expect(() => buildModel(rows, { nu: 0.25, mFilter: [17] })).toThrow(EmptySelection);
  });

  it("honours the momentum filter", () => {
    const rows = fixture("0.25");
    const model = buildModel(rows, { nu: 0.25, mFilter: [1, 2] });
    expect(model.curves.map((c) => c.m)).toEqual([1, 2]);
  });

  it("can disable crossing markers", () => {
    const rows = fixture("0.25");
    const model = buildModel(rows, { nu: 0.25, markCrossings: false });
    expect(model.crossings).toEqual([]);
  });
});
