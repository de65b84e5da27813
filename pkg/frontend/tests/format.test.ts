import { describe, expect, it } from "vitest";

import { boundLabel, formatPercent, gapText, meetsGuarantee, roundHalfEven } from "../src/format.js";

describe("roundHalfEven", () => {
  it("rounds ordinary values", () => {
    expect(roundHalfEven(33.333333, 1)).toBe(33.3);
    expect(roundHalfEven(33.35001, 1)).toBe(33.4);
    expect(roundHalfEven(33.34999, 1)).toBe(33.3);
  });

  it("breaks ties toward even", () => {
    expect(roundHalfEven(12.35, 1)).toBe(12.4); // 123|5 -> 124 (even)
    expect(roundHalfEven(12.25, 1)).toBe(12.2); // 122|5 -> 122 (even)
    expect(roundHalfEven(0.5, 0)).toBe(0);
    expect(roundHalfEven(1.5, 0)).toBe(2);
    expect(roundHalfEven(2.5, 0)).toBe(2);
  });
});

describe("formatPercent", () => {
  it("shows one decimal", () => {
    expect(formatPercent(0.5)).toBe("50.0%");
    expect(formatPercent(1 / 3)).toBe("33.3%");
    expect(formatPercent(0)).toBe("0.0%");
    expect(formatPercent(4 / 9)).toBe("44.4%");
  });

  it("matches the API value after rounding only", () => {
    expect(formatPercent(0.3333328324034143)).toBe("33.3%");
    expect(formatPercent(0.2500000000007)).toBe("25.0%");
  });
});

describe("gapText and guarantee badge", () => {
  it("signs the gap", () => {
    expect(gapText(0.5, 1 / 3)).toBe("+16.7 pts vs 33.3%");
    expect(gapText(0.25, 1 / 3)).toBe("-8.3 pts vs 33.3%");
  });

  it("badge shows exactly when the benchmark is met", () => {
    expect(meetsGuarantee(1 / 3, 1 / 3)).toBe(true);
    expect(meetsGuarantee(0.3333328, 1 / 3)).toBe(true); // engine tolerance
    expect(meetsGuarantee(0.25, 1 / 3)).toBe(false);
  });

  it("labels the bound by dimension", () => {
    expect(boundLabel(2)).toBe("1/(n+1) = 1/3");
    expect(boundLabel(3)).toBe("1/(n+1) = 1/4");
  });
});
