import { describe, expect, it } from "vitest";

import {
  DEFAULT_K,
  EXCERPT_LIMIT,
  clampK,
  filterRequirements,
  formatScore,
  initialState,
  pageCount,
  pageOf,
  pairKey,
  parseExport,
  seedVerdicts,
  truncateExcerpt,
} from "../src/state.js";
import type { RequirementRow } from "../src/api.js";

function row(id: string): RequirementRow {
  return { id, description: `text for ${id}`, language: "en", accepted: 0, rejected: 0 };
}

describe("clampK", () => {
  it("keeps values inside 1..20", () => {
    expect(clampK(7)).toBe(7);
    expect(clampK(1)).toBe(1);
    expect(clampK(20)).toBe(20);
  });

  it("clamps out-of-range and truncates fractions", () => {
    expect(clampK(0)).toBe(1);
    expect(clampK(-3)).toBe(1);
    expect(clampK(21)).toBe(20);
    expect(clampK(250)).toBe(20);
    expect(clampK(3.9)).toBe(3);
  });

  it("falls back to the default on non-numbers", () => {
    expect(clampK(Number.NaN)).toBe(DEFAULT_K);
    expect(clampK(Number.POSITIVE_INFINITY)).toBe(DEFAULT_K);
  });
});

describe("truncateExcerpt", () => {
  it("passes short text through untouched", () => {
    const text = "x".repeat(EXCERPT_LIMIT);
    expect(truncateExcerpt(text)).toEqual({ shown: text, truncated: false });
  });

  it("cuts at exactly the limit", () => {
    const text = "a".repeat(EXCERPT_LIMIT + 1);
    const cut = truncateExcerpt(text);
    expect(cut.truncated).toBe(true);
    expect(cut.shown).toBe(text.slice(0, EXCERPT_LIMIT));
    expect(cut.shown.length).toBe(400);
  });
});

describe("parseExport / seedVerdicts", () => {
  it("reads tab-separated accepted pairs", () => {
    const pairs = parseExport("P_1\tC_1_1\nP_2\tC_1_2\n");
    expect(pairs).toEqual([
      ["P_1", "C_1_1"],
      ["P_2", "C_1_2"],
    ]);
    const verdicts = seedVerdicts(pairs);
    expect(verdicts.get(pairKey("P_1", "C_1_1"))).toBe("accept");
    expect(verdicts.get(pairKey("P_2", "C_1_2"))).toBe("accept");
    expect(verdicts.size).toBe(2);
  });

  it("tolerates empty exports and blank lines", () => {
    expect(parseExport("")).toEqual([]);
    expect(parseExport("\n\n")).toEqual([]);
  });
});

describe("filterRequirements", () => {
  const rows = [row("C_9_1"), row("C_1_1"), row("C_1_2"), row("C_5_1")];

  it("matches on id substring, case-insensitive", () => {
    expect(filterRequirements(rows, "c_1").map((r) => r.id)).toEqual(["C_1_1", "C_1_2"]);
  });

  it("preserves server order and passes empty filters through", () => {
    expect(filterRequirements(rows, "")).toEqual(rows);
    expect(filterRequirements(rows, "  ")).toEqual(rows);
    expect(filterRequirements(rows, "_1").map((r) => r.id)).toEqual([
      "C_9_1",
      "C_1_1",
      "C_1_2",
      "C_5_1",
    ]);
  });
});

describe("pagination", () => {
  it("slices pages of the configured size", () => {
    const items = Array.from({ length: 25 }, (_, i) => i);
    expect(pageCount(25)).toBe(3);
    expect(pageOf(items, 0)).toEqual(items.slice(0, 10));
    expect(pageOf(items, 2)).toEqual(items.slice(20));
  });

  it("treats an empty list as one page", () => {
    expect(pageCount(0)).toBe(1);
    expect(pageOf([], 0)).toEqual([]);
  });
});

describe("formatScore", () => {
  it("renders exactly three decimals", () => {
    expect(formatScore(0.987654)).toBe("0.988");
    expect(formatScore(1)).toBe("1.000");
    expect(formatScore(-0.25)).toBe("-0.250");
  });
});

describe("initialState", () => {
  it("starts loading with the default k", () => {
    const state = initialState();
    expect(state.loading).toBe(true);
    expect(state.k).toBe(DEFAULT_K);
    expect(state.requirements).toEqual([]);
    expect(state.verdicts.size).toBe(0);
  });
});
