import { describe, expect, it } from "vitest";

import { charDiff, diffAfter, diffBefore } from "../src/diff.js";

describe("character diff", () => {
  it("equal strings give one equal segment", () => {
    expect(charDiff("same", "same")).toEqual([{ op: "equal", text: "same" }]);
  });

  it("insertion and deletion are reported", () => {
    const segments = charDiff("hate has a home", "hate has no home");
    expect(diffBefore(segments)).toBe("hate has a home");
    expect(diffAfter(segments)).toBe("hate has no home");
    expect(segments.some((s) => s.op === "insert")).toBe(true);
  });

  it("reconstructs both sides for arbitrary inputs", () => {
    const alphabet = "abc ";
    // deterministic pseudo-random without a dependency
    let state = 42;
    const rand = () => {
      state = (state * 1103515245 + 12345) % 2 ** 31;
      return state / 2 ** 31;
    };
    for (let round = 0; round < 200; round++) {
      const make = () =>
        Array.from({ length: Math.floor(rand() * 12) }, () =>
          alphabet.charAt(Math.floor(rand() * alphabet.length)),
        ).join("");
      const before = make();
      const after = make();
      const segments = charDiff(before, after);
      expect(diffBefore(segments)).toBe(before);
      expect(diffAfter(segments)).toBe(after);
      // adjacent segments are merged
      for (let i = 1; i < segments.length; i++) {
        expect(segments[i]!.op).not.toBe(segments[i - 1]!.op);
      }
    }
  });

  it("empty sides", () => {
    expect(charDiff("", "abc")).toEqual([{ op: "insert", text: "abc" }]);
    expect(charDiff("abc", "")).toEqual([{ op: "delete", text: "abc" }]);
    expect(charDiff("", "")).toEqual([]);
  });
});
