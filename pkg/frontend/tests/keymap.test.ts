import { describe, expect, it } from "vitest";

import { isExpertOnlyKey, keymapHelp, keyToMove } from "../src/keymap";

describe("keyToMove", () => {
  it("maps arrows to tree moves", () => {
    expect(keyToMove("ArrowRight", "expert")).toEqual({ move: "next_sibling" });
    expect(keyToMove("ArrowLeft", "expert")).toEqual({ move: "prev_sibling" });
    expect(keyToMove("ArrowDown", "expert")).toEqual({ move: "into" });
    expect(keyToMove("ArrowUp", "expert")).toEqual({ move: "out" });
  });

  it("maps R and W in both cases", () => {
    expect(keyToMove("r", "novice")).toEqual({ move: "repeat_cue" });
    expect(keyToMove("R", "expert")).toEqual({ move: "repeat_cue" });
    expect(keyToMove("w", "novice")).toEqual({ move: "where_am_i" });
    expect(keyToMove("W", "expert")).toEqual({ move: "where_am_i" });
  });

  it("maps digits to zero-based relationship jumps for experts", () => {
    expect(keyToMove("3", "expert")).toEqual({
      move: "follow_relationship",
      index: 2,
    });
    expect(keyToMove("1", "expert")).toEqual({
      move: "follow_relationship",
      index: 0,
    });
    expect(keyToMove("9", "expert")).toEqual({
      move: "follow_relationship",
      index: 8,
    });
  });

  it("rejects digits for novices", () => {
    expect(keyToMove("3", "novice")).toBeNull();
    expect(isExpertOnlyKey("3", "novice")).toBe(true);
    expect(isExpertOnlyKey("3", "expert")).toBe(false);
  });

  it("ignores unmapped keys", () => {
    for (const key of ["a", "0", "Escape", "Enter", " "]) {
      expect(keyToMove(key, "expert")).toBeNull();
      expect(isExpertOnlyKey(key, "novice")).toBe(false);
    }
  });
});

describe("keymapHelp", () => {
  it("hides the relationship shortcut from novices", () => {
    const novice = keymapHelp("novice").join("\n");
    const expert = keymapHelp("expert").join("\n");
    expect(novice).not.toContain("1-9");
    expect(expert).toContain("1-9");
  });
});
