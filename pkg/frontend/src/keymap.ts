import type { Audience, NavMove } from "./types";

/**
 * Map a keyboard key to a navigation move, or null for unmapped keys.
 *
 * Arrows walk the containment tree, R repeats, W asks "where am I"; the
 * digits 1..9 follow the focused element's k-th outgoing relationship and
 * are an expert-only vocabulary (novices get null and the UI shows a hint).
 */
export function keyToMove(key: string, audience: Audience): NavMove | null {
  switch (key) {
    case "ArrowRight":
      return { move: "next_sibling" };
    case "ArrowLeft":
      return { move: "prev_sibling" };
    case "ArrowDown":
      return { move: "into" };
    case "ArrowUp":
      return { move: "out" };
    case "r":
    case "R":
      return { move: "repeat_cue" };
    case "w":
    case "W":
      return { move: "where_am_i" };
    default:
      break;
  }
  if (/^[1-9]$/.test(key)) {
    if (audience !== "expert") {
      return null;
    }
    return { move: "follow_relationship", index: Number(key) - 1 };
  }
  return null;
}

/** True when the key is a relationship shortcut that novices cannot use. */
export function isExpertOnlyKey(key: string, audience: Audience): boolean {
  return audience !== "expert" && /^[1-9]$/.test(key);
}

/** Lines for the help overlay, filtered by audience. */
export function keymapHelp(audience: Audience): string[] {
  const lines = [
    "Arrow right / left: next / previous sibling",
    "Arrow down: into the focused element",
    "Arrow up: out to the container",
    "R: repeat the current cue",
    "W: where am I?",
  ];
  if (audience === "expert") {
    lines.push("1-9: follow the k-th outgoing relationship");
  }
  return lines;
}
