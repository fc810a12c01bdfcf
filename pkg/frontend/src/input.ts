/**
 * Keyboard and mouse handling for the navigator: arrow keys map to single
 * steps, and a click on a cell 4-adjacent to the avatar is one step in
 * that direction. Anything else is ignored.
 */

import type { Step } from "./protocol.js";
import type { ClientState } from "./state.js";
import { CELL_PX } from "./render.js";

const KEY_STEPS: Record<string, Step> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
};

export function stepForKey(state: ClientState, key: string): Step | null {
  if (state.role !== "navigator" || !state.gameActive) {
    return null;
  }
  return KEY_STEPS[key] ?? null;
}

export function cellFromPixel(px: number, py: number): [number, number] {
  return [Math.floor(px / CELL_PX), Math.floor(py / CELL_PX)];
}

export function stepForCellClick(state: ClientState, cell: [number, number]): Step | null {
  if (state.role !== "navigator" || !state.gameActive) {
    return null;
  }
  const avatar = state.displayAvatar;
  if (!avatar) {
    return null;
  }
  const dx = cell[0] - avatar[0];
  const dy = cell[1] - avatar[1];
  if (dx === 0 && dy === -1) return "up";
  if (dx === 0 && dy === 1) return "down";
  if (dx === -1 && dy === 0) return "left";
  if (dx === 1 && dy === 0) return "right";
  return null; // not 4-adjacent: no message
}
