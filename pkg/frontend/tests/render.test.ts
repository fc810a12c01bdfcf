import { describe, expect, it } from "vitest";

import { buildDrawOps, buildViewOps } from "../src/render.js";
import { ClientState } from "../src/state.js";
import { stepForCellClick, stepForKey } from "../src/input.js";
import { clampSlider, QuestionnaireForm } from "../src/questionnaire.js";
import type { MapPayload, WireMessage } from "../src/protocol.js";

const MAP: MapPayload = {
  id: "probe",
  width: 5,
  height: 5,
  start: [2, 0],
  end: [2, 4],
  landmarks: [{ spanish: "roca", english: "rock", gender: "feminine", x: 1, y: 1 }],
};

function msg(type: string, payload: Record<string, unknown>): WireMessage {
  return { type, seq: 1, session_id: "s", payload };
}

function configured(role: "instructor" | "navigator", withPath: boolean): ClientState {
  const state = new ClientState();
  const map = { ...MAP } as MapPayload;
  if (withPath) {
    map.target_path = [
      [2, 0],
      [2, 1],
      [2, 2],
      [2, 3],
      [2, 4],
    ];
  }
  state.apply(
    msg("session_config", {
      protocol: 1,
      condition: "alt_baseline",
      stage: "game",
      time_limit_s: 420,
      game_index: 0,
      role,
      map,
      started_at: 0,
    }),
  );
  return state;
}

describe("rendering", () => {
  it("instructor view shows the route overlay", () => {
    const ops = buildViewOps(configured("instructor", true));
    expect(ops.some((op) => op.kind === "path")).toBe(true);
    expect(ops.some((op) => op.kind === "start")).toBe(true);
    expect(ops.some((op) => op.kind === "end")).toBe(true);
    expect(ops.some((op) => op.kind === "landmark")).toBe(true);
  });

  it("navigator view never emits a path op", () => {
    // normal server behavior: no target_path in the payload
    expect(buildViewOps(configured("navigator", false)).some((op) => op.kind === "path")).toBe(false);
    // defense in depth: even a leaked path is not drawn for a navigator
    const leaked = configured("navigator", true);
    expect(buildViewOps(leaked).some((op) => op.kind === "path")).toBe(false);
    expect(
      buildDrawOps(leaked.map!, "navigator", [2, 0]).some((op) => op.kind === "path"),
    ).toBe(false);
  });

  it("draws the avatar at the authoritative cell", () => {
    const state = configured("navigator", false);
    state.apply(msg("game_state", { game_index: 0, avatar: [3, 2], applied: true, completed: false, n_moves: 5 }));
    const avatar = buildViewOps(state).find((op) => op.kind === "avatar");
    expect(avatar).toMatchObject({ x: 3, y: 2 });
  });
});

describe("state transitions", () => {
  it("optimistic moves are reconciled by authoritative game_state", () => {
    const state = configured("navigator", false);
    state.predictMove("down");
    expect(state.displayAvatar).toEqual([2, 1]);
    state.apply(msg("game_state", { game_index: 0, avatar: [2, 0], applied: false, completed: false, n_moves: 0 }));
    expect(state.displayAvatar).toEqual([2, 0]); // snapped back
  });

  it("chat is disabled outside an active game", () => {
    const state = configured("navigator", false);
    expect(state.chatEnabled).toBe(true);
    state.apply(msg("game_over", { game_index: 0, completed: true, duration_s: 10, next: "questionnaire" }));
    expect(state.stage).toBe("questionnaire");
    expect(state.chatEnabled).toBe(false);
  });
});

describe("input", () => {
  it("maps arrow keys to steps only for an active navigator", () => {
    const state = configured("navigator", false);
    expect(stepForKey(state, "ArrowDown")).toBe("down");
    expect(stepForKey(state, "KeyA")).toBeNull();
    const instructor = configured("instructor", true);
    expect(stepForKey(instructor, "ArrowDown")).toBeNull();
    state.apply(msg("game_over", { game_index: 0, completed: true, duration_s: 9, next: "questionnaire" }));
    expect(stepForKey(state, "ArrowDown")).toBeNull(); // input after game over ignored
  });

  it("accepts only 4-adjacent cell clicks", () => {
    const state = configured("navigator", false);
    expect(stepForCellClick(state, [2, 1])).toBe("down");
    expect(stepForCellClick(state, [1, 0])).toBe("left");
    expect(stepForCellClick(state, [4, 4])).toBeNull();
    expect(stepForCellClick(state, [3, 1])).toBeNull(); // diagonal
  });
});

describe("questionnaire form", () => {
  it("clamps slider values to integers in [0, 100]", () => {
    expect(clampSlider(250)).toBe(100);
    expect(clampSlider(-3)).toBe(0);
    expect(clampSlider(49.6)).toBe(50);
    const form = new QuestionnaireForm();
    form.setSlider("enjoy", 101);
    form.setSlider("success", 87.2);
    form.setBackground("native_languages", "spanish");
    const answers = form.toAnswers();
    expect(answers.enjoy).toBe(100);
    expect(answers.success).toBe(87);
    expect(answers.background.native_languages).toBe("spanish");
  });
});
