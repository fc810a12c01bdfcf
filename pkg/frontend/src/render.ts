/**
 * Grid rendering, split into a pure draw-op builder (testable anywhere)
 * and a canvas painter that executes the ops in a browser.
 *
 * The navigator view must never show the route: the op builder only emits
 * a path overlay when the player is the instructor AND the server actually
 * sent a target path.
 */

import type { MapPayload, Role } from "./protocol.js";
import type { ClientState } from "./state.js";

export const CELL_PX = 28;

export type DrawOp =
  | { kind: "grid"; width: number; height: number }
  | { kind: "path"; cells: [number, number][] }
  | { kind: "start"; x: number; y: number }
  | { kind: "end"; x: number; y: number }
  | { kind: "landmark"; x: number; y: number; labelSpanish: string; labelEnglish: string }
  | { kind: "avatar"; x: number; y: number };

export function buildDrawOps(map: MapPayload, role: Role | null, avatar: [number, number] | null): DrawOp[] {
  const ops: DrawOp[] = [{ kind: "grid", width: map.width, height: map.height }];
  if (role === "instructor" && map.target_path) {
    ops.push({ kind: "path", cells: map.target_path });
  }
  ops.push({ kind: "start", x: map.start[0], y: map.start[1] });
  ops.push({ kind: "end", x: map.end[0], y: map.end[1] });
  for (const lm of map.landmarks) {
    ops.push({
      kind: "landmark",
      x: lm.x,
      y: lm.y,
      labelSpanish: lm.spanish,
      labelEnglish: lm.english,
    });
  }
  if (avatar) {
    ops.push({ kind: "avatar", x: avatar[0], y: avatar[1] });
  }
  return ops;
}

export function buildViewOps(state: ClientState): DrawOp[] {
  if (!state.map) {
    return [];
  }
  return buildDrawOps(state.map, state.role, state.displayAvatar);
}

/** Executes draw ops on a 2D canvas context. */
export class CanvasPainter {
  constructor(private ctx: CanvasRenderingContext2D) {}

  paint(ops: DrawOp[]): void {
    const ctx = this.ctx;
    for (const op of ops) {
      switch (op.kind) {
        case "grid": {
          ctx.clearRect(0, 0, op.width * CELL_PX, op.height * CELL_PX);
          ctx.strokeStyle = "#d8d4c8";
          ctx.lineWidth = 1;
          for (let x = 0; x <= op.width; x++) {
            ctx.beginPath();
            ctx.moveTo(x * CELL_PX, 0);
            ctx.lineTo(x * CELL_PX, op.height * CELL_PX);
            ctx.stroke();
          }
          for (let y = 0; y <= op.height; y++) {
            ctx.beginPath();
            ctx.moveTo(0, y * CELL_PX);
            ctx.lineTo(op.width * CELL_PX, y * CELL_PX);
            ctx.stroke();
          }
          break;
        }
        case "path": {
          ctx.strokeStyle = "#7aa5d2";
          ctx.lineWidth = 3;
          ctx.beginPath();
          op.cells.forEach(([x, y], i) => {
            const cx = (x + 0.5) * CELL_PX;
            const cy = (y + 0.5) * CELL_PX;
            if (i === 0) ctx.moveTo(cx, cy);
            else ctx.lineTo(cx, cy);
          });
          ctx.stroke();
          break;
        }
        case "start": {
          ctx.fillStyle = "#333";
          ctx.font = `${CELL_PX * 0.8}px sans-serif`;
          ctx.textAlign = "center";
          ctx.textBaseline = "middle";
          ctx.fillText("X", (op.x + 0.5) * CELL_PX, (op.y + 0.5) * CELL_PX);
          break;
        }
        case "end": {
          ctx.fillStyle = "#2c7a2c";
          ctx.font = `${CELL_PX * 0.8}px sans-serif`;
          ctx.textAlign = "center";
          ctx.textBaseline = "middle";
          ctx.fillText("✓", (op.x + 0.5) * CELL_PX, (op.y + 0.5) * CELL_PX);
          break;
        }
        case "landmark": {
          ctx.fillStyle = "#9c6b30";
          ctx.beginPath();
          ctx.arc((op.x + 0.5) * CELL_PX, (op.y + 0.5) * CELL_PX, CELL_PX * 0.3, 0, Math.PI * 2);
          ctx.fill();
          ctx.fillStyle = "#333";
          ctx.font = `${CELL_PX * 0.4}px sans-serif`;
          ctx.textAlign = "center";
          ctx.textBaseline = "top";
          ctx.fillText(op.labelSpanish, (op.x + 0.5) * CELL_PX, (op.y + 0.9) * CELL_PX);
          break;
        }
        case "avatar": {
          ctx.fillStyle = "#b03030";
          ctx.beginPath();
          ctx.arc((op.x + 0.5) * CELL_PX, (op.y + 0.5) * CELL_PX, CELL_PX * 0.35, 0, Math.PI * 2);
          ctx.fill();
          break;
        }
      }
    }
  }
}
