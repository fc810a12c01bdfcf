/**
 * Test-side utilities: a promise-based wrapper over the session client,
 * chunking of a known route into chat instructions (instructor games),
 * and a parser for the bot's restricted direction grammar (navigator
 * games). These mirror what a human player does, not client internals.
 */

import WebSocket from "ws";
import { SessionClient, type SocketLike, type Step, type WireMessage } from "../src/protocol.js";

export interface Collected {
  client: SessionClient;
  messages: WireMessage[];
  /** Wait until a message of this type arrives (scanning from `from`). */
  waitFor(type: string, from?: number, timeoutMs?: number): Promise<WireMessage>;
}

export async function connect(base: string, sessionId: string): Promise<Collected> {
  const socket = new WebSocket(`${base.replace(/^http/, "ws")}/ws/${sessionId}`);
  await new Promise<void>((resolve, reject) => {
    socket.once("open", () => resolve());
    socket.once("error", reject);
  });
  const client = new SessionClient(socket as unknown as SocketLike, sessionId);
  const messages: WireMessage[] = [];
  const waiters: (() => void)[] = [];
  client.onMessage((message) => {
    messages.push(message);
    for (const poke of waiters.splice(0)) {
      poke();
    }
  });
  async function waitFor(type: string, from = 0, timeoutMs = 10_000): Promise<WireMessage> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const hit = messages.slice(from).find((m) => m.type === type);
      if (hit) {
        return hit;
      }
      if (Date.now() > deadline) {
        throw new Error(`timed out waiting for ${type}; saw ${messages.map((m) => m.type).join(",")}`);
      }
      await new Promise<void>((resolve) => {
        const timer = setTimeout(resolve, 200);
        waiters.push(() => {
          clearTimeout(timer);
          resolve();
        });
      });
    }
  }
  return { client, messages, waitFor };
}

/** Straight-run chunking of a route into bilingual-ish chat instructions. */
export function planInstructions(path: [number, number][]): string[] {
  const names: Record<string, Step> = {};
  const dirOf = (a: [number, number], b: [number, number]): Step => {
    if (b[0] === a[0] && b[1] === a[1] - 1) return "up";
    if (b[0] === a[0] && b[1] === a[1] + 1) return "down";
    if (b[0] === a[0] - 1 && b[1] === a[1]) return "left";
    return "right";
  };
  void names;
  const words = { 1: "one", 2: "two", 3: "three", 4: "four" } as const;
  const out: string[] = [];
  let i = 0;
  while (i < path.length - 1) {
    const step = dirOf(path[i], path[i + 1]);
    let n = 1;
    while (n < 4 && i + n + 1 < path.length && dirOf(path[i + n], path[i + n + 1]) === step) {
      n += 1;
    }
    out.push(`Go ${words[n as 1 | 2 | 3 | 4]} steps ${step}.`);
    i += n;
  }
  return out;
}

const DIRECTION_WORDS: Record<string, Step> = {
  izquierda: "left", left: "left", oeste: "left", west: "left",
  derecha: "right", right: "right", east: "right",
  arriba: "up", up: "up", sube: "up", norte: "up", north: "up",
  abajo: "down", down: "down", baja: "down", sur: "down", south: "down",
};
const NUMBER_WORDS: Record<string, number> = {
  un: 1, una: 1, uno: 1, one: 1, dos: 2, two: 2, tres: 3, three: 3,
  cuatro: 4, four: 4, cinco: 5, five: 5, seis: 6, six: 6,
};

/** Parse the bot's restricted direction grammar into concrete steps. */
export function parseInstruction(text: string): Step[] {
  const words = text
    .toLowerCase()
    .replace(/[^\p{L}\p{N}']+/gu, " ")
    .split(/\s+/)
    .filter(Boolean);
  const steps: Step[] = [];
  let pending: number | null = null;
  const consumed = new Set<number>();
  words.forEach((word, index) => {
    if (consumed.has(index)) {
      return;
    }
    if (/^\d+$/.test(word)) {
      pending = Math.max(1, Math.min(9, Number(word)));
      return;
    }
    if (word in NUMBER_WORDS) {
      pending = NUMBER_WORDS[word];
      return;
    }
    if (word in DIRECTION_WORDS) {
      const step = DIRECTION_WORDS[word];
      let count = pending;
      pending = null;
      if (count == null) {
        const next = words[index + 1];
        if (next && /^\d+$/.test(next)) {
          count = Math.max(1, Math.min(9, Number(next)));
          consumed.add(index + 1);
        } else if (next && next in NUMBER_WORDS) {
          count = NUMBER_WORDS[next];
          consumed.add(index + 1);
        } else {
          count = 1;
        }
      }
      for (let k = 0; k < count; k++) {
        steps.push(step);
      }
    }
  });
  return steps;
}
