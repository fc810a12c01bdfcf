/**
 * Client-side view of one session. The server is authoritative: every
 * transition here is driven by an inbound message. The only local flourish
 * is the optimistic avatar, which is reconciled (snapped back) by the next
 * authoritative game_state.
 */

import type {
  ChatRecvPayload,
  GameOverPayload,
  GameStatePayload,
  MapPayload,
  Role,
  SessionConfigPayload,
  Step,
  WireMessage,
} from "./protocol.js";

export interface ChatEntry {
  speaker: string;
  text: string;
  label?: string;
}

export class ClientState {
  stage: "connecting" | "game" | "questionnaire" | "done" = "connecting";
  condition = "";
  timeLimitS = 420;
  gameIndex = -1;
  role: Role | null = null;
  map: MapPayload | null = null;
  avatar: [number, number] | null = null;
  optimisticAvatar: [number, number] | null = null;
  completed = false;
  gameStartedAt = 0;
  lastKnownElapsedMs = 0;
  chat: ChatEntry[] = [];
  errors: string[] = [];
  lastGameOver: GameOverPayload | null = null;

  get gameActive(): boolean {
    return this.stage === "game" && this.map !== null && !this.completed;
  }

  /** Chat is writable only during an active game. */
  get chatEnabled(): boolean {
    return this.gameActive;
  }

  get displayAvatar(): [number, number] | null {
    return this.optimisticAvatar ?? this.avatar;
  }

  remainingSeconds(nowMs: number, referenceMs: number): number {
    const elapsed = this.lastKnownElapsedMs + Math.max(0, nowMs - referenceMs);
    return Math.max(0, this.timeLimitS - Math.floor(elapsed / 1000));
  }

  /** Locally project a move while waiting for the authoritative state. */
  predictMove(step: Step): void {
    if (!this.map || !this.gameActive) {
      return;
    }
    const base = this.displayAvatar ?? this.map.start;
    const deltas: Record<Step, [number, number]> = {
      up: [0, -1],
      down: [0, 1],
      left: [-1, 0],
      right: [1, 0],
    };
    const [dx, dy] = deltas[step];
    const next: [number, number] = [base[0] + dx, base[1] + dy];
    if (next[0] >= 0 && next[0] < this.map.width && next[1] >= 0 && next[1] < this.map.height) {
      this.optimisticAvatar = next;
    }
  }

  apply(message: WireMessage): void {
    switch (message.type) {
      case "session_config": {
        const payload = message.payload as unknown as SessionConfigPayload;
        this.condition = payload.condition;
        this.timeLimitS = payload.time_limit_s;
        this.stage = payload.stage === "game" ? "game" : payload.stage;
        if (payload.stage === "game" && payload.map) {
          this.gameIndex = payload.game_index ?? this.gameIndex;
          this.role = payload.role ?? null;
          this.map = payload.map;
          this.avatar = payload.map.start;
          this.optimisticAvatar = null;
          this.completed = false;
          this.gameStartedAt = payload.started_at ?? 0;
          this.lastKnownElapsedMs = 0;
        }
        break;
      }
      case "chat_recv": {
        const payload = message.payload as unknown as ChatRecvPayload;
        this.chat.push({ speaker: payload.speaker, text: payload.text, label: payload.label });
        break;
      }
      case "game_state": {
        const payload = message.payload as unknown as GameStatePayload;
        this.avatar = payload.avatar;
        this.optimisticAvatar = null; // reconcile: server wins
        this.completed = payload.completed;
        break;
      }
      case "game_over": {
        const payload = message.payload as unknown as GameOverPayload;
        this.lastGameOver = payload;
        this.completed = true;
        if (payload.next === "questionnaire") {
          this.stage = "questionnaire";
        } else if (payload.next === "done") {
          this.stage = "done";
        }
        break;
      }
      case "questionnaire_ack": {
        const stage = (message.payload as { stage?: string }).stage;
        if (stage === "game") {
          this.stage = "game";
        } else if (stage === "done") {
          this.stage = "done";
        }
        break;
      }
      case "error": {
        const payload = message.payload as { message?: string; code?: string };
        this.errors.push(payload.code ? `${payload.code}: ${payload.message}` : String(payload.message));
        // a rejected move snaps the optimistic avatar back
        this.optimisticAvatar = null;
        break;
      }
      default:
        break;
    }
  }
}
