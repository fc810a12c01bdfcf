/**
 * Wire protocol between the client and the session server: message shapes
 * and a thin WebSocket wrapper that numbers outbound messages and fans
 * inbound ones out to listeners.
 */

export type Role = "instructor" | "navigator";
export type Step = "up" | "down" | "left" | "right";

export interface LandmarkPayload {
  spanish: string;
  english: string;
  gender: string;
  x: number;
  y: number;
}

export interface MapPayload {
  id: string;
  width: number;
  height: number;
  start: [number, number];
  end: [number, number];
  landmarks: LandmarkPayload[];
  /** Present only when this client is the instructor. */
  target_path?: [number, number][];
}

export interface SessionConfigPayload {
  protocol: number;
  condition: string;
  stage: "game" | "questionnaire" | "done";
  time_limit_s: number;
  game_index?: number;
  role?: Role;
  map?: MapPayload;
  started_at?: number;
}

export interface ChatRecvPayload {
  speaker: "bot" | "human";
  text: string;
  label: string;
  t: number;
}

export interface GameStatePayload {
  game_index: number;
  avatar: [number, number];
  applied: boolean;
  completed: boolean;
  n_moves: number;
}

export interface GameOverPayload {
  game_index: number;
  completed: boolean;
  duration_s: number;
  next: "game" | "questionnaire" | "done";
}

export interface WireMessage {
  type: string;
  seq: number;
  session_id: string;
  payload: Record<string, unknown>;
}

export interface QuestionnaireAnswers {
  enjoy: number;
  success: number;
  difficulty_communication: number;
  difficulty_instructions: number;
  background: Record<string, string>;
}

/** The subset of the WebSocket API the client uses (browser or `ws`). */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: unknown }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export type MessageListener = (message: WireMessage) => void;

export class SessionClient {
  private outSeq = 0;
  private listeners: MessageListener[] = [];

  constructor(private socket: SocketLike, readonly sessionId: string) {
    socket.onmessage = (event) => {
      const message = JSON.parse(String(event.data)) as WireMessage;
      for (const listener of this.listeners) {
        listener(message);
      }
    };
  }

  onMessage(listener: MessageListener): void {
    this.listeners.push(listener);
  }

  private send(type: string, payload: Record<string, unknown>): void {
    this.outSeq += 1;
    this.socket.send(JSON.stringify({ type, seq: this.outSeq, payload }));
  }

  join(): void {
    this.send("join", {});
  }

  sendChat(text: string): void {
    this.send("chat_send", { text });
  }

  sendMove(step: Step): void {
    this.send("move", { step });
  }

  submitQuestionnaire(answers: QuestionnaireAnswers): void {
    this.send("questionnaire_submit", answers as unknown as Record<string, unknown>);
  }

  close(): void {
    this.socket.close();
  }
}
