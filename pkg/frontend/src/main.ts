/**
 * Browser bootstrap: creates a session over HTTP, opens the WebSocket,
 * wires keyboard/mouse/chat/questionnaire DOM events to the protocol
 * client, and repaints the canvas on every state change.
 */

import { SessionClient, type SocketLike, type Step } from "./protocol.js";
import { ClientState } from "./state.js";
import { CanvasPainter, buildViewOps, CELL_PX } from "./render.js";
import { cellFromPixel, stepForCellClick, stepForKey } from "./input.js";
import { QuestionnaireForm, SLIDER_ITEMS, type SliderKey } from "./questionnaire.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

async function createSession(base: string, condition: string): Promise<string> {
  const resp = await fetch(`${base}/sessions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ condition }),
  });
  if (!resp.ok) {
    throw new Error(`session creation failed: ${resp.status}`);
  }
  const body = (await resp.json()) as { session_id: string };
  return body.session_id;
}

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const condition = params.get("condition") ?? "auto";
  const base = window.location.origin;
  const sessionId = params.get("session") ?? (await createSession(base, condition));

  const wsUrl = `${base.replace(/^http/, "ws")}/ws/${sessionId}`;
  const socket = new WebSocket(wsUrl) as unknown as SocketLike;
  const client = new SessionClient(socket, sessionId);
  const state = new ClientState();

  const canvas = el<HTMLCanvasElement>("map-canvas");
  const ctx = canvas.getContext("2d");
  const painter = ctx ? new CanvasPainter(ctx) : null;
  const chatLog = el<HTMLDivElement>("chat-log");
  const chatInput = el<HTMLInputElement>("chat-input");
  const chatSend = el<HTMLButtonElement>("chat-send");
  const statusLine = el<HTMLDivElement>("status-line");
  const timer = el<HTMLDivElement>("timer");
  const questionnaire = el<HTMLDivElement>("questionnaire");
  const form = new QuestionnaireForm();
  let lastStateAt = performance.now();

  function repaint(): void {
    if (state.map) {
      canvas.width = state.map.width * CELL_PX;
      canvas.height = state.map.height * CELL_PX + CELL_PX;
      painter?.paint(buildViewOps(state));
    }
    chatLog.innerHTML = "";
    for (const entry of state.chat.slice(-50)) {
      const row = document.createElement("div");
      row.className = `chat-row chat-${entry.speaker}`;
      row.textContent = `${entry.speaker === "bot" ? "partner" : "you"}: ${entry.text}`;
      chatLog.appendChild(row);
    }
    chatLog.scrollTop = chatLog.scrollHeight;
    chatInput.disabled = !state.chatEnabled;
    chatSend.disabled = !state.chatEnabled;
    statusLine.textContent =
      state.stage === "game"
        ? `game ${state.gameIndex + 1} of 4 — you are the ${state.role}`
        : `stage: ${state.stage}`;
    questionnaire.style.display = state.stage === "questionnaire" ? "block" : "none";
  }

  function tickTimer(): void {
    if (state.stage === "game") {
      const remaining = state.remainingSeconds(performance.now(), lastStateAt);
      const mm = Math.floor(remaining / 60);
      const ss = String(remaining % 60).padStart(2, "0");
      timer.textContent = `${mm}:${ss}`;
    } else {
      timer.textContent = "";
    }
  }

  client.onMessage((message) => {
    state.apply(message);
    if (message.type === "game_state" || message.type === "session_config") {
      lastStateAt = performance.now();
    }
    repaint();
  });

  socket.onopen = () => client.join();

  const sendStep = (step: Step | null): void => {
    if (step) {
      state.predictMove(step);
      repaint();
      client.sendMove(step);
    }
  };

  window.addEventListener("keydown", (event) => {
    if (document.activeElement === chatInput) {
      return;
    }
    const step = stepForKey(state, event.key);
    if (step) {
      event.preventDefault();
      sendStep(step);
    }
  });

  canvas.addEventListener("click", (event) => {
    const rect = canvas.getBoundingClientRect();
    const cell = cellFromPixel(event.clientX - rect.left, event.clientY - rect.top);
    sendStep(stepForCellClick(state, cell));
  });

  const submitChat = (): void => {
    const text = chatInput.value.trim();
    if (text && state.chatEnabled) {
      state.chat.push({ speaker: "human", text });
      client.sendChat(text);
      chatInput.value = "";
      repaint();
    }
  };
  chatSend.addEventListener("click", submitChat);
  chatInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      submitChat();
    }
  });

  const sliders = questionnaire.querySelector<HTMLDivElement>("#sliders");
  if (sliders) {
    for (const item of SLIDER_ITEMS) {
      const label = document.createElement("label");
      label.textContent = item.prompt;
      const input = document.createElement("input");
      input.type = "range";
      input.min = "0";
      input.max = "100";
      input.step = "1";
      input.value = "50";
      input.addEventListener("input", () => {
        form.setSlider(item.key as SliderKey, Number(input.value));
      });
      sliders.appendChild(label);
      sliders.appendChild(input);
    }
  }
  const nativeField = el<HTMLInputElement>("native-languages");
  const otherField = el<HTMLInputElement>("other-languages");
  el<HTMLButtonElement>("questionnaire-submit").addEventListener("click", () => {
    form.setBackground("native_languages", nativeField.value);
    form.setBackground("other_languages", otherField.value);
    client.submitQuestionnaire(form.toAnswers());
  });

  window.setInterval(tickTimer, 500);
  repaint();
}

start().catch((error) => {
  const banner = document.getElementById("error-banner");
  if (banner) {
    banner.textContent = String(error);
    banner.style.display = "block";
  }
});
