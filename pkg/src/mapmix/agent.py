"""The conversational bot: backend abstraction, prompt construction,
welcome messages, the movement-directive grammar, and the two-stage turn
(generate, then apply the code-switching strategy).

The scripted backend plays both roles deterministically and is what every
test and simulation runs against; the external adapter posts the rendered
prompt to a chat-completion endpoint.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Protocol

from .game import GameMap, INSTRUCTOR, NAVIGATOR, STEPS
from .lexicon import MASCULINE
from .strategy import DialogState, StrategyConfig, StrategyEngine
from .textproc import Utterance, tokenize

MOVE_DIRECTIVE = re.compile(r"«MOVE:(up|down|left|right)»")

FALLBACK_LINE = "Perdón, tuve un problema. Sorry, I had a problem."

# Direction grammar shared by the scripted navigator (bot) and the scripted
# human: Spanish/English direction words plus small counts.
DIRECTION_WORDS = {
    "izquierda": "left", "left": "left", "oeste": "left", "west": "left",
    "derecha": "right", "right": "right", "east": "right",
    "arriba": "up", "up": "up", "sube": "up", "norte": "up", "north": "up",
    "abajo": "down", "down": "down", "baja": "down", "sur": "down", "south": "down",
}
NUMBER_WORDS = {
    "un": 1, "una": 1, "uno": 1, "one": 1,
    "dos": 2, "two": 2,
    "tres": 3, "three": 3,
    "cuatro": 4, "four": 4,
    "cinco": 5, "five": 5,
    "seis": 6, "six": 6,
    "siete": 7, "seven": 7,
    "ocho": 8, "eight": 8,
    "nueve": 9, "nine": 9,
}

_SPANISH_DIR = {"left": "la izquierda", "right": "la derecha", "up": "arriba", "down": "abajo"}
_PLURAL_DET = {"árboles": "los", "rocas": "las", "flores": "las"}


class BackendError(RuntimeError):
    """The generation backend failed or timed out."""


@dataclass
class PromptContext:
    role: str  # instructor | navigator
    game_map: GameMap
    history: list[Utterance]
    latest_human: str | None
    avatar: tuple[int, int] | None = None
    language_directive: str = "none"  # none | spanish_only


class AgentBackend(Protocol):
    def generate(self, ctx: PromptContext) -> str: ...


def parse_move_commands(reply_raw: str) -> tuple[str, list[str]]:
    """Strip well-formed «MOVE:dir» directives; malformed ones stay in text."""
    steps = [m.group(1) for m in MOVE_DIRECTIVE.finditer(reply_raw)]
    clean = MOVE_DIRECTIVE.sub(" ", reply_raw)
    clean = re.sub(r"[ \t]{2,}", " ", clean).strip()
    return clean, steps


def parse_direction_phrases(text: str) -> list[tuple[str, int]]:
    """Extract ordered (step, count) pairs from a restricted-grammar message."""
    words = [t.lower for t in tokenize(text) if t.kind in ("word", "number")]
    out: list[tuple[str, int]] = []
    pending: int | None = None
    consumed: set[int] = set()
    for i, w in enumerate(words):
        if i in consumed:
            continue
        if w.isdigit():
            pending = max(1, min(9, int(w)))
        elif w in NUMBER_WORDS:
            pending = NUMBER_WORDS[w]
        elif w in DIRECTION_WORDS:
            direction = DIRECTION_WORDS[w]
            count = pending
            pending = None
            if count is None:
                for j in range(i + 1, len(words)):
                    nxt = words[j]
                    if nxt.isdigit():
                        count = max(1, min(9, int(nxt)))
                        consumed.add(j)
                        break
                    if nxt in NUMBER_WORDS:
                        count = NUMBER_WORDS[nxt]
                        consumed.add(j)
                        break
                    break  # only an immediately following number counts
            out.append((direction, count or 1))
    return out


def landmark_phrase(lm) -> str:
    """Determiner + Spanish landmark noun, honoring gender and shipped plurals."""
    det = _PLURAL_DET.get(lm.spanish_name)
    if det is None:
        det = "el" if lm.gender == MASCULINE else "la"
    return f"{det} {lm.spanish_name}"


def _spanish_count(n: int) -> str:
    return {1: "un", 2: "dos", 3: "tres", 4: "cuatro", 5: "cinco"}.get(n, str(n))


def _segment(path, pointer: int, limit: int = 4) -> tuple[str, int]:
    """Next straight run along the path from pointer: (step name, length)."""
    a, b = path[pointer], path[pointer + 1]
    delta = (b[0] - a[0], b[1] - a[1])
    step = next(s for s, d in STEPS.items() if d == delta)
    n = 1
    while (
        n < limit
        and pointer + n + 1 < len(path)
        and (
            path[pointer + n + 1][0] - path[pointer + n][0],
            path[pointer + n + 1][1] - path[pointer + n][1],
        )
        == delta
    ):
        n += 1
    return step, n


class ScriptedBot:
    """Deterministic backend for tests and simulations.

    As instructor it walks the target path in chunks, phrased in Spanish
    and naming landmarks near each chunk's endpoint (guaranteed dictionary
    hits). As navigator it answers with a comprehension echo plus MOVE
    directives parsed from the human's instruction.
    """

    def __init__(self, role: str, game_map: GameMap, seed: int):
        self.role = role
        self.map = game_map
        self._rng = random.Random(seed)
        self._pointer = 0

    def generate(self, ctx: PromptContext) -> str:
        if self.role == INSTRUCTOR:
            return self._instruct()
        return self._navigate(ctx)

    def _instruct(self) -> str:
        path = self.map.target_path
        if self._pointer >= len(path) - 1:
            return "Llegaste a la meta. Bien hecho."
        step, n = _segment(path, self._pointer)
        self._pointer += n
        count = _spanish_count(n)
        unit = "paso" if n == 1 else "pasos"
        direction = _SPANISH_DIR[step]
        verb = self._rng.choice(["Ve", "Avanza", "Camina"])
        sentence = f"{verb} {count} {unit} hacia {direction}."
        lm = self.map.landmark_near(path[self._pointer])
        if lm is not None:
            tail = self._rng.choice(
                [f"Sigue hasta {landmark_phrase(lm)}.", f"Vas a ver {landmark_phrase(lm)}."]
            )
            sentence = f"{sentence} {tail}"
        if self._pointer >= len(path) - 1:
            sentence = f"{sentence} Llegaste a la meta."
        return sentence

    def _navigate(self, ctx: PromptContext) -> str:
        phrases = parse_direction_phrases(ctx.latest_human or "")
        if not phrases:
            return "No entendí. ¿Puedes repetir?"
        spoken = " y ".join(
            f"{_spanish_count(n)} hacia {_SPANISH_DIR[step]}" for step, n in phrases
        )
        directives = []
        cell = ctx.avatar or self.map.start
        for step, n in phrases:
            for _ in range(n):
                dx, dy = STEPS[step]
                nxt = (cell[0] + dx, cell[1] + dy)
                if self.map.in_bounds(nxt):
                    cell = nxt
                directives.append(f"«MOVE:{step}»")
        reply = f"Vale, voy {spoken}."
        lm = self.map.landmark_near(cell)
        if lm is not None:
            reply = f"{reply} Veo {landmark_phrase(lm)}."
        return reply + " " + "".join(directives)


class ExternalChatBackend:
    """Adapter for an HTTP chat-completion service.

    POSTs {"model": ..., "prompt": ...} and expects {"text": ...}; the
    credential comes from the environment variable named by credential_env.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        prompt_templates: dict[str, str],
        credential_env: str = "MAPMIX_BACKEND_KEY",
        timeout_s: float = 30.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.prompt_templates = prompt_templates
        self.credential_env = credential_env
        self.timeout_s = timeout_s

    def generate(self, ctx: PromptContext) -> str:
        prompt = render_prompt(self.prompt_templates[ctx.role], ctx)
        payload = json.dumps({"model": self.model, "prompt": prompt}).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.credential_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        req = urllib.request.Request(self.endpoint, data=payload, headers=headers)
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, TimeoutError, ValueError) as exc:
            raise BackendError(f"backend request failed: {exc}") from exc
        text = body.get("text")
        if not isinstance(text, str) or not text.strip():
            raise BackendError("backend returned no text")
        return text


def render_prompt(template: str, ctx: PromptContext) -> str:
    """Fill the placeholder slots of a prompt template.

    The navigator template has no target-path slot, preserving the task's
    information asymmetry.
    """
    landmarks = ", ".join(
        f"{lm.spanish_name}/{lm.english_name} at ({lm.x},{lm.y})" for lm in ctx.game_map.landmarks
    )
    history = "\n".join(f"{u.speaker}: {u.text}" for u in ctx.history)
    directive = (
        "Communicate exclusively in Spanish."
        if ctx.language_directive == "spanish_only"
        else "Use whichever language feels natural."
    )
    rendered = (
        template.replace("{{landmarks}}", landmarks)
        .replace("{{history}}", history)
        .replace("{{message}}", ctx.latest_human or "")
        .replace("{{language_directive}}", directive)
    )
    if "{{target_path}}" in rendered:
        if ctx.role == NAVIGATOR:
            raise ValueError("navigator prompt must not expose the target path")
        path = " -> ".join(f"({x},{y})" for x, y in ctx.game_map.target_path)
        rendered = rendered.replace("{{target_path}}", path)
    return rendered


def choose_welcome(pool: tuple[str, ...], rng: random.Random) -> str:
    if not pool:
        raise ValueError("welcome pool is empty")
    return pool[rng.randrange(len(pool))]


@dataclass
class TurnResult:
    final_text: str
    moves: list[str]
    raw_text: str
    raw_hash: str
    degraded: bool = False


def bot_turn(
    backend: AgentBackend,
    ctx: PromptContext,
    engine: StrategyEngine,
    cfg: StrategyConfig,
    state: DialogState,
    rng: random.Random,
) -> TurnResult:
    """Stage 1 generate, stage 2 apply the strategy; moves pass through."""
    raw: str | None = None
    degraded = False
    for _ in range(2):  # one retry
        try:
            raw = backend.generate(ctx)
            break
        except BackendError:
            continue
    if raw is None or not raw.strip():
        raw = FALLBACK_LINE
        degraded = True
    clean, moves = parse_move_commands(raw)
    final = engine.apply(cfg, state, clean, rng)
    raw_hash = hashlib.sha256(raw.encode("utf-8")).hexdigest()
    return TurnResult(final, moves, raw, raw_hash, degraded)
