"""Bot-vs-bot simulation: a scripted human partner drives complete
sessions through the real session runtime (in process, no sockets),
producing the standard dataset for desk-scale verification runs.

The scripted human speaks English, Spanish, or mixed lines from a seeded
distribution, follows the restricted direction grammar when instructing,
parses the bot's instructions when navigating, and occasionally wanders
one cell off the route before correcting itself.
"""

from __future__ import annotations

import random
from pathlib import Path

from .agent import landmark_phrase, parse_direction_phrases
from .game import GameMap, INSTRUCTOR, STAGE_DONE, STAGE_GAME, STAGE_QUESTIONNAIRE, STEPS
from .resources import load_default
from .server import SessionManager, SessionRuntime, parse_condition
from .store import SessionStore, export_dataset
from .strategy import StrategyConfig

_ENGLISH_DIR = {"left": "left", "right": "right", "up": "up", "down": "down"}
_SPANISH_DIR = {"left": "la izquierda", "right": "la derecha", "up": "arriba", "down": "abajo"}
_EN_COUNT = {1: "one", 2: "two", 3: "three", 4: "four", 5: "five"}
_ES_COUNT = {1: "un", 2: "dos", 3: "tres", 4: "cuatro", 5: "cinco"}

ACKS = ["ok", "listo", "done", "ready", "voy", "sigue", "got it", "next"]
OPENERS = ["ready", "listo", "ok go", "empezamos"]


def _segment(path, pointer: int, limit: int = 4) -> tuple[str, int]:
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


class ScriptedHuman:
    """Deterministic human side of a simulated session."""

    def __init__(self, seed: int, detour_probability: float = 0.3):
        self.rng = random.Random(seed)
        self.detour_probability = detour_probability

    def pick_language(self) -> str:
        roll = self.rng.random()
        if roll < 0.5:
            return "english"
        if roll < 0.85:
            return "spanish"
        return "mixed"

    def instruction(self, gmap: GameMap, pointer: int) -> tuple[str, int]:
        """Next instruction along the target path, and the new pointer."""
        path = gmap.target_path
        if pointer >= len(path) - 1:
            return self.rng.choice(["You arrived. Well done.", "Llegaste. Bien hecho."]), pointer
        step, n = _segment(path, pointer)
        pointer += n
        lm = gmap.landmark_near(path[pointer])
        lang = self.pick_language()
        if lang == "english":
            text = f"Go {_EN_COUNT[n]} steps {_ENGLISH_DIR[step]}."
            if lm is not None:
                text = f"Go {_EN_COUNT[n]} steps {_ENGLISH_DIR[step]}, until the {lm.english_name}."
        elif lang == "spanish":
            text = f"Ve {_ES_COUNT[n]} pasos hacia {_SPANISH_DIR[step]}."
            if lm is not None:
                text = f"Ve {_ES_COUNT[n]} pasos hacia {_SPANISH_DIR[step]}, hasta {landmark_phrase(lm)}."
        else:
            # Mixed line: Spanish frame, English direction word (and often an
            # English noun after the Spanish determiner, the mixed-NP shape).
            text = f"Ok, ve {_ES_COUNT[n]} pasos {_ENGLISH_DIR[step]}."
            if lm is not None:
                text = f"Ve {_ES_COUNT[n]} pasos {_ENGLISH_DIR[step]}, hasta el {lm.english_name}."
        return text, pointer

    def ack(self) -> str:
        return self.rng.choice(ACKS)

    def opener(self) -> str:
        return self.rng.choice(OPENERS)

    def maybe_detour(self, gmap: GameMap, cell: tuple[int, int], planned: list[str]) -> list[str]:
        """Occasionally wander one step sideways and come back."""
        if not planned or self.rng.random() >= self.detour_probability:
            return planned
        first = planned[0]
        options = []
        for step, (dx, dy) in STEPS.items():
            if step == first:
                continue
            nxt = (cell[0] + dx, cell[1] + dy)
            if gmap.in_bounds(nxt) and nxt != gmap.end:
                back = {"up": "down", "down": "up", "left": "right", "right": "left"}[step]
                options.append([step, back])
        if not options:
            return planned
        detour = options[self.rng.randrange(len(options))]
        return detour + planned

    def questionnaire(self) -> dict:
        return {
            "enjoy": self.rng.randint(40, 100),
            "success": self.rng.randint(40, 100),
            "difficulty_communication": self.rng.randint(0, 60),
            "difficulty_instructions": self.rng.randint(0, 60),
            "background": {
                "native_languages": self.rng.choice(["english", "spanish", "english+spanish"]),
                "other_languages": "",
            },
        }


class SimDriver:
    """Runs one scripted session to completion against a runtime."""

    MAX_TURNS_PER_GAME = 80

    def __init__(self, runtime: SessionRuntime, human: ScriptedHuman):
        self.runtime = runtime
        self.human = human
        self.now = runtime.started_at_ms
        self.inbox: list = []

    def _advance(self, ms: int) -> None:
        self.now += ms

    def _collect(self, messages) -> None:
        self.inbox.extend(messages)

    def _last_bot_text(self) -> str | None:
        for msg in reversed(self.inbox):
            if msg.type == "chat_recv" and msg.payload.get("speaker") == "bot":
                return msg.payload["text"]
        return None

    def run(self) -> None:
        self._collect(self.runtime.start(self.now))
        session = self.runtime.session
        guard = 0
        while session.stage != STAGE_DONE:
            guard += 1
            if guard > 200:
                raise RuntimeError("simulation failed to converge")
            if session.stage == STAGE_QUESTIONNAIRE:
                self._advance(self.human.rng.randint(4000, 9000))
                self._collect(self.runtime.handle_questionnaire(self.human.questionnaire(), self.now))
            elif session.stage == STAGE_GAME:
                if session.current_game.human_role == INSTRUCTOR:
                    self._play_instructor()
                else:
                    self._play_navigator()

    def _play_instructor(self) -> None:
        session = self.runtime.session
        game = session.current_game
        gmap = session.current_map
        pointer = 0
        for _ in range(self.MAX_TURNS_PER_GAME):
            if not game.active or session.current_game is not game:
                return
            text, pointer = self.human.instruction(gmap, pointer)
            self._advance(self.human.rng.randint(5000, 11000))
            self._collect(self.runtime.handle_chat(text, self.now))
        raise RuntimeError(f"instructor game on {gmap.map_id} did not finish")

    def _play_navigator(self) -> None:
        session = self.runtime.session
        game = session.current_game
        gmap = session.current_map
        self._advance(self.human.rng.randint(2000, 5000))
        self._collect(self.runtime.handle_chat(self.human.opener(), self.now))
        for _ in range(self.MAX_TURNS_PER_GAME):
            if not game.active or session.current_game is not game:
                return
            instruction = self._last_bot_text() or ""
            steps = [s for s, n in parse_direction_phrases(instruction) for _ in range(n)]
            _, x, y = game.avatar_trace[-1]
            steps = self.human.maybe_detour(gmap, (x, y), steps)
            for step in steps:
                if not game.active:
                    break
                self._advance(self.human.rng.randint(600, 1500))
                self._collect(self.runtime.handle_move(step, self.now))
            if not game.active or session.current_game is not game:
                return
            self._advance(self.human.rng.randint(4000, 9000))
            self._collect(self.runtime.handle_chat(self.human.ack(), self.now))
        raise RuntimeError(f"navigator game on {gmap.map_id} did not finish")


def simulate(
    conditions: list[str],
    n_sessions: int,
    seed: int,
    data_dir: str | Path,
    out_path: str | Path,
) -> dict:
    """Run n_sessions scripted sessions per condition and export the dataset."""
    resources = load_default()
    store = SessionStore(data_dir)
    manager = SessionManager(
        resources=resources, store=store, conditions=[], seed=seed, clock=lambda: 0
    )
    for cond_index, condition in enumerate(conditions):
        base = parse_condition(condition)
        for i in range(n_sessions):
            session_seed = seed * 1_000_000 + cond_index * 1_000 + i
            cfg = StrategyConfig(base.kind, base.k, base.switch_probability, session_seed)
            session_id = store.allocate_session_id()
            runtime = SessionRuntime(session_id, cfg, resources, store, 0)
            manager.sessions[session_id] = runtime
            SimDriver(runtime, ScriptedHuman(session_seed + 1)).run()
    return export_dataset(
        store,
        resources.maps,
        resources.lid,
        resources.lexicon,
        resources.adjectives,
        out_path,
    )
