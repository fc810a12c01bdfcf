"""Map Task game model: maps, roles, avatar movement, timing, sessions.

A session is four games on four distinct maps with the human role
alternating instructor, navigator, instructor, navigator. The navigator's
avatar walks a 4-connected grid; a game completes when the avatar reaches
the end cell before the seven-minute limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .lexicon import FEMININE, MASCULINE, Lexicon
from .textproc import Utterance

TIME_LIMIT_S = 420
TIME_LIMIT_MS = TIME_LIMIT_S * 1000

INSTRUCTOR = "instructor"
NAVIGATOR = "navigator"
ROLE_SEQUENCE = (INSTRUCTOR, NAVIGATOR, INSTRUCTOR, NAVIGATOR)

STEPS = {"up": (0, -1), "down": (0, 1), "left": (-1, 0), "right": (1, 0)}

STAGE_GAME = "game"
STAGE_QUESTIONNAIRE = "questionnaire"
STAGE_DONE = "done"


class MapError(ValueError):
    """A map file is malformed or violates the map invariants."""


class GameStateError(RuntimeError):
    """An operation was attempted in the wrong game/session stage."""


@dataclass(frozen=True)
class Landmark:
    spanish_name: str
    english_name: str
    gender: str
    x: int
    y: int


@dataclass(frozen=True)
class GameMap:
    map_id: str
    width: int
    height: int
    landmarks: tuple[Landmark, ...]
    start: tuple[int, int]
    end: tuple[int, int]
    target_path: tuple[tuple[int, int], ...]

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def landmark_near(self, cell: tuple[int, int], radius: int = 1) -> Landmark | None:
        for lm in self.landmarks:
            if abs(lm.x - cell[0]) + abs(lm.y - cell[1]) <= radius:
                return lm
        return None


def load_map(path: str | Path) -> GameMap:
    """Parse and validate one structured-text map file."""
    path = Path(path)
    fields: dict[str, str] = {}
    landmarks: list[Landmark] = []
    path_cells: list[tuple[int, int]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "landmark":
            parts = value.split()
            if len(parts) != 5:
                raise MapError(f"{path.name}:{lineno}: landmark needs 5 fields")
            spanish, english, gender, x, y = parts
            if gender not in (MASCULINE, FEMININE):
                raise MapError(f"{path.name}:{lineno}: bad landmark gender {gender!r}")
            landmarks.append(Landmark(spanish, english, gender, int(x), int(y)))
        elif key == "path":
            for pair in value.split():
                x, _, y = pair.partition(",")
                path_cells.append((int(x), int(y)))
        elif key in ("id", "size", "start", "end"):
            fields[key] = value
        else:
            raise MapError(f"{path.name}:{lineno}: unknown key {key!r}")
    missing = {"id", "size", "start", "end"} - fields.keys()
    if missing or not path_cells:
        raise MapError(f"{path.name}: missing sections: {sorted(missing) or ['path']}")
    width, height = (int(v) for v in fields["size"].split())
    start = tuple(int(v) for v in fields["start"].split())
    end = tuple(int(v) for v in fields["end"].split())
    gmap = GameMap(
        fields["id"], width, height, tuple(landmarks), start, end, tuple(path_cells)
    )
    _validate_map(gmap, path.name)
    return gmap


def _validate_map(gmap: GameMap, name: str) -> None:
    if gmap.target_path[0] != gmap.start:
        raise MapError(f"{name}: path must begin at the start cell")
    if gmap.target_path[-1] != gmap.end:
        raise MapError(f"{name}: path must finish at the end cell")
    for cell in gmap.target_path:
        if not gmap.in_bounds(cell):
            raise MapError(f"{name}: path cell {cell} out of bounds")
    for a, b in zip(gmap.target_path, gmap.target_path[1:]):
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            raise MapError(f"{name}: path not 4-connected at {a} -> {b}")
    for lm in gmap.landmarks:
        if not gmap.in_bounds((lm.x, lm.y)):
            raise MapError(f"{name}: landmark {lm.spanish_name!r} out of bounds")


def validate_map_lexicon(gmap: GameMap, lex: Lexicon) -> list[str]:
    """Closure check: every landmark must resolve in the noun dictionary."""
    problems = []
    for lm in gmap.landmarks:
        entry = lex.lookup_es(lm.spanish_name)
        if entry is None:
            problems.append(f"{gmap.map_id}: landmark {lm.spanish_name!r} not in noun dictionary")
        elif entry.english_lemma != lm.english_name or entry.spanish_gender != lm.gender:
            problems.append(
                f"{gmap.map_id}: landmark {lm.spanish_name!r} disagrees with dictionary entry"
            )
    return problems


@dataclass
class GameRecord:
    map_id: str
    human_role: str
    started_at_ms: int
    transcript: list[Utterance] = field(default_factory=list)
    avatar_trace: list[tuple[int, int, int]] = field(default_factory=list)  # (t_ms, x, y)
    ended_at_ms: int | None = None
    completed: bool = False

    @property
    def active(self) -> bool:
        return self.ended_at_ms is None

    @property
    def duration_s(self) -> float:
        if self.ended_at_ms is None:
            raise GameStateError("game still active")
        return (self.ended_at_ms - self.started_at_ms) / 1000.0

    def trace_cells(self) -> list[tuple[int, int]]:
        return [(x, y) for _, x, y in self.avatar_trace]


def new_game(gmap: GameMap, human_role: str, started_at_ms: int) -> GameRecord:
    record = GameRecord(gmap.map_id, human_role, started_at_ms)
    record.avatar_trace.append((started_at_ms, gmap.start[0], gmap.start[1]))
    return record


def move_avatar(record: GameRecord, gmap: GameMap, step: str, now_ms: int) -> bool:
    """Apply one step; True if applied, False if rejected (out of bounds)."""
    if not record.active:
        raise GameStateError("move after game closed")
    if now_ms - record.started_at_ms >= TIME_LIMIT_MS:
        raise GameStateError("move after time limit")
    if step not in STEPS:
        raise ValueError(f"unknown step {step!r}")
    _, x, y = record.avatar_trace[-1]
    dx, dy = STEPS[step]
    cell = (x + dx, y + dy)
    if not gmap.in_bounds(cell):
        return False
    record.avatar_trace.append((now_ms, cell[0], cell[1]))
    if cell == gmap.end:
        record.completed = True
        record.ended_at_ms = now_ms
    return True


def check_timeout(record: GameRecord, now_ms: int) -> bool:
    """Close the game as incomplete once the limit elapses; True if closed."""
    if record.active and now_ms - record.started_at_ms >= TIME_LIMIT_MS:
        record.ended_at_ms = record.started_at_ms + TIME_LIMIT_MS
        record.completed = False
        return True
    return False


@dataclass
class Session:
    session_id: str
    condition_kind: str
    maps: list[GameMap]
    games: list[GameRecord] = field(default_factory=list)
    questionnaires: list[dict] = field(default_factory=list)
    stage: str = STAGE_GAME
    questionnaire_per_game: bool = False

    def __post_init__(self):
        ids = [m.map_id for m in self.maps]
        if len(self.maps) != 4 or len(set(ids)) != 4:
            raise ValueError("a session needs exactly 4 distinct maps")

    @property
    def game_index(self) -> int:
        return len(self.games) - 1

    @property
    def current_game(self) -> GameRecord:
        if not self.games:
            raise GameStateError("no game started yet")
        return self.games[-1]

    @property
    def current_map(self) -> GameMap:
        return self.maps[self.game_index]

    def start_next_game(self, now_ms: int) -> GameRecord:
        if self.stage != STAGE_GAME:
            raise GameStateError(f"cannot start a game in stage {self.stage!r}")
        if self.games and self.games[-1].active:
            raise GameStateError("previous game still active")
        index = len(self.games)
        if index >= 4:
            raise GameStateError("all four games already played")
        record = new_game(self.maps[index], ROLE_SEQUENCE[index], now_ms)
        self.games.append(record)
        return record


def advance_session(session: Session) -> str:
    """Move past a closed game: next game, questionnaire, or done.

    Returns the stage the session is in afterwards. Questionnaire stages
    must be resolved with submit_questionnaire before play continues.
    """
    if session.stage != STAGE_GAME:
        raise GameStateError(f"cannot advance in stage {session.stage!r}")
    if not session.games or session.games[-1].active:
        raise GameStateError("cannot advance: current game still active")
    finished = len(session.games)
    if session.questionnaire_per_game or finished == 4:
        session.stage = STAGE_QUESTIONNAIRE
    return session.stage


def submit_questionnaire(session: Session, responses: dict) -> str:
    """Validate and store questionnaire responses; returns the new stage."""
    if session.stage != STAGE_QUESTIONNAIRE:
        raise GameStateError("no questionnaire expected now")
    for item in ("enjoy", "success", "difficulty_communication", "difficulty_instructions"):
        value = responses.get(item)
        if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 100:
            raise ValueError(f"questionnaire item {item!r} must be an integer in [0, 100]")
    background = responses.get("background", {})
    if not isinstance(background, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in background.items()
    ):
        raise ValueError("questionnaire background must map strings to strings")
    session.questionnaires.append(
        {"after_game": len(session.games) - 1, "responses": responses}
    )
    if len(session.games) == 4:
        session.stage = STAGE_DONE
    else:
        session.stage = STAGE_GAME
    return session.stage
