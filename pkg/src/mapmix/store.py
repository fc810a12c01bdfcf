"""Append-only per-session event logs, replay, and dataset export.

Each session is one JSON-lines file of events; replaying a log rebuilds
the session record (transcripts, traces, outcomes) deterministically, and
the exporter emits a stable, versioned JSON-lines dataset whose bytes never
change across re-exports.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from .game import GameMap, Session, check_timeout, move_avatar
from .lexicon import Lexicon
from .metrics import dtw_route_distance
from .strategy import StrategyConfig
from .textproc import ENGLISH, classify_mixed_np, extract_simple_nps, make_utterance, matrix_language

logger = logging.getLogger(__name__)

SCHEMA_NAME = "mapmix.dataset"
SCHEMA_VERSION = 1


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class SessionStore:
    """Event-log files under data_dir/sessions plus a session-id counter."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        self.sessions_dir = self.root / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._counter_file = self.root / "counter.txt"

    def allocate_session_id(self) -> str:
        count = 0
        if self._counter_file.exists():
            count = int(self._counter_file.read_text().strip() or "0")
        count += 1
        self._counter_file.write_text(str(count))
        return f"s{count:06d}"

    def _path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def append_event(self, session_id: str, event: dict) -> None:
        with self._path(session_id).open("a", encoding="utf-8") as fh:
            fh.write(_dumps(event) + "\n")

    def read_events(self, session_id: str) -> list[dict]:
        path = self._path(session_id)
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]

    def list_sessions(self) -> list[str]:
        return sorted(p.stem for p in self.sessions_dir.glob("*.jsonl"))

    def is_finalized(self, session_id: str) -> bool:
        return any(ev["ev"] == "finalized" for ev in self.read_events(session_id))


class ReplayError(RuntimeError):
    """An event log contradicts the game rules it claims to describe."""


def replay_session(session_id: str, events: list[dict], maps: dict[str, GameMap], lid) -> Session:
    """Fold an event log back into a Session; pure given the log."""
    session: Session | None = None
    for ev in events:
        kind = ev["ev"]
        if kind == "session_created":
            cfg = StrategyConfig(**ev["condition"])
            session = Session(
                session_id,
                cfg.kind,
                [maps[mid] for mid in ev["maps"]],
                questionnaire_per_game=ev.get("questionnaire_per_game", False),
            )
        elif session is None:
            raise ReplayError("event before session_created")
        elif kind == "game_started":
            record = session.start_next_game(ev["t"])
            if record.map_id != ev["map_id"]:
                raise ReplayError(f"map order mismatch at game {ev['game']}")
        elif kind in ("chat_human", "chat_bot"):
            speaker = "human" if kind == "chat_human" else "bot"
            utt = make_utterance(speaker, ev["text"], lid, ev["t"])
            session.current_game.transcript.append(utt)
        elif kind == "move":
            record = session.current_game
            applied = move_avatar(record, maps[record.map_id], ev["step"], ev["t"])
            if applied != ev["applied"]:
                raise ReplayError(f"move replay diverged at t={ev['t']}")
        elif kind == "game_closed":
            record = session.current_game
            if record.active:
                check_timeout(record, ev["t"])
            if record.active:
                raise ReplayError(f"game_closed at t={ev['t']} but game still open")
            if record.completed != ev["completed"]:
                raise ReplayError("completion flag diverged on replay")
        elif kind == "questionnaire":
            session.questionnaires.append(
                {"after_game": ev["after_game"], "responses": ev["responses"]}
            )
        elif kind == "finalized":
            session.stage = "done"
    if session is None:
        raise ReplayError("empty event log")
    return session


def _utterance_record(session: Session, game_index: int, utt, lex: Lexicon,
                      adjectives: frozenset[str]) -> dict:
    spans = []
    for span in extract_simple_nps(utt.tokens, lex, adjectives):
        spans.append(
            {
                "det_index": span.det_index,
                "noun_index": span.noun_index,
                "det_gender": span.det_gender,
                "noun_lemma": span.noun_spanish_lemma,
                "noun_gender": span.noun_gender,
                "noun_lang": span.noun_lang,
                "class": classify_mixed_np(span) if span.noun_lang == ENGLISH else None,
            }
        )
    record = session.games[game_index]
    return {
        "record": "utterance",
        "session": session.session_id,
        "condition": session.condition_kind,
        "game": game_index,
        "map": record.map_id,
        "role": record.human_role,
        "speaker": utt.speaker,
        "t": utt.timestamp_ms,
        "text": utt.text,
        "label": utt.label,
        "matrix": matrix_language(utt.tokens),
        "tokens": [[tok.lower, tok.kind, tok.lang] for tok in utt.tokens],
        "nps": spans,
    }


def export_dataset(
    store: SessionStore,
    maps: dict[str, GameMap],
    lid,
    lex: Lexicon,
    adjectives: frozenset[str],
    out_path: str | Path,
    include_unfinalized: bool = False,
) -> dict:
    """Write the full dataset as JSON lines; returns summary counts."""
    out_path = Path(out_path)
    lines = [_dumps({"record": "header", "schema": SCHEMA_NAME, "version": SCHEMA_VERSION})]
    n_sessions = n_utterances = n_skipped = 0
    for session_id in store.list_sessions():
        events = store.read_events(session_id)
        if not any(ev["ev"] == "finalized" for ev in events):
            if not include_unfinalized:
                logger.warning("skipping unfinalized session %s", session_id)
                n_skipped += 1
                continue
        session = replay_session(session_id, events, maps, lid)
        n_sessions += 1
        for game_index, record in enumerate(session.games):
            for utt in record.transcript:
                lines.append(_dumps(_utterance_record(session, game_index, utt, lex, adjectives)))
                n_utterances += 1
        for game_index, record in enumerate(session.games):
            route = dtw_route_distance(record.trace_cells(), list(maps[record.map_id].target_path))
            lines.append(
                _dumps(
                    {
                        "record": "game",
                        "session": session.session_id,
                        "condition": session.condition_kind,
                        "game": game_index,
                        "map": record.map_id,
                        "role": record.human_role,
                        "duration_s": round(record.duration_s, 3),
                        "completed": record.completed,
                        "route_raw": route.raw,
                        "route_normalized": round(route.normalized, 6),
                        "n_moves": len(record.avatar_trace) - 1,
                    }
                )
            )
        lines.append(
            _dumps(
                {
                    "record": "session",
                    "session": session.session_id,
                    "condition": session.condition_kind,
                    "n_games": len(session.games),
                    "questionnaires": session.questionnaires,
                }
            )
        )
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return {"sessions": n_sessions, "utterances": n_utterances, "skipped": n_skipped}
