"""Session orchestration and the wire protocol.

SessionRuntime is the transport-agnostic core: it owns one session's game
state, dialog state, strategy engine, and event log, and turns inbound
actions into ordered wire messages. The FastAPI application wraps it with
a WebSocket endpoint for chat/moves and plain HTTP endpoints for session
creation and export; simulations drive the same runtime in-process.
"""

from __future__ import annotations

import asyncio
import hashlib
import itertools
import json
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .agent import PromptContext, ScriptedBot, TurnResult, bot_turn, choose_welcome
from .game import (
    INSTRUCTOR,
    NAVIGATOR,
    STAGE_DONE,
    STAGE_GAME,
    STAGE_QUESTIONNAIRE,
    Session,
    TIME_LIMIT_S,
    advance_session,
    check_timeout,
    move_avatar,
    submit_questionnaire,
)
from .resources import Resources, load_default
from .store import SessionStore
from .strategy import DialogState, StrategyConfig, StrategyEngine, derive_session_rng
from .textproc import make_utterance

PROTOCOL_VERSION = 1


def monotonic_ms() -> int:
    return time.monotonic_ns() // 1_000_000


@dataclass
class WireMessage:
    type: str
    seq: int
    session_id: str
    payload: dict

    def as_dict(self) -> dict:
        return {
            "type": self.type,
            "seq": self.seq,
            "session_id": self.session_id,
            "payload": self.payload,
        }


def parse_condition(spec: str) -> StrategyConfig:
    """Parse 'kind' or 'kind:k=5,p=0.3,seed=7' into a StrategyConfig."""
    kind, _, params = spec.partition(":")
    kwargs: dict = {}
    if params:
        for item in params.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if key == "k":
                kwargs["k"] = int(value)
            elif key in ("p", "switch_probability"):
                kwargs["switch_probability"] = float(value)
            elif key in ("seed", "rng_seed"):
                kwargs["rng_seed"] = int(value)
            else:
                raise ValueError(f"unknown condition parameter {key!r}")
    return StrategyConfig(kind.strip(), **kwargs)


class SessionRuntime:
    """One live session: games, dialog state, strategy, event log."""

    def __init__(
        self,
        session_id: str,
        cfg: StrategyConfig,
        resources: Resources,
        store: SessionStore,
        now_ms: int,
        questionnaire_per_game: bool = False,
        backend_factory=None,
        translator=None,
    ):
        self.resources = resources
        self.store = store
        self.cfg = cfg
        self.rng = derive_session_rng(session_id, cfg.rng_seed)
        self.engine = StrategyEngine(
            resources.lexicon,
            resources.lid,
            translator or resources.phrase_translator,
            resources.adjectives,
        )
        self.session = Session(
            session_id,
            cfg.kind,
            resources.maps_in_order(),
            questionnaire_per_game=questionnaire_per_game,
        )
        self.dialog = DialogState()
        self.backend = None
        self._backend_factory = backend_factory or (
            lambda role, gmap, seed: ScriptedBot(role, gmap, seed)
        )
        self.started_at_ms = now_ms
        self._out_seq = itertools.count(1)
        self.store.append_event(
            session_id,
            {
                "ev": "session_created",
                "t": 0,
                "condition": {
                    "kind": cfg.kind,
                    "k": cfg.k,
                    "switch_probability": cfg.switch_probability,
                    "rng_seed": cfg.rng_seed,
                },
                "maps": [m.map_id for m in self.session.maps],
                "questionnaire_per_game": questionnaire_per_game,
            },
        )

    # -- helpers ---------------------------------------------------------

    def _rel(self, now_ms: int) -> int:
        return max(0, now_ms - self.started_at_ms)

    def _msg(self, type_: str, payload: dict) -> WireMessage:
        return WireMessage(type_, next(self._out_seq), self.session.session_id, payload)

    def _error(self, code: str, message: str) -> WireMessage:
        return self._msg("error", {"code": code, "message": message})

    def _bot_role(self) -> str:
        return NAVIGATOR if self.session.current_game.human_role == INSTRUCTOR else INSTRUCTOR

    def _avatar(self) -> tuple[int, int]:
        _, x, y = self.session.current_game.avatar_trace[-1]
        return (x, y)

    def _session_config(self) -> WireMessage:
        payload = {
            "protocol": PROTOCOL_VERSION,
            "condition": self.cfg.kind,
            "stage": self.session.stage,
            "time_limit_s": TIME_LIMIT_S,
        }
        if self.session.stage == STAGE_GAME and self.session.games:
            gmap = self.session.current_map
            record = self.session.current_game
            map_payload = {
                "id": gmap.map_id,
                "width": gmap.width,
                "height": gmap.height,
                "start": list(gmap.start),
                "end": list(gmap.end),
                "landmarks": [
                    {
                        "spanish": lm.spanish_name,
                        "english": lm.english_name,
                        "gender": lm.gender,
                        "x": lm.x,
                        "y": lm.y,
                    }
                    for lm in gmap.landmarks
                ],
            }
            # Information asymmetry: only the instructor sees the route.
            if record.human_role == INSTRUCTOR:
                map_payload["target_path"] = [list(c) for c in gmap.target_path]
            payload.update(
                {
                    "game_index": self.session.game_index,
                    "role": record.human_role,
                    "map": map_payload,
                    "started_at": record.started_at_ms,
                }
            )
        return self._msg("session_config", payload)

    def _game_state(self, applied: bool = True) -> WireMessage:
        record = self.session.current_game
        x, y = self._avatar()
        return self._msg(
            "game_state",
            {
                "game_index": self.session.game_index,
                "avatar": [x, y],
                "applied": applied,
                "completed": record.completed,
                "n_moves": len(record.avatar_trace) - 1,
            },
        )

    # -- lifecycle -------------------------------------------------------

    def start(self, now_ms: int) -> list[WireMessage]:
        """Start game 1 and queue the welcome message."""
        rel = self._rel(now_ms)
        record = self.session.start_next_game(rel)
        self.dialog = DialogState()
        self.backend = self._backend_factory(
            self._bot_role(), self.session.current_map, self.cfg.rng_seed
        )
        self.store.append_event(
            self.session.session_id,
            {"ev": "game_started", "t": rel, "game": 0, "map_id": record.map_id},
        )
        messages = [self._session_config()]
        welcome = choose_welcome(self.resources.welcome_pool, self.rng)
        # The welcome is a bot utterance like any other: strategy applies.
        final = self.engine.apply(self.cfg, self.dialog, welcome, self.rng)
        raw_hash = hashlib.sha256(welcome.encode("utf-8")).hexdigest()
        messages.append(self._emit_bot_text(final, rel, raw_hash))
        messages.append(self._game_state())
        return messages

    def _emit_bot_text(self, final: str, rel_ms: int, raw_hash: str,
                       degraded: bool = False) -> WireMessage:
        """Record and emit a strategy-transformed bot utterance."""
        utt = make_utterance("bot", final, self.resources.lid, rel_ms)
        self.session.current_game.transcript.append(utt)
        self.dialog.append(utt)
        self.store.append_event(
            self.session.session_id,
            {
                "ev": "chat_bot",
                "t": rel_ms,
                "game": self.session.game_index,
                "text": final,
                "raw_hash": raw_hash,
                "degraded": degraded,
            },
        )
        return self._msg(
            "chat_recv",
            {
                "speaker": "bot",
                "text": final,
                "label": utt.label,
                "t": rel_ms,
                "raw_hash": raw_hash,
                "degraded": degraded,
            },
        )

    def check_clock(self, now_ms: int) -> list[WireMessage]:
        """Authoritative timeout sweep; emits game_over and advances."""
        if self.session.stage != STAGE_GAME or not self.session.games:
            return []
        record = self.session.current_game
        if record.active and check_timeout(record, self._rel(now_ms)):
            self.store.append_event(
                self.session.session_id,
                {
                    "ev": "game_closed",
                    "t": record.ended_at_ms,
                    "game": self.session.game_index,
                    "completed": False,
                },
            )
            return self._after_game_close(now_ms)
        return []

    def _after_game_close(self, now_ms: int) -> list[WireMessage]:
        record = self.session.current_game
        game_index = self.session.game_index
        stage = advance_session(self.session)
        next_stage = (
            "questionnaire"
            if stage == STAGE_QUESTIONNAIRE
            else ("game" if len(self.session.games) < 4 else "done")
        )
        messages = [
            self._msg(
                "game_over",
                {
                    "game_index": game_index,
                    "completed": record.completed,
                    "duration_s": round(record.duration_s, 3),
                    "next": next_stage,
                },
            )
        ]
        if stage == STAGE_GAME:
            messages.extend(self._start_next_game(now_ms))
        return messages

    def _start_next_game(self, now_ms: int) -> list[WireMessage]:
        rel = self._rel(now_ms)
        record = self.session.start_next_game(rel)
        self.dialog = DialogState()
        self.backend = self._backend_factory(
            self._bot_role(), self.session.current_map, self.cfg.rng_seed + len(self.session.games)
        )
        self.store.append_event(
            self.session.session_id,
            {
                "ev": "game_started",
                "t": rel,
                "game": self.session.game_index,
                "map_id": record.map_id,
            },
        )
        return [self._session_config(), self._game_state()]

    # -- inbound actions --------------------------------------------------

    def handle_chat(self, text: str, now_ms: int) -> list[WireMessage]:
        messages = self.check_clock(now_ms)
        if self.session.stage != STAGE_GAME or not self.session.games:
            return messages + [self._error("wrong_stage", "chat is closed in this stage")]
        if not self.session.current_game.active:
            return messages + [self._error("game_closed", "this game is over")]
        if not text or not text.strip():
            return messages + [self._error("empty_message", "empty messages are rejected")]
        rel = self._rel(now_ms)
        human = make_utterance("human", text, self.resources.lid, rel)
        self.session.current_game.transcript.append(human)
        self.dialog.append(human)
        self.store.append_event(
            self.session.session_id,
            {"ev": "chat_human", "t": rel, "game": self.session.game_index, "text": text},
        )
        ctx = PromptContext(
            role=self._bot_role(),
            game_map=self.session.current_map,
            history=list(self.dialog.history),
            latest_human=text,
            avatar=self._avatar(),
            language_directive="spanish_only" if self.cfg.insertional else "none",
        )
        result: TurnResult = bot_turn(self.backend, ctx, self.engine, self.cfg, self.dialog, self.rng)
        messages.append(self._emit_bot_text(result.final_text, rel, result.raw_hash, result.degraded))
        if result.moves and self._bot_role() == NAVIGATOR:
            messages.extend(self._apply_moves(result.moves, "bot", now_ms))
        return messages

    def _apply_moves(self, steps: list[str], actor: str, now_ms: int) -> list[WireMessage]:
        messages: list[WireMessage] = []
        record = self.session.current_game
        gmap = self.session.current_map
        rel = self._rel(now_ms)
        for step in steps:
            if not record.active:
                break
            applied = move_avatar(record, gmap, step, rel)
            self.store.append_event(
                self.session.session_id,
                {
                    "ev": "move",
                    "t": rel,
                    "game": self.session.game_index,
                    "actor": actor,
                    "step": step,
                    "applied": applied,
                },
            )
            messages.append(self._game_state(applied))
        if not record.active and record.completed:
            self.store.append_event(
                self.session.session_id,
                {
                    "ev": "game_closed",
                    "t": record.ended_at_ms,
                    "game": self.session.game_index,
                    "completed": True,
                },
            )
            messages.extend(self._after_game_close(now_ms))
        return messages

    def handle_move(self, step: str, now_ms: int) -> list[WireMessage]:
        messages = self.check_clock(now_ms)
        if self.session.stage != STAGE_GAME or not self.session.games:
            return messages + [self._error("wrong_stage", "no game to move in")]
        record = self.session.current_game
        if not record.active:
            return messages + [self._error("game_closed", "this game is over")]
        if record.human_role != NAVIGATOR:
            return messages + [self._error("wrong_role", "only the navigator moves the avatar")]
        if step not in ("up", "down", "left", "right"):
            return messages + [self._error("bad_step", f"unknown step {step!r}")]
        return messages + self._apply_moves([step], "human", now_ms)

    def handle_questionnaire(self, responses: dict, now_ms: int) -> list[WireMessage]:
        messages = self.check_clock(now_ms)
        if self.session.stage != STAGE_QUESTIONNAIRE:
            return messages + [self._error("wrong_stage", "no questionnaire expected now")]
        try:
            stage = submit_questionnaire(self.session, responses)
        except ValueError as exc:
            return messages + [self._error("bad_questionnaire", str(exc))]
        rel = self._rel(now_ms)
        self.store.append_event(
            self.session.session_id,
            {
                "ev": "questionnaire",
                "t": rel,
                "after_game": len(self.session.games) - 1,
                "responses": responses,
            },
        )
        messages.append(self._msg("questionnaire_ack", {"stored": True, "stage": stage}))
        if stage == STAGE_GAME:
            messages.extend(self._start_next_game(now_ms))
        elif stage == STAGE_DONE:
            self.store.append_event(self.session.session_id, {"ev": "finalized", "t": rel})
            messages.append(self._session_config())
        return messages


class SessionManager:
    """Creates runtimes, assigns conditions, and tracks live sessions."""

    def __init__(
        self,
        resources: Resources | None = None,
        store: SessionStore | None = None,
        conditions: list[StrategyConfig] | None = None,
        seed: int = 0,
        questionnaire_per_game: bool = False,
        backend_factory=None,
        translator=None,
        clock=monotonic_ms,
    ):
        self.resources = resources or load_default()
        self.store = store or SessionStore(Path("data"))
        self.conditions = conditions or [StrategyConfig(k) for k in ("alt_baseline",)]
        self.seed = seed
        self.questionnaire_per_game = questionnaire_per_game
        self.backend_factory = backend_factory
        self.translator = translator
        self.clock = clock
        self._round_robin = itertools.cycle(range(len(self.conditions)))
        self.sessions: dict[str, SessionRuntime] = {}

    def create_session(self, condition: str = "auto") -> SessionRuntime:
        if condition == "auto":
            cfg = self.conditions[next(self._round_robin)]
        else:
            cfg = parse_condition(condition)
        if cfg.rng_seed == 0 and self.seed:
            cfg = StrategyConfig(cfg.kind, cfg.k, cfg.switch_probability, self.seed)
        session_id = self.store.allocate_session_id()
        runtime = SessionRuntime(
            session_id,
            cfg,
            self.resources,
            self.store,
            self.clock(),
            questionnaire_per_game=self.questionnaire_per_game,
            backend_factory=self.backend_factory,
            translator=self.translator,
        )
        self.sessions[session_id] = runtime
        return runtime

    def get(self, session_id: str) -> SessionRuntime | None:
        return self.sessions.get(session_id)


class CreateSessionRequest(BaseModel):
    condition: str = "auto"


def build_app(manager: SessionManager, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="mapmix", version="0.1.0")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest) -> dict:
        try:
            runtime = manager.create_session(req.condition)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"session_id": runtime.session.session_id, "condition": runtime.cfg.kind}

    @app.get("/export", response_class=PlainTextResponse)
    def export() -> str:
        from .store import export_dataset

        out = manager.store.root / "export.jsonl"
        export_dataset(
            manager.store,
            manager.resources.maps,
            manager.resources.lid,
            manager.resources.lexicon,
            manager.resources.adjectives,
            out,
        )
        return out.read_text(encoding="utf-8")

    @app.websocket("/ws/{session_id}")
    async def ws_endpoint(websocket: WebSocket, session_id: str) -> None:
        await websocket.accept()
        runtime = manager.get(session_id)
        if runtime is None:
            await websocket.send_text(
                json.dumps(
                    {
                        "type": "error",
                        "seq": 0,
                        "session_id": session_id,
                        "payload": {"code": "unknown_session", "message": "create the session first"},
                    }
                )
            )
            await websocket.close()
            return

        async def send_all(messages: list[WireMessage]) -> None:
            for msg in messages:
                await websocket.send_text(json.dumps(msg.as_dict(), ensure_ascii=False))

        last_seq = 0
        try:
            while True:
                try:
                    raw = await asyncio.wait_for(websocket.receive_text(), timeout=1.0)
                except asyncio.TimeoutError:
                    await send_all(runtime.check_clock(manager.clock()))
                    continue
                try:
                    incoming = json.loads(raw)
                except ValueError:
                    await send_all([runtime._error("bad_json", "message is not valid JSON")])
                    continue
                seq = incoming.get("seq", 0)
                if not isinstance(seq, int) or seq <= last_seq:
                    await send_all(
                        [runtime._error("bad_seq", "seq must increase monotonically")]
                    )
                    continue
                last_seq = seq
                mtype = incoming.get("type")
                payload = incoming.get("payload") or {}
                now = manager.clock()
                if mtype == "join":
                    if runtime.session.games:
                        await send_all([runtime._session_config(), runtime._game_state()])
                    else:
                        await send_all(runtime.start(now))
                elif mtype == "chat_send":
                    await send_all(runtime.handle_chat(str(payload.get("text", "")), now))
                elif mtype == "move":
                    await send_all(runtime.handle_move(str(payload.get("step", "")), now))
                elif mtype == "questionnaire_submit":
                    await send_all(runtime.handle_questionnaire(payload, now))
                else:
                    await send_all([runtime._error("bad_type", f"unknown type {mtype!r}")])
        except WebSocketDisconnect:
            return

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/app", StaticFiles(directory=str(static_dir), html=True), name="client")

    return app


def serve(
    port: int,
    data_dir: str,
    conditions: list[str],
    seed: int,
    backend: str = "scripted",
    translator: str = "phrase-table",
    host: str = "127.0.0.1",
    static_dir: str | None = None,
) -> None:
    """Run the service with uvicorn (blocking).

    The external backend and translator read their endpoints from
    MAPMIX_BACKEND_ENDPOINT / MAPMIX_TRANSLATOR_ENDPOINT and credentials
    from MAPMIX_BACKEND_KEY / MAPMIX_TRANSLATOR_KEY.
    """
    import os

    import uvicorn

    from .agent import ExternalChatBackend
    from .translate import ExternalTranslator

    resources = load_default()
    translator_impl = None
    if translator == "external":
        translator_impl = ExternalTranslator(os.environ["MAPMIX_TRANSLATOR_ENDPOINT"])
    backend_factory = None
    if backend == "external":
        endpoint = os.environ["MAPMIX_BACKEND_ENDPOINT"]
        model = os.environ.get("MAPMIX_BACKEND_MODEL", "gpt-4")
        external = ExternalChatBackend(endpoint, model, resources.prompts)
        backend_factory = lambda role, gmap, seed: external
    manager = SessionManager(
        resources=resources,
        store=SessionStore(data_dir),
        conditions=[parse_condition(c) for c in conditions],
        seed=seed,
        backend_factory=backend_factory,
        translator=translator_impl,
    )
    uvicorn.run(build_app(manager, static_dir), host=host, port=port, log_level="warning")
