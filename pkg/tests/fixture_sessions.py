"""Hand-built two-session fixture with hand-computed expected metrics.

The transcripts and outcomes below were written out by hand and the
expected values derived on paper from the metric definitions; the builder
only turns them into event logs (movement steps are derived from the map
paths so the traces are valid). Used by the metrics tests, the report
golden test, and the acceptance suite.
"""

from __future__ import annotations

from mapmix.game import GameMap
from mapmix.resources import Resources
from mapmix.store import SessionStore

# Per-session hand-computed expectations (see the transcript tables below).
EXPECTED = {
    "A": {
        "condition": "alt_adversarial",
        "is_rates": [1.0, 1.0, 1.0, 0.0],
        "entrainment_rates": [1.0, 0.5, 0.0, 1.0],
        "pct_complete": 0.75,
        "np_counts": {"congruent_masc": 1, "congruent_fem": 0,
                      "incongruent_masc": 0, "incongruent_fem": 1, "ambiguous": 0},
        "n_human_utterances": 11,
        "mean_tokens_per_utterance": 34 / 11,
    },
    "B": {
        "condition": "ins_masc_incongruent",
        "is_rates": [0.0, 0.0, 0.0, 0.0],
        "entrainment_rates": [1.0, 1.0, 0.0, 1.0],
        "pct_complete": 0.75,
        "np_counts": {"congruent_masc": 0, "congruent_fem": 0,
                      "incongruent_masc": 1, "incongruent_fem": 0, "ambiguous": 1},
        "n_human_utterances": 8,
        "mean_tokens_per_utterance": 21 / 8,
    },
}

# (speaker, text) per game; games alternate instructor, navigator, ...
TRANSCRIPTS = {
    "A": [
        [
            ("bot", "¡Hola! Ready to play? Vamos a trazar una buena ruta."),  # mixed
            ("human", "Go two steps down."),  # english
            ("bot", "Vale, voy dos hacia abajo."),  # spanish
            ("human", "Ve dos pasos hacia abajo."),  # spanish
            ("bot", "Okay, go two toward down."),  # english
            ("human", "ok"),  # none
            ("bot", "Vale."),  # spanish
            ("human", "Sigue hasta el fork."),  # mixed; el+fork congruent_masc
        ],
        [
            ("human", "listo"),  # spanish, no bot yet -> ineligible
            ("bot", "Ve dos pasos hacia abajo."),  # spanish
            ("human", "done"),  # english vs spanish -> no match
            ("bot", "Go two steps toward down."),  # english
            ("human", "el spoon está aquí"),  # mixed wildcard; el+spoon incongruent_fem
        ],
        [
            ("human", "Ve un paso hacia abajo."),  # spanish, no bot yet
            ("bot", "Vale."),  # spanish
            ("human", "Go one step down."),  # english vs spanish -> no match
            ("bot", "Okay."),  # none (ambiguity-list word)
        ],
        [
            ("human", "¿Dónde está la meta?"),  # spanish, no bot yet
            ("bot", "Sigue recto."),  # spanish
            ("human", "voy"),  # spanish vs spanish -> match
            ("bot", "Muy bien."),  # spanish
        ],
    ],
    "B": [
        [
            ("bot", "Hola hola. Happy to play this game contigo."),  # mixed
            ("human", "ve a la fork"),  # mixed; la+fork incongruent_masc
            ("bot", "Vale, voy dos hacia abajo."),  # spanish
            ("human", "mira el parrot"),  # mixed; el+parrot ambiguous
            ("bot", "Veo la fork."),  # mixed
            ("human", "no"),  # none
        ],
        [
            ("human", "ready"),  # english, no bot yet
            ("bot", "Ve tres pasos hacia abajo."),  # spanish
            ("human", "ok ve up"),  # mixed wildcard -> match
            ("bot", "No entendí. ¿Puedes repetir?"),  # spanish
        ],
        [
            ("human", "Camina dos pasos hacia la derecha."),  # spanish, no bot
            ("bot", "Vale."),  # spanish
        ],
        [
            ("human", "empezamos"),  # spanish, no bot yet
            ("bot", "Sube dos pasos."),  # spanish
            ("human", "listo ready"),  # mixed wildcard -> match
            ("bot", "Bien hecho."),  # spanish
        ],
    ],
}

# Which games complete (the others time out after a partial walk).
COMPLETED = [True, False, True, True]
PARTIAL_CELLS = {"A": 10, "B": 5}

GAME_GAP_MS = 5_000
CHAT_STEP_MS = 4_000
MOVE_STEP_MS = 1_000


def _steps_along(path: list[tuple[int, int]]) -> list[str]:
    names = {(0, -1): "up", (0, 1): "down", (-1, 0): "left", (1, 0): "right"}
    return [
        names[(b[0] - a[0], b[1] - a[1])] for a, b in zip(path, path[1:])
    ]


def build_fixture_store(store: SessionStore, resources: Resources) -> dict[str, str]:
    """Write the two hand-built sessions into the store; returns name->id."""
    maps = resources.maps_in_order()
    ids = {}
    for name in ("A", "B"):
        spec = EXPECTED[name]
        session_id = store.allocate_session_id()
        ids[name] = session_id
        store.append_event(
            session_id,
            {
                "ev": "session_created",
                "t": 0,
                "condition": {
                    "kind": spec["condition"],
                    "k": 3,
                    "switch_probability": 0.5,
                    "rng_seed": 1,
                },
                "maps": [m.map_id for m in maps],
                "questionnaire_per_game": False,
            },
        )
        t = 0
        for game_index, gmap in enumerate(maps):
            t += GAME_GAP_MS
            start_t = t
            store.append_event(
                session_id,
                {"ev": "game_started", "t": start_t, "game": game_index, "map_id": gmap.map_id},
            )
            for speaker, text in TRANSCRIPTS[name][game_index]:
                t += CHAT_STEP_MS
                ev = "chat_human" if speaker == "human" else "chat_bot"
                event = {"ev": ev, "t": t, "game": game_index, "text": text}
                if speaker == "bot":
                    event["raw_hash"] = "fixture"
                    event["degraded"] = False
                store.append_event(session_id, event)
            path = list(gmap.target_path)
            actor = "bot" if game_index % 2 == 0 else "human"
            if COMPLETED[game_index]:
                steps = _steps_along(path)
            else:
                steps = _steps_along(path[: PARTIAL_CELLS[name]])
            move_t = t
            for step in steps:
                move_t += MOVE_STEP_MS
                store.append_event(
                    session_id,
                    {
                        "ev": "move",
                        "t": move_t,
                        "game": game_index,
                        "actor": actor,
                        "step": step,
                        "applied": True,
                    },
                )
            if COMPLETED[game_index]:
                end_t = move_t
            else:
                end_t = start_t + 420_000
            store.append_event(
                session_id,
                {
                    "ev": "game_closed",
                    "t": end_t,
                    "game": game_index,
                    "completed": COMPLETED[game_index],
                },
            )
            t = end_t
        t += GAME_GAP_MS
        store.append_event(
            session_id,
            {
                "ev": "questionnaire",
                "t": t,
                "after_game": 3,
                "responses": {
                    "enjoy": 80,
                    "success": 75,
                    "difficulty_communication": 20,
                    "difficulty_instructions": 25,
                    "background": {"native_languages": "english+spanish", "other_languages": ""},
                },
            },
        )
        store.append_event(session_id, {"ev": "finalized", "t": t + 1_000})
    return ids
