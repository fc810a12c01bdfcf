from __future__ import annotations

import random

import pytest

from mapmix.agent import (
    BackendError,
    FALLBACK_LINE,
    PromptContext,
    ScriptedBot,
    bot_turn,
    choose_welcome,
    landmark_phrase,
    parse_direction_phrases,
    parse_move_commands,
    render_prompt,
)
from mapmix.strategy import DialogState, StrategyConfig, StrategyEngine
from mapmix.textproc import make_utterance


def test_parse_move_commands():
    clean, steps = parse_move_commands("Ok voy. «MOVE:down»«MOVE:down»")
    assert clean == "Ok voy." and steps == ["down", "down"]
    clean, steps = parse_move_commands("Sigo recto")
    assert clean == "Sigo recto" and steps == []
    clean, steps = parse_move_commands("«MOVE:diagonal»")
    assert clean == "«MOVE:diagonal»" and steps == []


@pytest.mark.parametrize(
    "text,expected",
    [
        ("baja dos", [("down", 2)]),
        ("Go three steps left.", [("left", 3)]),
        ("ve dos pasos hacia la izquierda", [("left", 2)]),
        ("baja dos y sube tres", [("down", 2), ("up", 3)]),
        ("sube", [("up", 1)]),
        ("go 4 right", [("right", 4)]),
        ("derecha 2", [("right", 2)]),
        ("Go two steps toward down, until the tree.", [("down", 2)]),
        ("hola amigo", []),
        ("", []),
    ],
)
def test_direction_grammar(text, expected):
    assert parse_direction_phrases(text) == expected


def test_landmark_phrase_gender_and_plurals(resources):
    by_name = {
        lm.spanish_name: lm
        for gmap in resources.maps.values()
        for lm in gmap.landmarks
    }
    assert landmark_phrase(by_name["puente"]) == "el puente"
    assert landmark_phrase(by_name["cascada"]) == "la cascada"
    assert landmark_phrase(by_name["árboles"]) == "los árboles"
    assert landmark_phrase(by_name["rocas"]) == "las rocas"


def _ctx(resources, role, map_id="riverside", latest=None, avatar=None):
    gmap = resources.maps[map_id]
    return PromptContext(role, gmap, [], latest, avatar or gmap.start)


def test_scripted_instructor_walks_path_deterministically(resources):
    gmap = resources.maps["riverside"]
    lines_a = []
    bot = ScriptedBot("instructor", gmap, seed=5)
    for _ in range(15):
        lines_a.append(bot.generate(_ctx(resources, "instructor")))
    bot = ScriptedBot("instructor", gmap, seed=5)
    lines_b = [bot.generate(_ctx(resources, "instructor")) for _ in range(15)]
    assert lines_a == lines_b
    assert any("la roca" in line for line in lines_a)  # landmark hit on the route
    assert lines_a[-1] == "Llegaste a la meta. Bien hecho."
    steps = [
        (step, n)
        for line in lines_a
        for step, n in parse_direction_phrases(line)
    ]
    cells = [gmap.start]
    deltas = {"up": (0, -1), "down": (0, 1), "left": (-1, 0), "right": (1, 0)}
    for step, n in steps:
        for _ in range(n):
            dx, dy = deltas[step]
            cells.append((cells[-1][0] + dx, cells[-1][1] + dy))
    assert cells == list(gmap.target_path)  # instructions trace the whole route


def test_scripted_navigator_moves_and_clarifies(resources):
    gmap = resources.maps["riverside"]
    bot = ScriptedBot("navigator", gmap, seed=5)
    reply = bot.generate(_ctx(resources, "navigator", latest="baja dos"))
    clean, steps = parse_move_commands(reply)
    assert steps == ["down", "down"]
    assert clean.startswith("Vale, voy dos hacia abajo.")
    reply = bot.generate(_ctx(resources, "navigator", latest="???"))
    clean, steps = parse_move_commands(reply)
    assert steps == [] and "repetir" in clean


def test_scripted_navigator_reports_landmarks(resources):
    gmap = resources.maps["riverside"]
    bot = ScriptedBot("navigator", gmap, seed=5)
    # roca sits at (11,3); moving down three from the start (10,0) ends at
    # (10,3), adjacent to it.
    reply = bot.generate(_ctx(resources, "navigator", latest="baja tres"))
    assert "Veo la roca." in reply


def test_navigator_prompt_never_contains_path(resources):
    gmap = resources.maps["riverside"]
    ctx = PromptContext("navigator", gmap, [], "hola", gmap.start)
    rendered = render_prompt(resources.prompts["navigator"], ctx)
    for x, y in gmap.target_path[1:-1]:
        assert f"({x},{y})" not in rendered
    with pytest.raises(ValueError):
        render_prompt("path: {{target_path}}", ctx)


def test_instructor_prompt_contains_path_and_landmarks(resources):
    gmap = resources.maps["riverside"]
    history = [make_utterance("human", "hello", resources.lid)]
    ctx = PromptContext("instructor", gmap, history, "hello", None, "spanish_only")
    rendered = render_prompt(resources.prompts["instructor"], ctx)
    assert " -> ".join([f"({gmap.start[0]},{gmap.start[1]})"]) in rendered
    assert "roca" in rendered
    assert "exclusively in Spanish" in rendered
    assert "human: hello" in rendered


def test_choose_welcome_seeded(resources):
    a = choose_welcome(resources.welcome_pool, random.Random(3))
    b = choose_welcome(resources.welcome_pool, random.Random(3))
    assert a == b and a in resources.welcome_pool
    with pytest.raises(ValueError):
        choose_welcome((), random.Random(3))


class _FlakyBackend:
    def __init__(self, failures, reply="Gira a la derecha en el tenedor. «MOVE:up»"):
        self.failures = failures
        self.reply = reply

    def generate(self, ctx):
        if self.failures > 0:
            self.failures -= 1
            raise BackendError("boom")
        return self.reply


def _engine(resources):
    return StrategyEngine(
        resources.lexicon, resources.lid, resources.phrase_translator, resources.adjectives
    )


def test_bot_turn_applies_strategy_and_strips_moves(resources):
    result = bot_turn(
        _FlakyBackend(0),
        _ctx(resources, "navigator", latest="x"),
        _engine(resources),
        StrategyConfig("ins_masc_incongruent"),
        DialogState(),
        random.Random(1),
    )
    assert result.final_text == "Gira a la derecha en la fork."
    assert result.moves == ["up"]
    assert not result.degraded
    assert len(result.raw_hash) == 64


def test_bot_turn_retries_once_then_succeeds(resources):
    result = bot_turn(
        _FlakyBackend(1),
        _ctx(resources, "navigator", latest="x"),
        _engine(resources),
        StrategyConfig("alt_baseline"),
        DialogState(),
        random.Random(1),
    )
    assert not result.degraded
    assert result.final_text.startswith("Gira")


def test_bot_turn_falls_back_after_two_failures(resources):
    result = bot_turn(
        _FlakyBackend(2),
        _ctx(resources, "navigator", latest="x"),
        _engine(resources),
        StrategyConfig("alt_baseline"),
        DialogState(),
        random.Random(1),
    )
    assert result.degraded
    assert result.final_text == FALLBACK_LINE
