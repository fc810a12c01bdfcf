from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from mapmix.metrics import (
    dialog_stats,
    dtw_brute_force,
    dtw_route_distance,
    entrainment_rate,
    enumerate_alignments,
    intersentential_cs_rate,
    tabulate_np_switches,
)
from mapmix.textproc import Utterance, make_utterance


def test_identical_paths_score_zero():
    path = [(0, 0), (0, 1), (1, 1), (2, 1)]
    score = dtw_route_distance(path, path)
    assert score.raw == 0 and score.normalized == 0.0


def test_dtw_worked_example():
    # All five monotone alignments between lengths 2 and 3 enumerate to
    # costs {4, 3, 4, 2, 2}; the optimum is 2.
    trace = [(0, 0), (0, 1)]
    target = [(0, 0), (1, 0), (1, 1)]
    assert dtw_brute_force(trace, target) == 2
    score = dtw_route_distance(trace, target)
    assert score.raw == 2
    assert score.normalized == pytest.approx(2 / 3)


def test_dtw_single_point_alignment():
    score = dtw_route_distance([(0, 0)], [(0, 0), (0, 1), (0, 2)])
    assert score.raw == 3  # 0 + 1 + 2, every target cell aligned to the point
    assert score.normalized == 1.0


def test_dtw_empty_is_domain_error():
    with pytest.raises(ValueError):
        dtw_route_distance([], [(0, 0)])
    with pytest.raises(ValueError):
        dtw_route_distance([(0, 0)], [])


def test_alignment_counts_are_delannoy():
    assert len(enumerate_alignments(1, 1)) == 1
    assert len(enumerate_alignments(2, 2)) == 3
    assert len(enumerate_alignments(3, 3)) == 13
    assert len(enumerate_alignments(6, 6)) == 1683


def _random_walk(rng, max_len=7, span=5):
    x, y = rng.randrange(span), rng.randrange(span)
    path = [(x, y)]
    for _ in range(rng.randrange(max_len - 1)):
        dx, dy = rng.choice([(0, 1), (0, -1), (1, 0), (-1, 0)])
        x, y = min(span - 1, max(0, x + dx)), min(span - 1, max(0, y + dy))
        path.append((x, y))
    return path


def test_dtw_matches_oracle_on_random_walks_with_repeats():
    rng = random.Random(2024)
    for _ in range(500):
        a, b = _random_walk(rng), _random_walk(rng)
        assert dtw_route_distance(a, b).raw == dtw_brute_force(a, b)


@settings(max_examples=100)
@given(st.data())
def test_dtw_raw_cost_is_symmetric(data):
    rng = random.Random(data.draw(st.integers(0, 10_000)))
    a, b = _random_walk(rng), _random_walk(rng)
    assert dtw_route_distance(a, b).raw == dtw_route_distance(b, a).raw


def test_normalization_divides_by_target_cells():
    a = [(0, 0), (0, 1)]
    b = [(0, 0), (0, 1), (0, 2), (0, 3)]
    score = dtw_route_distance(a, b)
    assert score.normalized == score.raw / 4


def _utt(speaker, label):
    u = Utterance(speaker, "x", [], label)
    return u


def test_intersentential_rate_rules():
    eng, spa, mixed = "english", "spanish", "mixed"
    t = [_utt("human", eng), _utt("human", spa), _utt("human", spa)]
    assert intersentential_cs_rate(t) == 0.5
    t = [_utt("human", eng), _utt("human", mixed), _utt("human", spa)]
    assert intersentential_cs_rate(t) == 0.0
    assert intersentential_cs_rate(t, skip_mixed_none=True) == 1.0
    t = [_utt("human", eng)] * 3
    assert intersentential_cs_rate(t) == 0.0
    assert intersentential_cs_rate([]) == 0.0
    # bot utterances are invisible to the human-side metric
    t = [_utt("human", eng), _utt("bot", spa), _utt("human", spa)]
    assert intersentential_cs_rate(t) == 1.0


def test_entrainment_rules():
    eng, spa, mixed, none = "english", "spanish", "mixed", "none"
    assert entrainment_rate([_utt("bot", spa), _utt("human", spa)]) == 1.0
    assert entrainment_rate([_utt("bot", mixed), _utt("human", eng)]) == 1.0
    assert entrainment_rate([_utt("bot", spa), _utt("human", mixed)]) == 1.0
    assert entrainment_rate([_utt("bot", spa), _utt("human", eng)]) == 0.0
    # none on either side is ineligible; human before any bot is ineligible
    assert entrainment_rate([_utt("bot", none), _utt("human", eng)]) == 0.0
    assert entrainment_rate([_utt("bot", spa), _utt("human", none)]) == 0.0
    assert entrainment_rate([_utt("human", eng), _utt("bot", spa)]) == 0.0
    transcript = [
        _utt("human", eng),   # ineligible, no bot yet
        _utt("bot", spa),
        _utt("human", spa),   # match
        _utt("bot", eng),
        _utt("human", spa),   # no match
        _utt("bot", none),
        _utt("human", eng),   # ineligible (bot none)
    ]
    assert entrainment_rate(transcript) == 0.5


def test_tabulate_np_switches(resources):
    lid, lex, adj = resources.lid, resources.lexicon, resources.adjectives
    transcript = [
        make_utterance("human", "ve hacia el fork ahora", lid),
        make_utterance("human", "dobla en la fork", lid),
        make_utterance("human", "mira el parrot", lid),
        make_utterance("human", "go to the fork now", lid),  # matrix English: skipped
        make_utterance("bot", "veo la fork", lid),  # bot: skipped by default
    ]
    counts = tabulate_np_switches([transcript], lex, adj)
    assert counts == {
        "congruent_masc": 1,
        "congruent_fem": 0,
        "incongruent_masc": 1,
        "incongruent_fem": 0,
        "ambiguous": 1,
    }
    bot_counts = tabulate_np_switches([transcript], lex, adj, speaker="bot")
    assert bot_counts["incongruent_masc"] == 1


def test_dialog_stats_percentages_sum_to_one(resources):
    lid = resources.lid
    transcript = [
        make_utterance("human", "go left now", lid),
        make_utterance("human", "ve a la izquierda", lid),
        make_utterance("human", "ok voy left", lid),
        make_utterance("human", "ok", lid),
        make_utterance("bot", "vale", lid),
    ]
    stats = dialog_stats([transcript], resources.lexicon, resources.adjectives)
    total = stats.pct_english + stats.pct_spanish + stats.pct_mixed + stats.pct_none
    assert total == pytest.approx(1.0)
    assert stats.n_utterances == 4
    assert stats.mean_utterances_per_dialog == 4.0


def test_dialog_stats_empty_transcripts(resources):
    stats = dialog_stats([[]], resources.lexicon, resources.adjectives)
    assert stats.n_utterances == 0
    assert stats.pct_intersentential_cs == 0.0
    assert stats.pct_entrainment == 0.0


def test_rates_stay_in_unit_interval_and_tabulation_is_order_invariant(resources):
    lid = resources.lid
    rng = random.Random(5)
    lines = ["go left", "ve a la derecha", "ok voy left", "ok", "el fork", "mira la spoon"]
    transcripts = []
    for _ in range(6):
        transcript = [
            make_utterance(rng.choice(["human", "bot"]), rng.choice(lines), lid)
            for _ in range(rng.randrange(1, 8))
        ]
        transcripts.append(transcript)
        assert 0.0 <= intersentential_cs_rate(transcript) <= 1.0
        assert 0.0 <= entrainment_rate(transcript) <= 1.0
    forward = tabulate_np_switches(transcripts, resources.lexicon, resources.adjectives)
    backward = tabulate_np_switches(transcripts[::-1], resources.lexicon, resources.adjectives)
    assert forward == backward
