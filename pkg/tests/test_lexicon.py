from __future__ import annotations

import pytest

from mapmix.game import validate_map_lexicon
from mapmix.lexicon import (
    FEMININE,
    MASCULINE,
    MASCULINE_DETERMINERS,
    FEMININE_DETERMINERS,
    LexiconError,
    determiner_gender,
    determiner_table,
    load_lexicon,
    map_determiner_gender,
)


def test_lookup_directions(lex):
    entry = lex.lookup_es("tenedor")
    assert entry.english_lemma == "fork" and entry.spanish_gender == MASCULINE
    entry = lex.lookup_es("cuchara")
    assert entry.english_lemma == "spoon" and entry.spanish_gender == FEMININE
    assert lex.lookup_es("zzz") is None


def test_synonyms_of_differing_gender_are_ambiguous(lex):
    assert lex.lookup_en_gender("parrot") == "ambiguous"
    sources = {e.spanish_lemma for e in lex.lookup_en("parrot")}
    assert {"papagayo", "guacamaya"} <= sources


def test_same_gender_synonyms_keep_their_gender(lex):
    assert lex.lookup_en_gender("deer") == MASCULINE
    assert lex.lookup_en_gender("waterfall") == FEMININE


def test_every_noun_has_gender_coverage(lex):
    assert lex.coverage_gaps() == []


def test_bundled_landmarks_resolve(resources):
    for gmap in resources.maps.values():
        assert validate_map_lexicon(gmap, resources.lexicon) == []


def test_duplicate_lemma_rejected(tmp_path):
    noun = tmp_path / "nouns.tsv"
    noun.write_text("perro\tdog\tmasculine\nperro\thound\tmasculine\n")
    gender = tmp_path / "genders.tsv"
    gender.write_text("dog\tmasculine\n")
    with pytest.raises(LexiconError, match="perro"):
        load_lexicon(noun, gender)


def test_unknown_gender_includes_line_number(tmp_path):
    noun = tmp_path / "nouns.tsv"
    noun.write_text("# header\nperro\tdog\tneuter\n")
    gender = tmp_path / "genders.tsv"
    gender.write_text("dog\tmasculine\n")
    with pytest.raises(LexiconError, match=":2"):
        load_lexicon(noun, gender)


def test_gender_dict_must_match_noun_entries(tmp_path):
    noun = tmp_path / "nouns.tsv"
    noun.write_text("perro\tdog\tmasculine\n")
    gender = tmp_path / "genders.tsv"
    gender.write_text("dog\tfeminine\n")
    with pytest.raises(LexiconError, match="dog"):
        load_lexicon(noun, gender)
    gender.write_text("cat\tmasculine\n")
    with pytest.raises(LexiconError, match="cat"):
        load_lexicon(noun, gender)


@pytest.mark.parametrize(
    "det,target,expected",
    [
        ("el", FEMININE, "la"),
        ("la", FEMININE, "la"),
        ("unos", FEMININE, "unas"),
        ("las", MASCULINE, "los"),
        ("un", MASCULINE, "un"),
        ("una", MASCULINE, "un"),
    ],
)
def test_map_determiner_gender(det, target, expected):
    assert map_determiner_gender(det, target) == expected


@pytest.mark.parametrize("det", MASCULINE_DETERMINERS + FEMININE_DETERMINERS)
def test_determiner_round_trip(det):
    flipped_twice = map_determiner_gender(
        map_determiner_gender(det, FEMININE), MASCULINE
    )
    assert flipped_twice == map_determiner_gender(det, MASCULINE)
    assert determiner_gender(map_determiner_gender(det, FEMININE)) == FEMININE


def test_unknown_determiner_rejected():
    with pytest.raises(LexiconError):
        map_determiner_gender("este", FEMININE)
    assert determiner_gender("perro") is None


def test_determiner_table_dump_is_total():
    table = determiner_table()
    assert table["masculine_to_feminine"] == {"el": "la", "un": "una", "los": "las", "unos": "unas"}
    inverse = {v: k for k, v in table["masculine_to_feminine"].items()}
    assert table["feminine_to_masculine"] == inverse
