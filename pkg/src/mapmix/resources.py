"""Loader for the bundled data files (dictionaries, wordlists, maps,
prompt templates, welcome pool, translation tables)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from importlib import resources as importlib_resources
from pathlib import Path

from .game import GameMap, load_map
from .lexicon import Lexicon, load_lexicon
from .textproc import CharModel, LanguageId
from .translate import PhraseTableTranslator, load_phrase_table_translator

DEFAULT_TAU = 1.0


def data_dir() -> Path:
    return Path(str(importlib_resources.files("mapmix") / "data"))


def _read_words(path: Path) -> set[str]:
    out = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.add(line)
    return out


@dataclass(frozen=True)
class Resources:
    lexicon: Lexicon
    lid: LanguageId
    adjectives: frozenset[str]
    phrase_translator: PhraseTableTranslator
    welcome_pool: tuple[str, ...]
    maps: dict[str, GameMap]
    prompts: dict[str, str]

    def maps_in_order(self) -> list[GameMap]:
        return [self.maps[k] for k in sorted(self.maps)]


@cache
def load_default(tau: float = DEFAULT_TAU) -> Resources:
    root = data_dir()
    lexicon = load_lexicon(root / "noun_dict.tsv", root / "gender_dict.tsv")
    model = CharModel.load(root / "trigrams_en.txt", root / "trigrams_es.txt", tau)
    lid = LanguageId(
        _read_words(root / "english_words.txt"),
        _read_words(root / "spanish_words.txt"),
        _read_words(root / "ambiguous_words.txt"),
        model,
        lexicon,
    )
    adjectives = frozenset(_read_words(root / "spanish_adjectives.txt"))
    translator = load_phrase_table_translator(
        root / "phrase_table.tsv", root / "word_translations.tsv", lexicon, lid
    )
    welcomes = tuple(
        line.strip()
        for line in (root / "welcome_messages.txt").read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    )
    maps = {}
    for map_file in sorted((root / "maps").glob("*.map")):
        gmap = load_map(map_file)
        maps[gmap.map_id] = gmap
    prompts = {
        role: (root / "prompts" / f"{role}.txt").read_text(encoding="utf-8")
        for role in ("instructor", "navigator")
    }
    return Resources(lexicon, lid, adjectives, translator, welcomes, maps, prompts)
