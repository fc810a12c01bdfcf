"""Whole-utterance translation backends.

The engine only needs `translate(text, target)`. Production deployments
plug in an external machine-translation service; tests and simulations use
the deterministic phrase-table double, which resolves full utterances from
a curated table and falls back to word-by-word dictionary translation,
leaving untranslatable tokens unchanged.
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from pathlib import Path
from typing import Protocol

from .lexicon import Lexicon
from .textproc import ENGLISH, SPANISH, WORD, LanguageId, tokenize


class TranslationError(RuntimeError):
    """The translation backend failed to produce output."""


class Translator(Protocol):
    def translate(self, text: str, target: str) -> str: ...


def _match_case(old: str, new: str) -> str:
    if old[:1].isupper():
        return new[:1].upper() + new[1:]
    return new


class PhraseTableTranslator:
    """Deterministic test double: phrase table, then word-by-word lookup."""

    def __init__(
        self,
        phrases: dict[tuple[str, str], str],
        en_to_es: dict[str, str],
        es_to_en: dict[str, str],
        lid: LanguageId,
    ):
        self._phrases = dict(phrases)
        self._word_maps = {SPANISH: en_to_es, ENGLISH: es_to_en}
        self._lid = lid

    def translate(self, text: str, target: str) -> str:
        if target not in (ENGLISH, SPANISH):
            raise TranslationError(f"unknown target language: {target!r}")
        hit = self._phrases.get((text.strip().lower(), target))
        if hit is not None:
            return hit
        words = self._word_maps[target]
        out = []
        last = 0
        for tok in tokenize(text):
            if tok.kind == WORD and self._lid.classify_word(tok.lower) != target:
                replacement = words.get(tok.lower)
                if replacement is not None:
                    out.append(text[last : tok.start])
                    out.append(_match_case(tok.surface, replacement))
                    last = tok.end
        out.append(text[last:])
        return "".join(out)


def load_phrase_table_translator(
    phrase_path: str | Path,
    words_path: str | Path,
    lexicon: Lexicon,
    lid: LanguageId,
) -> PhraseTableTranslator:
    """Build the double from the bundled tables plus the noun dictionary."""
    phrases: dict[tuple[str, str], str] = {}
    for line in Path(phrase_path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        target, source, result = line.split("\t")
        phrases[(source.strip().lower(), target)] = result
    en_to_es: dict[str, str] = {}
    es_to_en: dict[str, str] = {}
    for line in Path(words_path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        en, es = (f.strip() for f in line.split("\t"))
        en_to_es.setdefault(en, es)
        es_to_en.setdefault(es, en)
    for spanish in sorted(lexicon.spanish_lemmas):
        entry = lexicon.lookup_es(spanish)
        assert entry is not None
        es_to_en.setdefault(entry.spanish_lemma, entry.english_lemma)
        en_to_es.setdefault(entry.english_lemma, entry.spanish_lemma)
    return PhraseTableTranslator(phrases, en_to_es, es_to_en, lid)


class ExternalTranslator:
    """Adapter for an HTTP translation service.

    Expects a JSON endpoint: POST {"text": ..., "target": "english"|"spanish"}
    returning {"text": ...}. Credentials come from the environment variable
    named by `credential_env`.
    """

    def __init__(self, endpoint: str, credential_env: str = "MAPMIX_TRANSLATOR_KEY", timeout_s: float = 10.0):
        self.endpoint = endpoint
        self.credential_env = credential_env
        self.timeout_s = timeout_s

    def translate(self, text: str, target: str) -> str:
        payload = json.dumps({"text": text, "target": target}).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.credential_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        req = urllib.request.Request(self.endpoint, data=payload, headers=headers)
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, TimeoutError, ValueError) as exc:
            raise TranslationError(f"translation service failed: {exc}") from exc
        result = body.get("text")
        if not isinstance(result, str):
            raise TranslationError("translation service returned no text")
        return result
