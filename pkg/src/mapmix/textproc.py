"""Tokenization, token-level language identification, utterance labeling,
and lexicon-driven simple noun-phrase extraction.

Identification is lexicon-first: exact wordlist hits decide a token, words
on the curated both-languages list stay undecided, and everything else
falls back to a character-trigram log-likelihood ratio between two bundled
frequency tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .lexicon import ALL_DETERMINERS, AMBIGUOUS, FEMININE, MASCULINE, Lexicon, determiner_gender

ENGLISH = "english"
SPANISH = "spanish"
UNDECIDED = "undecided"
MIXED = "mixed"
NONE = "none"

WORD = "word"
PUNCT = "punctuation"
NUMBER = "number"
OTHER = "other"

_APOSTROPHES = "'’"

# Switch classes for Spanish-determiner + English-noun phrases.
CONGRUENT_MASC = "congruent_masc"
CONGRUENT_FEM = "congruent_fem"
INCONGRUENT_MASC = "incongruent_masc"
INCONGRUENT_FEM = "incongruent_fem"
NP_CLASSES = (CONGRUENT_MASC, CONGRUENT_FEM, INCONGRUENT_MASC, INCONGRUENT_FEM, AMBIGUOUS)


@dataclass
class Token:
    surface: str
    lower: str
    kind: str  # word | punctuation | number | other
    start: int
    end: int
    lang: str = UNDECIDED


@dataclass
class Utterance:
    speaker: str  # human | bot
    text: str
    tokens: list[Token]
    label: str  # english | spanish | mixed | none
    timestamp_ms: int = 0


@dataclass(frozen=True)
class NounPhraseSpan:
    det_index: int
    noun_index: int
    det_gender: str
    noun_spanish_lemma: str
    noun_gender: str  # masculine | feminine | ambiguous
    noun_lang: str  # english | spanish


def _token_kind(core: str) -> str:
    if any(ch.isalpha() for ch in core):
        return WORD
    if core.isdigit():
        return NUMBER
    return OTHER


def tokenize(text: str) -> list[Token]:
    """Split on whitespace, detaching leading/trailing punctuation.

    Apostrophized clitics ("it's") stay one token. Token spans index into
    the original text, so surfaces plus the gaps between spans reconstruct
    it exactly.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        chunk, base = text[i:j], i
        lo, hi = 0, len(chunk)
        lead: list[int] = []
        trail: list[int] = []
        while lo < hi and not (chunk[lo].isalnum() or chunk[lo] in _APOSTROPHES):
            lead.append(lo)
            lo += 1
        while hi > lo and not (chunk[hi - 1].isalnum() or chunk[hi - 1] in _APOSTROPHES):
            trail.append(hi - 1)
            hi -= 1
        # Edge apostrophes are quotes, not clitics.
        while lo < hi and chunk[lo] in _APOSTROPHES:
            lead.append(lo)
            lo += 1
        while hi > lo and chunk[hi - 1] in _APOSTROPHES:
            trail.append(hi - 1)
            hi -= 1
        for k in lead:
            tokens.append(Token(chunk[k], chunk[k].lower(), PUNCT, base + k, base + k + 1))
        if lo < hi:
            core = chunk[lo:hi]
            tokens.append(Token(core, core.lower(), _token_kind(core), base + lo, base + hi))
        for k in reversed(trail):
            tokens.append(Token(chunk[k], chunk[k].lower(), PUNCT, base + k, base + k + 1))
        i = j
    return tokens


class CharModel:
    """Character-trigram log-likelihood scorer between English and Spanish."""

    def __init__(self, counts_en: dict[str, int], counts_es: dict[str, int], tau: float = 1.0):
        self.tau = tau
        vocab = len(set(counts_en) | set(counts_es)) + 1
        self._logp = {}
        for lang, counts in ((ENGLISH, counts_en), (SPANISH, counts_es)):
            total = sum(counts.values()) + vocab
            self._logp[lang] = (
                {tri: math.log((c + 1) / total) for tri, c in counts.items()},
                math.log(1 / total),
            )

    def score(self, word: str) -> float:
        """Positive favors English, negative Spanish."""
        padded = f"^{word}$"
        llr = 0.0
        for i in range(len(padded) - 2):
            tri = padded[i : i + 3]
            for lang, sign in ((ENGLISH, 1.0), (SPANISH, -1.0)):
                table, unseen = self._logp[lang]
                llr += sign * table.get(tri, unseen)
        return llr

    def classify(self, word: str) -> str:
        llr = self.score(word)
        if llr > self.tau:
            return ENGLISH
        if llr < -self.tau:
            return SPANISH
        return UNDECIDED

    @staticmethod
    def load(en_path: str | Path, es_path: str | Path, tau: float = 1.0) -> "CharModel":
        def read(path: str | Path) -> dict[str, int]:
            counts = {}
            for line in Path(path).read_text(encoding="utf-8").splitlines():
                if not line or line.startswith("#"):
                    continue
                tri, _, c = line.rpartition("\t")
                counts[tri] = int(c)
            return counts

        return CharModel(read(en_path), read(es_path), tau)


class LanguageId:
    """Word-level classifier: wordlists first, character model as backoff."""

    def __init__(
        self,
        english_words: set[str],
        spanish_words: set[str],
        ambiguous_words: set[str],
        model: CharModel,
        lexicon: Lexicon | None = None,
    ):
        self.english_words = frozenset(english_words) | (
            lexicon.english_lemmas if lexicon else frozenset()
        )
        self.spanish_words = (
            frozenset(spanish_words)
            | (lexicon.spanish_lemmas if lexicon else frozenset())
            | ALL_DETERMINERS
        )
        self.ambiguous_words = frozenset(ambiguous_words)
        self.model = model

    def classify_word(self, lower: str) -> str:
        if lower in self.ambiguous_words:
            return UNDECIDED
        in_en = lower in self.english_words
        in_es = lower in self.spanish_words
        if in_en and in_es:
            return UNDECIDED
        if in_es:
            return SPANISH
        if in_en:
            return ENGLISH
        return self.model.classify(lower)


def classify_token(tok: Token, lid: LanguageId) -> str:
    """Language of a single word token (undecided for anything else)."""
    if tok.kind != WORD:
        return UNDECIDED
    return lid.classify_word(tok.lower)


def label_utterance(tokens: list[Token]) -> str:
    """english/spanish when all decided tokens agree, mixed when both
    languages occur, none when no token is decided."""
    has_en = any(t.lang == ENGLISH for t in tokens)
    has_es = any(t.lang == SPANISH for t in tokens)
    if has_en and has_es:
        return MIXED
    if has_en:
        return ENGLISH
    if has_es:
        return SPANISH
    return NONE


def annotate(text: str, lid: LanguageId) -> tuple[list[Token], str]:
    """Tokenize, classify every word token, and label the whole utterance."""
    tokens = tokenize(text)
    for tok in tokens:
        tok.lang = classify_token(tok, lid)
    return tokens, label_utterance(tokens)


def make_utterance(
    speaker: str, text: str, lid: LanguageId, timestamp_ms: int = 0
) -> Utterance:
    tokens, label = annotate(text, lid)
    return Utterance(speaker, text, tokens, label, timestamp_ms)


def extract_simple_nps(
    tokens: list[Token], lex: Lexicon, adjectives: frozenset[str] = frozenset()
) -> list[NounPhraseSpan]:
    """Determiner-adjacent dictionary nouns, with complex phrases excluded.

    A span is a known Spanish determiner immediately followed by either a
    Spanish noun from the noun dictionary or an English noun from the
    gender dictionary. A noun immediately followed by a listed Spanish
    adjective makes the phrase complex and the span is dropped.
    """
    spans: list[NounPhraseSpan] = []
    i = 0
    while i < len(tokens) - 1:
        det = tokens[i]
        noun = tokens[i + 1]
        det_g = determiner_gender(det.lower) if det.kind == WORD else None
        if det_g is None or noun.kind != WORD:
            i += 1
            continue
        span = None
        entry = lex.lookup_es(noun.lower)
        if entry is not None:
            span = NounPhraseSpan(i, i + 1, det_g, entry.spanish_lemma, entry.spanish_gender, SPANISH)
        else:
            gender = lex.lookup_en_gender(noun.lower)
            if gender is not None:
                sources = lex.lookup_en(noun.lower)
                lemma = sources[0].spanish_lemma if sources else noun.lower
                span = NounPhraseSpan(i, i + 1, det_g, lemma, gender, ENGLISH)
        if span is not None:
            follower = tokens[i + 2] if i + 2 < len(tokens) else None
            if follower is not None and follower.kind == WORD and follower.lower in adjectives:
                span = None  # complex NP: noun + adjective
        if span is not None:
            spans.append(span)
            i += 2
        else:
            i += 1
    return spans


def classify_mixed_np(span: NounPhraseSpan) -> str:
    """Switch class of a Spanish-determiner + English-noun span."""
    if span.noun_lang != ENGLISH:
        raise ValueError("not a mixed noun phrase: noun is Spanish")
    if span.noun_gender == AMBIGUOUS:
        return AMBIGUOUS
    if span.noun_gender == MASCULINE:
        return CONGRUENT_MASC if span.det_gender == MASCULINE else INCONGRUENT_MASC
    return CONGRUENT_FEM if span.det_gender == FEMININE else INCONGRUENT_FEM


def matrix_language(tokens: list[Token]) -> str | None:
    """Majority language of the decided tokens; None on a tie or no data."""
    n_en = sum(1 for t in tokens if t.lang == ENGLISH)
    n_es = sum(1 for t in tokens if t.lang == SPANISH)
    if n_es > n_en:
        return SPANISH
    if n_en > n_es:
        return ENGLISH
    return None
