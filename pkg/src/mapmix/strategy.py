"""The nine code-switching strategies applied to every bot reply.

Five alternational strategies rewrite whole utterances through a
translator; four insertional strategies rewrite simple Spanish noun
phrases in place using the noun dictionary and determiner tables. Every
strategy is a pure transformation of the candidate text given the dialog
state; the caller owns appending the result to the history.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .lexicon import FEMININE, MASCULINE, Lexicon, map_determiner_gender
from .textproc import (
    ENGLISH,
    MIXED,
    NONE,
    SPANISH,
    LanguageId,
    Utterance,
    annotate,
    extract_simple_nps,
    tokenize,
)
from .translate import TranslationError, Translator

logger = logging.getLogger(__name__)

ALT_BASELINE = "alt_baseline"
ALT_ALIGNMENT = "alt_alignment"
ALT_ADVERSARIAL = "alt_adversarial"
ALT_RANDOM = "alt_random"
ALT_SHORT_CONTEXT = "alt_short_context"
INS_BASELINE = "ins_baseline"
INS_CONGRUENT = "ins_congruent"
INS_FEM_INCONGRUENT = "ins_fem_incongruent"
INS_MASC_INCONGRUENT = "ins_masc_incongruent"

ALTERNATIONAL_KINDS = (ALT_BASELINE, ALT_ALIGNMENT, ALT_ADVERSARIAL, ALT_RANDOM, ALT_SHORT_CONTEXT)
INSERTIONAL_KINDS = (INS_BASELINE, INS_CONGRUENT, INS_FEM_INCONGRUENT, INS_MASC_INCONGRUENT)
STRATEGY_KINDS = ALTERNATIONAL_KINDS + INSERTIONAL_KINDS

_OTHER = {ENGLISH: SPANISH, SPANISH: ENGLISH}


@dataclass(frozen=True)
class StrategyConfig:
    """One strategy condition; fixed for a whole session (between groups)."""

    kind: str
    k: int = 3
    switch_probability: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind: {self.kind!r}")
        if self.k < 1:
            raise ValueError("short-context window k must be >= 1")
        if not 0.0 <= self.switch_probability <= 1.0:
            raise ValueError("switch_probability must be in [0, 1]")

    @property
    def insertional(self) -> bool:
        return self.kind in INSERTIONAL_KINDS


@dataclass
class DialogState:
    """Per-dialog history plus the bot's unilingual-run bookkeeping.

    Mixed- and none-labeled bot utterances are skipped when counting the
    run: they neither extend nor reset it.
    """

    history: list[Utterance] = field(default_factory=list)
    bot_unilingual_run: int = 0
    bot_run_language: str | None = None
    bot_utterance_count: int = 0

    def append(self, utt: Utterance) -> None:
        self.history.append(utt)
        if utt.speaker != "bot":
            return
        self.bot_utterance_count += 1
        if utt.label in (ENGLISH, SPANISH):
            if utt.label == self.bot_run_language:
                self.bot_unilingual_run += 1
            else:
                self.bot_run_language = utt.label
                self.bot_unilingual_run = 1

    def last_human_label(self) -> str | None:
        for utt in reversed(self.history):
            if utt.speaker == "human":
                return utt.label
        return None


def recompute_bot_run(history: list[Utterance]) -> tuple[int, str | None]:
    """Recover (run length, run language) from scratch; oracle for append()."""
    run, lang = 0, None
    for utt in history:
        if utt.speaker != "bot" or utt.label not in (ENGLISH, SPANISH):
            continue
        if utt.label == lang:
            run += 1
        else:
            lang, run = utt.label, 1
    return run, lang


def ins_transform(cfg: StrategyConfig, candidate: str, lex: Lexicon,
                  adjectives: frozenset[str] = frozenset()) -> str:
    """Rewrite simple Spanish noun phrases per the insertional strategy.

    congruent translates every dictionary noun, keeping the determiner;
    the incongruent variants translate only one gender and flip the
    determiner. Unknown nouns and complex phrases are untouched. The
    rewrite preserves the surrounding text and copies the first-letter
    case of each replaced token.
    """
    if cfg.kind == INS_BASELINE:
        return candidate
    tokens = tokenize(candidate)
    spans = [
        s for s in extract_simple_nps(tokens, lex, adjectives) if s.noun_lang == SPANISH
    ]
    edits: list[tuple[int, int, str]] = []
    for span in spans:
        if cfg.kind == INS_FEM_INCONGRUENT and span.noun_gender != FEMININE:
            continue
        if cfg.kind == INS_MASC_INCONGRUENT and span.noun_gender != MASCULINE:
            continue
        entry = lex.lookup_es(span.noun_spanish_lemma)
        if entry is None:
            continue
        det_tok = tokens[span.det_index]
        noun_tok = tokens[span.noun_index]
        if cfg.kind == INS_CONGRUENT:
            new_det = det_tok.lower
        else:
            target = MASCULINE if span.noun_gender == FEMININE else FEMININE
            new_det = map_determiner_gender(det_tok.lower, target)
        edits.append((det_tok.start, det_tok.end, _match_case(det_tok.surface, new_det)))
        edits.append((noun_tok.start, noun_tok.end, _match_case(noun_tok.surface, entry.english_lemma)))
    out = candidate
    for start, end, new in sorted(edits, reverse=True):
        out = out[:start] + new + out[end:]
    return out


def _match_case(old: str, new: str) -> str:
    if old[:1].isupper():
        return new[:1].upper() + new[1:]
    return new


class StrategyEngine:
    """Dispatches a StrategyConfig over candidate bot replies."""

    def __init__(self, lex: Lexicon, lid: LanguageId, translator: Translator,
                 adjectives: frozenset[str] = frozenset()):
        self.lex = lex
        self.lid = lid
        self.translator = translator
        self.adjectives = adjectives

    def label_of(self, text: str) -> str:
        _, label = annotate(text, self.lid)
        return label

    def _translate(self, candidate: str, target: str) -> str:
        # Translator failure degrades to the untouched candidate.
        try:
            return self.translator.translate(candidate, target)
        except TranslationError:
            logger.warning("degraded turn: translation to %s failed, emitting candidate unchanged", target)
            return candidate

    def alt_alignment(self, state: DialogState, candidate: str) -> str:
        human = state.last_human_label()
        if human not in (ENGLISH, SPANISH):
            return candidate
        if self.label_of(candidate) == human:
            return candidate
        return self._translate(candidate, human)

    def alt_adversarial(self, state: DialogState, candidate: str) -> str:
        human = state.last_human_label()
        if human not in (ENGLISH, SPANISH):
            return candidate
        target = _OTHER[human]
        if self.label_of(candidate) == target:
            return candidate
        return self._translate(candidate, target)

    def alt_random(self, cfg: StrategyConfig, candidate: str, rng: random.Random) -> str:
        label = self.label_of(candidate)
        if label in (MIXED, NONE):
            return candidate
        if rng.random() < cfg.switch_probability:
            return self._translate(candidate, _OTHER[label])
        return candidate

    def alt_short_context(self, cfg: StrategyConfig, state: DialogState, candidate: str) -> str:
        if state.bot_unilingual_run < cfg.k or state.bot_run_language is None:
            return candidate
        if self.label_of(candidate) != state.bot_run_language:
            return candidate
        return self._translate(candidate, _OTHER[state.bot_run_language])

    def apply(self, cfg: StrategyConfig, state: DialogState, candidate: str,
              rng: random.Random) -> str:
        if cfg.kind in (ALT_BASELINE, INS_BASELINE):
            return candidate
        if cfg.kind == ALT_ALIGNMENT:
            return self.alt_alignment(state, candidate)
        if cfg.kind == ALT_ADVERSARIAL:
            return self.alt_adversarial(state, candidate)
        if cfg.kind == ALT_RANDOM:
            return self.alt_random(cfg, candidate, rng)
        if cfg.kind == ALT_SHORT_CONTEXT:
            return self.alt_short_context(cfg, state, candidate)
        return ins_transform(cfg, candidate, self.lex, self.adjectives)


def apply_strategy(cfg: StrategyConfig, state: DialogState, candidate: str,
                   lex: Lexicon, tr: Translator, rng: random.Random,
                   lid: LanguageId, adjectives: frozenset[str] = frozenset()) -> str:
    """Functional form of StrategyEngine.apply."""
    return StrategyEngine(lex, lid, tr, adjectives).apply(cfg, state, candidate, rng)


def derive_session_rng(session_id: str, rng_seed: int) -> random.Random:
    """Stable per-session stream from (session id, configured seed)."""
    import hashlib

    digest = hashlib.sha256(f"{session_id}:{rng_seed}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
