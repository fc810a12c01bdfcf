"""Curated bilingual dictionaries and the Spanish determiner tables.

Three data sources drive noun-phrase extraction and rewriting: a
Spanish-to-English noun dictionary (with grammatical gender), an English
noun gender dictionary derived from it, and the masculine/feminine
determiner mappings. Dictionaries are TSV files; the determiner table is
compiled in.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

MASCULINE = "masculine"
FEMININE = "feminine"
AMBIGUOUS = "ambiguous"

MASCULINE_DETERMINERS = ("el", "un", "los", "unos")
FEMININE_DETERMINERS = ("la", "una", "las", "unas")
TO_FEMININE = dict(zip(MASCULINE_DETERMINERS, FEMININE_DETERMINERS))
TO_MASCULINE = dict(zip(FEMININE_DETERMINERS, MASCULINE_DETERMINERS))
ALL_DETERMINERS = frozenset(MASCULINE_DETERMINERS) | frozenset(FEMININE_DETERMINERS)


class LexiconError(ValueError):
    """A dictionary file is malformed or internally inconsistent."""


@dataclass(frozen=True)
class NounEntry:
    spanish_lemma: str
    english_lemma: str
    spanish_gender: str  # masculine | feminine


@dataclass(frozen=True)
class EnglishGenderEntry:
    english_lemma: str
    gender: str  # masculine | feminine | ambiguous


def determiner_gender(det: str) -> str | None:
    """Gender of a known simple determiner, or None for any other word."""
    low = det.lower()
    if low in TO_FEMININE:
        return MASCULINE
    if low in TO_MASCULINE:
        return FEMININE
    return None


def map_determiner_gender(det: str, target: str) -> str:
    """Return the same determiner series in the target gender.

    Identity when the determiner is already in the target gender. Raises
    LexiconError for words outside the four el/un/los/unos series.
    """
    low = det.lower()
    if target == FEMININE:
        if low in TO_MASCULINE:
            return low
        if low in TO_FEMININE:
            return TO_FEMININE[low]
    elif target == MASCULINE:
        if low in TO_FEMININE:
            return low
        if low in TO_MASCULINE:
            return TO_MASCULINE[low]
    else:
        raise LexiconError(f"unknown target gender: {target!r}")
    raise LexiconError(f"not a simple Spanish determiner: {det!r}")


class Lexicon:
    """Immutable lookup structure over the two noun dictionaries."""

    def __init__(self, nouns: list[NounEntry], genders: list[EnglishGenderEntry]):
        self._by_spanish: dict[str, NounEntry] = {}
        for entry in nouns:
            if entry.spanish_lemma in self._by_spanish:
                raise LexiconError(f"duplicate Spanish lemma: {entry.spanish_lemma!r}")
            self._by_spanish[entry.spanish_lemma] = entry
        self._gender_by_english: dict[str, EnglishGenderEntry] = {}
        for gentry in genders:
            if gentry.english_lemma in self._gender_by_english:
                raise LexiconError(f"duplicate English lemma: {gentry.english_lemma!r}")
            self._gender_by_english[gentry.english_lemma] = gentry
        self._by_english: dict[str, list[NounEntry]] = {}
        for entry in nouns:
            self._by_english.setdefault(entry.english_lemma, []).append(entry)
        self._validate_gender_consistency()

    def _validate_gender_consistency(self) -> None:
        # An English noun is ambiguous exactly when its Spanish synonyms
        # disagree on gender.
        for english, gentry in self._gender_by_english.items():
            sources = self._by_english.get(english)
            if not sources:
                raise LexiconError(
                    f"gender dictionary lists {english!r} but no noun entry maps to it"
                )
            observed = {e.spanish_gender for e in sources}
            expected = AMBIGUOUS if len(observed) > 1 else next(iter(observed))
            if gentry.gender != expected:
                raise LexiconError(
                    f"gender dictionary says {english!r} is {gentry.gender}, "
                    f"but noun entries imply {expected}"
                )

    def lookup_es(self, spanish_lemma: str) -> NounEntry | None:
        return self._by_spanish.get(spanish_lemma.lower())

    def lookup_en(self, english_lemma: str) -> list[NounEntry]:
        """All noun entries translating to this English lemma, file order."""
        return list(self._by_english.get(english_lemma.lower(), ()))

    def lookup_en_gender(self, english_lemma: str) -> str | None:
        entry = self._gender_by_english.get(english_lemma.lower())
        return entry.gender if entry else None

    @property
    def spanish_lemmas(self) -> frozenset[str]:
        return frozenset(self._by_spanish)

    @property
    def english_lemmas(self) -> frozenset[str]:
        return frozenset(self._by_english) | frozenset(self._gender_by_english)

    def __len__(self) -> int:
        return len(self._by_spanish)

    def gender_entries(self) -> list[EnglishGenderEntry]:
        return sorted(self._gender_by_english.values(), key=lambda e: e.english_lemma)

    def coverage_gaps(self) -> list[str]:
        """English lemmas from the noun dictionary missing a gender entry."""
        return sorted(e for e in self._by_english if e not in self._gender_by_english)


def _read_tsv(path: Path, n_columns: int) -> list[tuple[int, list[str]]]:
    rows = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != n_columns:
            raise LexiconError(
                f"{path.name}:{lineno}: expected {n_columns} tab-separated fields, "
                f"got {len(fields)}"
            )
        rows.append((lineno, fields))
    return rows


def load_lexicon(noun_dict_path: str | Path, gender_dict_path: str | Path) -> Lexicon:
    """Load and cross-validate the two noun dictionaries."""
    noun_path = Path(noun_dict_path)
    gender_path = Path(gender_dict_path)
    nouns = []
    for lineno, (spanish, english, gender) in _read_tsv(noun_path, 3):
        if gender not in (MASCULINE, FEMININE):
            raise LexiconError(f"{noun_path.name}:{lineno}: unknown gender {gender!r}")
        nouns.append(NounEntry(spanish.lower(), english.lower(), gender))
    genders = []
    for lineno, (english, gender) in _read_tsv(gender_path, 2):
        if gender not in (MASCULINE, FEMININE, AMBIGUOUS):
            raise LexiconError(f"{gender_path.name}:{lineno}: unknown gender {gender!r}")
        genders.append(EnglishGenderEntry(english.lower(), gender))
    return Lexicon(nouns, genders)


def determiner_table() -> dict[str, dict[str, str]]:
    """Dump of the compiled-in determiner mappings, for audit."""
    return {
        "masculine_to_feminine": dict(TO_FEMININE),
        "feminine_to_masculine": dict(TO_MASCULINE),
    }
