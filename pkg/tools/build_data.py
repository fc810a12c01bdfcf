#!/usr/bin/env python3
"""Regenerate derived data files bundled with the package.

Derives gender_dict.tsv from noun_dict.tsv, builds the two character-trigram
frequency tables from the wordlists plus dictionary lemmas, and emits the four
bundled map files from waypoint specs. Outputs are committed; rerun after
editing the source dictionaries or wordlists.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "mapmix" / "data"


def read_words(path: Path) -> list[str]:
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def read_noun_dict() -> list[tuple[str, str, str]]:
    rows = []
    for line in (DATA / "noun_dict.tsv").read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        spanish, english, gender = line.split("\t")
        rows.append((spanish, english, gender))
    return rows


def build_gender_dict() -> None:
    rows = read_noun_dict()
    genders: dict[str, set[str]] = {}
    for _, english, gender in rows:
        genders.setdefault(english, set()).add(gender)
    lines = [
        "# English noun gender dictionary, derived from noun_dict.tsv.",
        "# Columns: english_lemma <TAB> gender",
        "# gender is 'ambiguous' when Spanish synonyms of differing gender map",
        "# to the same English noun. Regenerate with tools/build_data.py.",
    ]
    for english in sorted(genders):
        gs = genders[english]
        gender = "ambiguous" if len(gs) > 1 else next(iter(gs))
        lines.append(f"{english}\t{gender}")
    (DATA / "gender_dict.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    n_amb = sum(1 for gs in genders.values() if len(gs) > 1)
    print(f"gender_dict.tsv: {len(genders)} lemmas ({n_amb} ambiguous) from {len(rows)} noun rows")


def trigrams(word: str) -> list[str]:
    padded = f"^{word}$"
    return [padded[i : i + 3] for i in range(len(padded) - 2)]


def build_trigram_tables() -> None:
    noun_rows = read_noun_dict()
    tools = Path(__file__).resolve().parent
    train = {
        "en": read_words(DATA / "english_words.txt")
        + [r[1] for r in noun_rows]
        + read_words(tools / "trigram_train_en.txt"),
        "es": read_words(DATA / "spanish_words.txt")
        + [r[0] for r in noun_rows]
        + read_words(tools / "trigram_train_es.txt"),
    }
    for lang, words in train.items():
        counts: Counter[str] = Counter()
        for w in set(words):
            counts.update(trigrams(w.lower()))
        lines = [
            f"# Character trigram counts for {lang}, built from the bundled",
            "# wordlist and dictionary lemmas ('^'/'$' mark word boundaries).",
            "# Columns: trigram <TAB> count. Regenerate with tools/build_data.py.",
        ]
        for tri, c in sorted(counts.items()):
            lines.append(f"{tri}\t{c}")
        (DATA / f"trigrams_{lang}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"trigrams_{lang}.txt: {len(counts)} trigrams from {len(set(words))} words")


# Map specs: (map_id, waypoints, landmarks). Waypoints are rectilinear
# (consecutive points differ along one axis); the first is the start, the
# last the end. Landmarks: (spanish, english, gender, x, y).
MAPS = [
    (
        "riverside",
        [(10, 0), (10, 3), (5, 3), (5, 7), (12, 7), (12, 12), (7, 12), (7, 16), (3, 16), (3, 19)],
        [
            ("roca", "rock", "feminine", 11, 3),
            ("árbol", "tree", "masculine", 4, 2),
            ("cabaña", "cabin", "feminine", 4, 8),
            ("puente", "bridge", "masculine", 13, 7),
            ("cascada", "waterfall", "feminine", 13, 12),
            ("muelle", "dock", "masculine", 6, 11),
            ("bote", "boat", "masculine", 8, 17),
        ],
    ),
    (
        "orchard",
        [(4, 0), (4, 4), (9, 4), (9, 9), (15, 9), (15, 14), (10, 14), (10, 18), (16, 18)],
        [
            ("granero", "barn", "masculine", 3, 5),
            ("vaca", "cow", "feminine", 10, 3),
            ("molino", "mill", "masculine", 8, 10),
            ("valla", "fence", "feminine", 16, 8),
            ("pozo", "well", "masculine", 14, 15),
            ("carreta", "wagon", "feminine", 9, 13),
            ("árboles", "trees", "masculine", 11, 17),
        ],
    ),
    (
        "harbor",
        [(15, 0), (15, 5), (8, 5), (8, 10), (3, 10), (3, 15), (11, 15), (11, 19)],
        [
            ("faro", "lighthouse", "masculine", 16, 4),
            ("torre", "tower", "feminine", 7, 4),
            ("mercado", "market", "masculine", 9, 11),
            ("estatua", "statue", "feminine", 2, 9),
            ("playa", "beach", "feminine", 2, 16),
            ("barco", "boat", "masculine", 12, 14),
        ],
    ),
    (
        "savanna",
        [(2, 0), (2, 6), (7, 6), (7, 2), (13, 2), (13, 8), (18, 8), (18, 13), (12, 13), (12, 19)],
        [
            ("jirafa", "giraffe", "feminine", 1, 5),
            ("cocodrilo", "crocodile", "masculine", 8, 7),
            ("serpiente", "snake", "feminine", 6, 1),
            ("león", "lion", "masculine", 14, 1),
            ("mariposa", "butterfly", "feminine", 14, 9),
            ("rocas", "rocks", "feminine", 19, 7),
            ("tigre", "tiger", "masculine", 17, 14),
            ("nopal", "cactus", "masculine", 11, 18),
        ],
    ),
]


def expand_waypoints(waypoints: list[tuple[int, int]]) -> list[tuple[int, int]]:
    path = [waypoints[0]]
    for (x0, y0), (x1, y1) in zip(waypoints, waypoints[1:]):
        if x0 != x1 and y0 != y1:
            raise ValueError(f"waypoints not rectilinear: {(x0, y0)} -> {(x1, y1)}")
        while (x0, y0) != (x1, y1):
            x0 += (x1 > x0) - (x1 < x0)
            y0 += (y1 > y0) - (y1 < y0)
            path.append((x0, y0))
    return path


def build_maps() -> None:
    maps_dir = DATA / "maps"
    maps_dir.mkdir(exist_ok=True)
    for map_id, waypoints, landmarks in MAPS:
        path = expand_waypoints(waypoints)
        lines = [
            f"# Map '{map_id}'. Regenerate with tools/build_data.py.",
            f"id: {map_id}",
            "size: 20 20",
            f"start: {path[0][0]} {path[0][1]}",
            f"end: {path[-1][0]} {path[-1][1]}",
        ]
        for spanish, english, gender, x, y in landmarks:
            lines.append(f"landmark: {spanish} {english} {gender} {x} {y}")
        cells = " ".join(f"{x},{y}" for x, y in path)
        lines.append(f"path: {cells}")
        (maps_dir / f"{map_id}.map").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{map_id}.map: {len(path)} path cells, {len(landmarks)} landmarks")


if __name__ == "__main__":
    build_gender_dict()
    build_trigram_tables()
    build_maps()
