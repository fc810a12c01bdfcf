"""Per-condition descriptive report over an exported dataset.

The report is a pure function of the dataset file: every statistic is
recomputed from the exported records (labels, token tags, stored NP
annotations), so identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .store import SCHEMA_NAME, SCHEMA_VERSION
from .textproc import ENGLISH, MIXED, NONE, SPANISH

REPORT_SCHEMA = "mapmix.report"
REPORT_VERSION = 1

NP_ROW_ORDER = ("congruent_masc", "congruent_fem", "incongruent_masc", "incongruent_fem", "ambiguous")


class SchemaError(ValueError):
    """The dataset file is missing or has an unsupported schema version."""


@dataclass
class ConditionAggregate:
    n_dialogs: int = 0
    n_human_utterances: int = 0
    word_tokens: int = 0
    label_counts: dict[str, int] = field(default_factory=dict)
    cs_rates: list[float] = field(default_factory=list)
    entrainment_rates: list[float] = field(default_factory=list)
    games_complete: int = 0
    game_seconds: list[float] = field(default_factory=list)
    route_distances: list[float] = field(default_factory=list)
    np_counts: dict[str, int] = field(default_factory=lambda: {k: 0 for k in NP_ROW_ORDER})

    def metrics(self) -> dict:
        n_utt = self.n_human_utterances

        def mean(values: list[float]) -> float:
            return sum(values) / len(values) if values else 0.0

        def pct(label: str) -> float:
            return self.label_counts.get(label, 0) / n_utt if n_utt else 0.0

        total_mixed_nps = sum(self.np_counts[k] for k in NP_ROW_ORDER if k != "ambiguous")
        return {
            "n_dialogs": self.n_dialogs,
            "mean_utterances_per_dialog": n_utt / self.n_dialogs if self.n_dialogs else 0.0,
            "mean_tokens_per_utterance": self.word_tokens / n_utt if n_utt else 0.0,
            "pct_english": pct(ENGLISH),
            "pct_spanish": pct(SPANISH),
            "pct_mixed": pct(MIXED),
            "pct_none": pct(NONE),
            "pct_intersentential_cs": mean(self.cs_rates),
            "pct_entrainment": mean(self.entrainment_rates),
            "pct_games_complete": self.games_complete / self.n_dialogs if self.n_dialogs else 0.0,
            "mean_game_time_s": mean(self.game_seconds),
            "mean_route_distance": mean(self.route_distances),
            "np_counts": dict(self.np_counts),
            "total_mixed_nps": total_mixed_nps,
        }


def _cs_rate(labels: list[str]) -> float:
    switches = eligible = 0
    for a, b in zip(labels, labels[1:]):
        if a in (ENGLISH, SPANISH) and b in (ENGLISH, SPANISH):
            eligible += 1
            if a != b:
                switches += 1
    return switches / eligible if eligible else 0.0


def _entrainment(turns: list[tuple[str, str]]) -> float:
    matches = eligible = 0
    last_bot = None
    for speaker, label in turns:
        if speaker == "bot":
            last_bot = label
            continue
        if speaker != "human" or last_bot is None:
            continue
        if label == NONE or last_bot == NONE:
            continue
        eligible += 1
        if label == last_bot or MIXED in (label, last_bot):
            matches += 1
    return matches / eligible if eligible else 0.0


def load_dataset(path: str | Path) -> list[dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SchemaError("dataset file is empty")
    header = json.loads(lines[0])
    if header.get("record") != "header" or header.get("schema") != SCHEMA_NAME:
        raise SchemaError("not a dataset file (missing header record)")
    if header.get("version") != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported dataset version {header.get('version')!r} (supported: {SCHEMA_VERSION})"
        )
    return [json.loads(line) for line in lines[1:] if line]


def aggregate(records: list[dict]) -> dict[str, ConditionAggregate]:
    """Fold dataset records into per-condition aggregates."""
    by_condition: dict[str, ConditionAggregate] = {}
    dialogs: dict[tuple[str, int], list[dict]] = {}
    for rec in records:
        agg = by_condition.setdefault(rec["condition"], ConditionAggregate())
        if rec["record"] == "utterance":
            dialogs.setdefault((rec["session"], rec["game"]), []).append(rec)
            if rec["speaker"] == "human":
                agg.n_human_utterances += 1
                agg.label_counts[rec["label"]] = agg.label_counts.get(rec["label"], 0) + 1
                agg.word_tokens += sum(1 for _, kind, _ in rec["tokens"] if kind == "word")
                if rec["matrix"] == SPANISH:
                    for np in rec["nps"]:
                        if np["class"] is not None:
                            agg.np_counts[np["class"]] += 1
        elif rec["record"] == "game":
            agg.n_dialogs += 1
            agg.games_complete += 1 if rec["completed"] else 0
            agg.game_seconds.append(rec["duration_s"])
            agg.route_distances.append(rec["route_normalized"])
    for (session, _game), utts in dialogs.items():
        condition = utts[0]["condition"]
        agg = by_condition[condition]
        human_labels = [u["label"] for u in utts if u["speaker"] == "human"]
        agg.cs_rates.append(_cs_rate(human_labels))
        agg.entrainment_rates.append(_entrainment([(u["speaker"], u["label"]) for u in utts]))
    return by_condition


_ROWS = [
    ("# dialogs", "n_dialogs", "{:d}"),
    ("mean utterances/dialog", "mean_utterances_per_dialog", "{:.2f}"),
    ("mean tokens/utterance", "mean_tokens_per_utterance", "{:.2f}"),
    ("% english", "pct_english", "{:.1%}"),
    ("% spanish", "pct_spanish", "{:.1%}"),
    ("% mixed", "pct_mixed", "{:.1%}"),
    ("% none", "pct_none", "{:.1%}"),
    ("% intersentential switches", "pct_intersentential_cs", "{:.1%}"),
    ("% entrainment", "pct_entrainment", "{:.1%}"),
    ("% games complete", "pct_games_complete", "{:.1%}"),
    ("mean game time (s)", "mean_game_time_s", "{:.1f}"),
    ("mean route distance", "mean_route_distance", "{:.3f}"),
]
_NP_ROWS = [
    ("# masc. congruent NPs", "congruent_masc"),
    ("# fem. congruent NPs", "congruent_fem"),
    ("# masc. incongruent NPs", "incongruent_masc"),
    ("# fem. incongruent NPs", "incongruent_fem"),
    ("# ambiguous NPs (excluded)", "ambiguous"),
]


def render_text(by_condition: dict[str, ConditionAggregate]) -> str:
    conditions = sorted(by_condition)
    metrics = {c: by_condition[c].metrics() for c in conditions}
    label_width = max(len("metric"), *(len(r[0]) for r in _ROWS + [(n, "") for n, _ in _NP_ROWS]),
                      len("total mixed NPs"))
    col_width = max(14, *(len(c) + 2 for c in conditions)) if conditions else 14
    lines = ["metric".ljust(label_width) + "".join(c.rjust(col_width) for c in conditions)]
    for name, key, fmt in _ROWS:
        cells = [fmt.format(metrics[c][key]) for c in conditions]
        lines.append(name.ljust(label_width) + "".join(v.rjust(col_width) for v in cells))
    for name, key in _NP_ROWS:
        cells = [str(metrics[c]["np_counts"][key]) for c in conditions]
        lines.append(name.ljust(label_width) + "".join(v.rjust(col_width) for v in cells))
    cells = [str(metrics[c]["total_mixed_nps"]) for c in conditions]
    lines.append("total mixed NPs".ljust(label_width) + "".join(v.rjust(col_width) for v in cells))
    return "\n".join(lines) + "\n"


def render_json(by_condition: dict[str, ConditionAggregate]) -> str:
    payload = {
        "schema": REPORT_SCHEMA,
        "version": REPORT_VERSION,
        "conditions": {c: agg.metrics() for c, agg in sorted(by_condition.items())},
    }
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_report(dataset_path: str | Path) -> dict[str, ConditionAggregate]:
    return aggregate(load_dataset(dataset_path))
