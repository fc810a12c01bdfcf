"""Dependent measures: DTW route similarity, dialog composition statistics,
inter-sentential switching, entrainment, and mixed-NP tabulations.

The DTW cost uses Manhattan distance over grid cells, so raw costs are
integers; the normalized score divides by the target path's cell count.
`dtw_brute_force` enumerates every monotone boundary-aligned alignment and
exists purely as an independent check of the dynamic program.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lexicon import Lexicon
from .textproc import (
    ENGLISH,
    MIXED,
    NONE,
    SPANISH,
    NP_CLASSES,
    Utterance,
    classify_mixed_np,
    extract_simple_nps,
    matrix_language,
)

Cell = tuple[int, int]


@dataclass(frozen=True)
class RouteScore:
    raw: int
    normalized: float


def dtw_route_distance(trace: list[Cell], target: list[Cell]) -> RouteScore:
    """Classic DTW between the navigated trace and the target path.

    Boundary-aligned (first to first, last to last) with match/insert/delete
    steps; the cost of a warping path is the sum of Manhattan distances of
    every visited cell pair. Raises ValueError on an empty input (empty
    navigations are excluded upstream).
    """
    if not trace or not target:
        raise ValueError("DTW requires nonempty paths")
    raw = _dtw_cost(trace, target)
    return RouteScore(raw, raw / len(target))


def _dtw_cost(a: list[Cell], b: list[Cell]) -> int:
    bx = [p[0] for p in b]
    by = [p[1] for p in b]
    n = len(b)
    ax0, ay0 = a[0]
    prev = []
    acc = 0
    for j in range(n):
        acc += abs(ax0 - bx[j]) + abs(ay0 - by[j])
        prev.append(acc)
    for i in range(1, len(a)):
        ax, ay = a[i]
        cur = [0] * n
        left = prev[0] + abs(ax - bx[0]) + abs(ay - by[0])
        cur[0] = left
        for j in range(1, n):
            pj = prev[j]
            pj1 = prev[j - 1]
            best = pj if pj < pj1 else pj1
            if left < best:
                best = left
            left = best + abs(ax - bx[j]) + abs(ay - by[j])
            cur[j] = left
        prev = cur
    return prev[-1]


def enumerate_alignments(m: int, n: int) -> list[list[tuple[int, int]]]:
    """Every monotone boundary-aligned alignment between lengths m and n.

    An alignment is a lattice path of index pairs from (0,0) to (m-1,n-1)
    advancing either index (or both) by one per step.
    """
    out: list[list[tuple[int, int]]] = []

    def walk(i: int, j: int, acc: list[tuple[int, int]]) -> None:
        if i == m - 1 and j == n - 1:
            out.append(list(acc))
            return
        if i + 1 < m:
            acc.append((i + 1, j))
            walk(i + 1, j, acc)
            acc.pop()
        if j + 1 < n:
            acc.append((i, j + 1))
            walk(i, j + 1, acc)
            acc.pop()
        if i + 1 < m and j + 1 < n:
            acc.append((i + 1, j + 1))
            walk(i + 1, j + 1, acc)
            acc.pop()

    walk(0, 0, [(0, 0)])
    return out


def dtw_brute_force(a: list[Cell], b: list[Cell]) -> int:
    """Minimum alignment cost by exhaustive enumeration (oracle)."""
    if not a or not b:
        raise ValueError("DTW requires nonempty paths")
    best = None
    for alignment in enumerate_alignments(len(a), len(b)):
        cost = 0
        for i, j in alignment:
            cost += abs(a[i][0] - b[j][0]) + abs(a[i][1] - b[j][1])
        if best is None or cost < best:
            best = cost
    assert best is not None
    return best


def intersentential_cs_rate(
    transcript: list[Utterance], speaker: str = "human", skip_mixed_none: bool = False
) -> float:
    """Fraction of eligible adjacent same-speaker pairs whose language flips.

    A pair is eligible when both labels are unilingual. By default a
    mixed/none utterance breaks adjacency; with skip_mixed_none the rate is
    computed over the unilingual subsequence instead.
    """
    labels = [u.label for u in transcript if u.speaker == speaker]
    if skip_mixed_none:
        labels = [l for l in labels if l in (ENGLISH, SPANISH)]
    switches = eligible = 0
    for a, b in zip(labels, labels[1:]):
        if a in (ENGLISH, SPANISH) and b in (ENGLISH, SPANISH):
            eligible += 1
            if a != b:
                switches += 1
    return switches / eligible if eligible else 0.0


def entrainment_rate(transcript: list[Utterance]) -> float:
    """Fraction of human utterances matching the preceding bot language.

    Mixed labels act as wildcards on either side; a none label on either
    side makes the pair ineligible, as does a human utterance with no
    preceding bot utterance.
    """
    matches = eligible = 0
    last_bot: str | None = None
    for utt in transcript:
        if utt.speaker == "bot":
            last_bot = utt.label
            continue
        if utt.speaker != "human" or last_bot is None:
            continue
        if utt.label == NONE or last_bot == NONE:
            continue
        eligible += 1
        if utt.label == last_bot or MIXED in (utt.label, last_bot):
            matches += 1
    return matches / eligible if eligible else 0.0


def tabulate_np_switches(
    transcripts: list[list[Utterance]],
    lex: Lexicon,
    adjectives: frozenset[str] = frozenset(),
    speaker: str = "human",
) -> dict[str, int]:
    """Counts of mixed-NP classes in Spanish-matrix utterances.

    Only utterances whose matrix language is Spanish (strict majority of
    decided tokens) contribute; ambiguous-gender nouns are counted under
    their own key and excluded from the four-way table.
    """
    counts = {cls: 0 for cls in NP_CLASSES}
    for transcript in transcripts:
        for utt in transcript:
            if utt.speaker != speaker or matrix_language(utt.tokens) != SPANISH:
                continue
            for span in extract_simple_nps(utt.tokens, lex, adjectives):
                if span.noun_lang != ENGLISH:
                    continue
                counts[classify_mixed_np(span)] += 1
    return counts


@dataclass
class DialogStats:
    n_dialogs: int = 0
    n_utterances: int = 0
    mean_utterances_per_dialog: float = 0.0
    mean_tokens_per_utterance: float = 0.0
    pct_english: float = 0.0
    pct_spanish: float = 0.0
    pct_mixed: float = 0.0
    pct_none: float = 0.0
    pct_intersentential_cs: float = 0.0
    pct_entrainment: float = 0.0
    np_counts: dict[str, int] = field(default_factory=dict)


def dialog_stats(
    transcripts: list[list[Utterance]],
    lex: Lexicon,
    adjectives: frozenset[str] = frozenset(),
    speaker: str = "human",
) -> DialogStats:
    """Composition statistics over one speaker's utterances, plus the
    cross-speaker entrainment rate, averaged across transcripts."""
    stats = DialogStats(n_dialogs=len(transcripts))
    own = [u for t in transcripts for u in t if u.speaker == speaker]
    stats.n_utterances = len(own)
    if transcripts:
        stats.mean_utterances_per_dialog = len(own) / len(transcripts)
    if own:
        word_counts = [sum(1 for tok in u.tokens if tok.kind == "word") for u in own]
        stats.mean_tokens_per_utterance = sum(word_counts) / len(own)
        stats.pct_english = sum(1 for u in own if u.label == ENGLISH) / len(own)
        stats.pct_spanish = sum(1 for u in own if u.label == SPANISH) / len(own)
        stats.pct_mixed = sum(1 for u in own if u.label == MIXED) / len(own)
        stats.pct_none = sum(1 for u in own if u.label == NONE) / len(own)
    cs_rates = [intersentential_cs_rate(t, speaker) for t in transcripts]
    ent_rates = [entrainment_rate(t) for t in transcripts]
    if transcripts:
        stats.pct_intersentential_cs = sum(cs_rates) / len(cs_rates)
        stats.pct_entrainment = sum(ent_rates) / len(ent_rates)
    stats.np_counts = tabulate_np_switches(transcripts, lex, adjectives, speaker)
    return stats


@dataclass
class GameOutcome:
    map_id: str
    human_role: str
    duration_s: float
    completed: bool
    route: RouteScore


@dataclass
class SessionReport:
    session_id: str
    condition_kind: str
    stats: DialogStats
    games: list[GameOutcome]
    pct_games_complete: float


def session_report(session, maps_by_id: dict, lex: Lexicon,
                   adjectives: frozenset[str] = frozenset()) -> SessionReport:
    """Aggregate all measures for one finished session."""
    outcomes = []
    for record in session.games:
        gmap = maps_by_id[record.map_id]
        route = dtw_route_distance(record.trace_cells(), list(gmap.target_path))
        outcomes.append(
            GameOutcome(record.map_id, record.human_role, record.duration_s, record.completed, route)
        )
    transcripts = [g.transcript for g in session.games]
    stats = dialog_stats(transcripts, lex, adjectives)
    complete = sum(1 for o in outcomes if o.completed) / len(outcomes) if outcomes else 0.0
    return SessionReport(session.session_id, session.condition_kind, stats, outcomes, complete)
