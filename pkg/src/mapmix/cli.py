"""Command-line interface: data validation, bot-vs-bot simulation,
dataset reports, DTW oracle comparisons, the service itself, and audit
dumps. Exit codes: 0 ok, 1 validation failure, 2 I/O error."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import report as report_mod
from .game import validate_map_lexicon
from .lexicon import determiner_table
from .metrics import dtw_brute_force, dtw_route_distance
from .resources import load_default
from .store import SessionStore, export_dataset


def _cmd_validate(args) -> int:
    problems: list[str] = []
    try:
        resources = load_default()
    except Exception as exc:  # load errors are validation failures
        print(f"FAIL: resources failed to load: {exc}")
        return 1
    overlap = resources.lid.english_words & resources.lid.spanish_words
    overlap -= resources.lid.ambiguous_words
    if overlap:
        problems.append(f"wordlists overlap outside the ambiguity list: {sorted(overlap)[:10]}")
    gaps = resources.lexicon.coverage_gaps()
    if gaps:
        problems.append(f"English lemmas missing gender entries: {gaps}")
    for gmap in resources.maps.values():
        problems.extend(validate_map_lexicon(gmap, resources.lexicon))
    if len(resources.maps) < 4:
        problems.append(f"need at least 4 maps, found {len(resources.maps)}")
    if not resources.welcome_pool:
        problems.append("welcome pool is empty")
    for problem in problems:
        print(f"FAIL: {problem}")
    if problems:
        return 1
    print(
        f"ok: {len(resources.lexicon)} noun entries, "
        f"{len(resources.lexicon.gender_entries())} gender entries, "
        f"{len(resources.maps)} maps, {len(resources.welcome_pool)} welcome messages"
    )
    return 0


def _cmd_simulate(args) -> int:
    from .sim import simulate

    conditions = [c.strip() for c in args.conditions.split(",") if c.strip()]
    if not conditions:
        print("FAIL: no conditions given")
        return 1
    summary = simulate(conditions, args.sessions, args.seed, args.data_dir, args.out)
    print(
        f"simulated {summary['sessions']} sessions "
        f"({summary['utterances']} utterances) -> {args.out}"
    )
    return 0


def _cmd_report(args) -> int:
    try:
        by_condition = report_mod.build_report(args.dataset)
    except FileNotFoundError as exc:
        print(f"I/O error: {exc}")
        return 2
    except report_mod.SchemaError as exc:
        print(f"FAIL: {exc}")
        return 1
    text = report_mod.render_text(by_condition)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.json_out:
        Path(args.json_out).write_text(report_mod.render_json(by_condition), encoding="utf-8")
    return 0


def _cmd_dtw_oracle(args) -> int:
    rng = random.Random(args.seed)

    def random_walk(max_len: int) -> list[tuple[int, int]]:
        x, y = rng.randrange(6), rng.randrange(6)
        path = [(x, y)]
        for _ in range(rng.randrange(max_len - 1)):
            dx, dy = rng.choice([(0, 1), (0, -1), (1, 0), (-1, 0)])
            x, y = min(5, max(0, x + dx)), min(5, max(0, y + dy))
            path.append((x, y))
        return path

    mismatches = 0
    for _ in range(args.samples):
        a, b = random_walk(args.max_len), random_walk(args.max_len)
        got = dtw_route_distance(a, b).raw
        expected = dtw_brute_force(a, b)
        if got != expected:
            mismatches += 1
            print(f"MISMATCH: dtw={got} oracle={expected} a={a} b={b}")
    if mismatches:
        print(f"FAIL: {mismatches}/{args.samples} mismatches")
        return 1
    print(f"ok: {args.samples} random path pairs agree with exhaustive enumeration")
    return 0


def _cmd_export(args) -> int:
    resources = load_default()
    store = SessionStore(args.data_dir)
    try:
        summary = export_dataset(
            store,
            resources.maps,
            resources.lid,
            resources.lexicon,
            resources.adjectives,
            args.out,
            include_unfinalized=args.include_unfinalized,
        )
    except OSError as exc:
        print(f"I/O error: {exc}")
        return 2
    print(
        f"exported {summary['sessions']} sessions ({summary['utterances']} utterances), "
        f"skipped {summary['skipped']} -> {args.out}"
    )
    return 0


def _cmd_serve(args) -> int:
    from .server import serve

    serve(
        port=args.port,
        data_dir=args.data_dir,
        conditions=[c.strip() for c in args.conditions.split(",") if c.strip()],
        seed=args.seed,
        backend=args.backend,
        translator=args.translator,
        host=args.host,
        static_dir=args.static_dir,
    )
    return 0


def _cmd_dump_determiners(args) -> int:
    print(json.dumps(determiner_table(), indent=2, ensure_ascii=False, sort_keys=True))
    return 0


ALL_CONDITIONS = (
    "alt_baseline,alt_alignment,alt_adversarial,alt_random,alt_short_context,"
    "ins_baseline,ins_congruent,ins_fem_incongruent,ins_masc_incongruent"
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mapmix", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate bundled dictionaries, wordlists, and maps")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("simulate", help="run scripted bot-vs-bot sessions and export a dataset")
    p.add_argument("--conditions", default=ALL_CONDITIONS, help="comma list, e.g. alt_short_context:k=3")
    p.add_argument("--sessions", type=int, default=10, help="sessions per condition")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--data-dir", default="data/sim")
    p.add_argument("--out", default="data/sim/dataset.jsonl")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("report", help="per-condition descriptive report from a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", help="write the text table here instead of stdout")
    p.add_argument("--json-out", dest="json_out", help="also write the JSON report here")
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("dtw-oracle", help="compare the DTW scorer with exhaustive enumeration")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--max-len", dest="max_len", type=int, default=7)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(fn=_cmd_dtw_oracle)

    p = sub.add_parser("export", help="export the dataset from a data directory")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--include-unfinalized", action="store_true")
    p.set_defaults(fn=_cmd_export)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default="data/live")
    p.add_argument("--conditions", default=ALL_CONDITIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("scripted", "external"), default="scripted")
    p.add_argument("--translator", choices=("phrase-table", "external"), default="phrase-table")
    p.add_argument("--static-dir", dest="static_dir", default=None,
                   help="serve the built web client from this directory at /app")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("dump-determiners", help="print the compiled determiner tables")
    p.set_defaults(fn=_cmd_dump_determiners)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except OSError as exc:
        print(f"I/O error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
