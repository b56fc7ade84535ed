"""Command-line entry point.

Exit codes: 0 success, 1 domain errors (validation failures), 2 I/O or
format errors. Every subcommand that writes outputs also writes the
operations-history text next to them.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from chantkit import cleanse, filtering, ingest, linkage, model, stats
from chantkit.errors import (
    BadRange,
    ChantkitError,
    FilterSyntaxError,
    MalformedCsv,
    MissingColumn,
    UnknownField,
    ValidationFailed,
)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise MalformedCsv(f"cannot read {path}: {exc}") from exc


def _load(chants_path: str, sources_path: str):
    chants, chant_issues = ingest.parse_chants_csv(_read(chants_path))
    sources, source_issues = ingest.parse_sources_csv(_read(sources_path))
    return chants, sources, chant_issues + source_issues


def _print_issues(issues):
    errors = [i for i in issues if i.severity is ingest.Severity.ERROR]
    warnings = [i for i in issues if i.severity is ingest.Severity.WARNING]
    for issue in issues:
        print(f"row {issue.row_number} [{issue.severity.value}] {issue.field}: {issue.message}")
    print(f"{len(errors)} error(s), {len(warnings)} warning(s)")
    return errors


def cmd_validate(args) -> int:
    chants, sources, issues = _load(args.chants, args.sources)
    errors = _print_issues(issues)
    if args.strict:
        try:
            model.new_corpus(chants, sources, strict=True)
        except ValidationFailed as exc:
            for message in exc.errors:
                print(f"[Error] {message}")
            return 1
        except ChantkitError as exc:
            print(f"[Error] {exc}")
            return 1
    return 1 if errors else 0


def _load_overrides(path: str):
    rows = list(csv.reader(io.StringIO(_read(path).decode("utf-8"))))
    return [tuple(row[:4]) for row in rows[1:] if len(row) >= 4]


def _load_genre_map(path: str) -> dict[str, str]:
    rows = list(csv.reader(io.StringIO(_read(path).decode("utf-8"))))
    return {row[0]: row[1] for row in rows[1:] if len(row) >= 2}


def cmd_clean(args) -> int:
    chants, sources, issues = _load(args.chants, args.sources)
    genre_map = _load_genre_map(args.genre_map) if args.genre_map else None
    overrides = _load_overrides(args.overrides) if args.overrides else None

    chants, sources, reports = cleanse.clean(
        chants, sources, genre_of_origin=genre_map, overrides=overrides,
        span_policy=args.span_policy)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus = model.new_corpus(chants, sources, strict=True)
    chants_csv, sources_csv = corpus.export_csv()
    (out / "chants.csv").write_bytes(chants_csv)
    (out / "sources.csv").write_bytes(sources_csv)
    (out / "issues.csv").write_bytes(ingest.issues_to_csv(issues))
    (out / "review.csv").write_bytes(cleanse.review_candidates_csv(reports))
    (out / "history.txt").write_text(corpus.export_history(), encoding="utf-8")
    report_buf = b"".join(report.to_csv() for report in reports)
    (out / "cleaning_report.csv").write_bytes(report_buf)
    for report in reports:
        print(f"{report.pass_name}: {report.records_in} -> {report.records_out} "
              f"({report.n_drops} dropped, {len(report.review_candidates)} for review)")
    return 0


def cmd_stats(args) -> int:
    chants, sources, _ = _load(args.chants, args.sources)
    corpus = model.new_corpus(chants, sources, strict=False)
    report = stats.corpus_stats(corpus)
    per_db = stats.per_db_stats(corpus)
    print(stats.stats_text(report, per_db), end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "stats.csv").write_bytes(stats.stats_csv(report, per_db))
        (out / "history.txt").write_text(corpus.export_history(), encoding="utf-8")
    return 0


def cmd_filter(args) -> int:
    chants, sources, _ = _load(args.chants, args.sources)
    corpus = model.new_corpus(chants, sources, strict=False)
    config = filtering.parse_filter(_read(args.config).decode("utf-8"))
    filtered = filtering.apply_filter(corpus, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    chants_csv, sources_csv = filtered.export_csv()
    (out / "chants.csv").write_bytes(chants_csv)
    (out / "sources.csv").write_bytes(sources_csv)
    (out / "filter.yaml").write_text(filtering.export_filter(config), encoding="utf-8")
    (out / "history.txt").write_text(filtered.export_history(), encoding="utf-8")
    print(f"{len(filtered.chants)} chants, {len(filtered.sources)} sources "
          f"(digest {filtering.config_digest(config)[:12]})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from chantkit.service import create_app

    chants, sources, _ = _load(args.chants, args.sources)
    corpus = model.new_corpus(chants, sources, strict=False, locked=True)
    app = create_app(corpus, allow_cross_origin=args.allow_cross_origin)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _load_records(path: str) -> list[linkage.ExternalRecord]:
    reader = csv.DictReader(io.StringIO(_read(path).decode("utf-8")))
    records = []
    for row in reader:
        records.append(linkage.ExternalRecord(
            record_id=row["record_id"].strip(),
            text_content=row["text_content"].strip(),
            genre=row["genre"].strip(),
            external_siglum=row["external_siglum"].strip(),
            feast=row.get("feast", "").strip() or None,
            melody=row.get("melody", "").strip() or None,
            folio=row.get("folio", "").strip() or None,
        ))
    return records


def _load_candidates(path: str) -> list[linkage.Candidate]:
    reader = csv.DictReader(io.StringIO(_read(path).decode("utf-8")))
    return [
        linkage.Candidate(
            cantus_id=row["cantus_id"].strip(),
            text=row["text"].strip(),
            genre=row["genre"].strip(),
            feast=row.get("feast", "").strip() or None,
        )
        for row in reader
    ]


def _load_concordance(path: str) -> dict[str, str]:
    rows = list(csv.reader(io.StringIO(_read(path).decode("utf-8"))))
    return {row[0]: row[1] for row in rows[1:] if len(row) >= 2}


def cmd_link(args) -> int:
    records = _load_records(args.records)
    candidates = _load_candidates(args.candidates)
    concordance = _load_concordance(args.concordance)
    decisions = linkage.match_batch(records, candidates, threshold=args.threshold)
    chants_csv, sources_csv, audit_csv = linkage.export_to_schema(
        records, decisions, concordance,
        base_url=args.base_url, db_code=args.db_code)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "chants.csv").write_bytes(chants_csv)
    (out / "sources.csv").write_bytes(sources_csv)
    (out / "audit.csv").write_bytes(audit_csv)
    matched = sum(1 for d in decisions if d.outcome == "matched")
    print(f"{matched}/{len(records)} records matched")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chantkit",
        description="Gregorian chant catalogue corpus toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, out_required=True):
        p.add_argument("--chants", required=True)
        p.add_argument("--sources", required=True)
        if out_required:
            p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="validate snapshot CSVs")
    add_io(p, out_required=False)
    p.add_argument("--strict", action="store_true",
                   help="also enforce chant-to-source referential integrity")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("clean", help="run the full cleaning pipeline")
    add_io(p)
    p.add_argument("--genre-map", help="CSV of chantlink,genre_code")
    p.add_argument("--overrides", help="CSV of db,chantlink,field,new_value")
    p.add_argument("--span-policy", choices=["first", "latest", "midpoint"],
                   default="first", help="how to read century spans like 12th/13th")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("stats", help="print corpus statistics")
    p.add_argument("--chants", required=True)
    p.add_argument("--sources", required=True)
    p.add_argument("--out", help="directory for CSV report")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("filter", help="apply a filter config file")
    add_io(p)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--chants", required=True)
    p.add_argument("--sources", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--allow-cross-origin", action="store_true")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("link", help="fuzzy-link external records to Cantus IDs")
    p.add_argument("--records", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--concordance", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=int, default=linkage.DEFAULT_THRESHOLD)
    p.add_argument("--base-url", default="https://example.org/external")
    p.add_argument("--db-code", default="CM")
    p.set_defaults(func=cmd_link)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedCsv, MissingColumn) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationFailed, FilterSyntaxError, UnknownField, BadRange, ChantkitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
