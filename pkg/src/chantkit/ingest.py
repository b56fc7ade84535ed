"""Parsing and validation of chants.csv / sources.csv snapshots with
per-record diagnostics. Error issues drop the offending row; warnings do not."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

from chantkit.errors import MalformedCsv, MissingColumn
from chantkit.model import (
    CHANT_COLUMNS,
    CHANT_REQUIRED,
    CURSUS_VALUES,
    KNOWN_DBS,
    SOURCE_COLUMNS,
    SOURCE_REQUIRED,
    Chant,
    Source,
)

# Guard against corrupt rows (e.g. runaway quoting swallowing the file).
MAX_FIELD_LENGTH = 65_536


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class IngestIssue:
    row_number: int  # 1-based; row 1 is the header
    field: str
    severity: Severity
    message: str


def _read_rows(data: bytes, known_columns: list[str], required_columns: list[str]):
    """Decode and read the CSV, yielding (row_number, dict) per data row.

    Returns (header_issues, rows). Raises MalformedCsv / MissingColumn.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"input is not valid UTF-8: {exc}") from exc

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        all_rows = list(reader)
    except csv.Error as exc:
        raise MalformedCsv(str(exc)) from exc
    if not all_rows:
        raise MalformedCsv("missing header row")

    header = [name.strip() for name in all_rows[0]]
    for name in required_columns:
        if name not in header:
            raise MissingColumn(name)

    issues = [
        IngestIssue(1, name, Severity.WARNING, f"unknown column {name!r} ignored")
        for name in header
        if name and name not in known_columns
    ]

    rows = []
    for row_number, raw in enumerate(all_rows[1:], start=2):
        if not any(cell.strip() for cell in raw):
            continue
        record = {}
        for name, cell in zip(header, raw):
            if name in known_columns:
                record[name] = cell.strip()
        rows.append((row_number, record))
    return issues, rows


def parse_chants_csv(data: bytes, max_field_length: int = MAX_FIELD_LENGTH):
    """Parse a chants.csv snapshot into (chants, issues)."""
    issues, rows = _read_rows(data, CHANT_COLUMNS, CHANT_REQUIRED)
    chants: list[Chant] = []
    for row_number, record in rows:
        ok = True
        for name in CHANT_REQUIRED:
            if not record.get(name, ""):
                issues.append(IngestIssue(
                    row_number, name, Severity.ERROR,
                    f"required field {name!r} is empty"))
                ok = False
        for name, value in record.items():
            if len(value) > max_field_length:
                issues.append(IngestIssue(
                    row_number, name, Severity.ERROR,
                    f"field {name!r} exceeds {max_field_length} characters"))
                ok = False
        if not ok:
            continue
        if record["db"] not in KNOWN_DBS:
            issues.append(IngestIssue(
                row_number, "db", Severity.WARNING,
                f"unknown db code {record['db']!r}"))
        chants.append(Chant(
            chantlink=record["chantlink"],
            incipit=record["incipit"],
            cantus_id=record["cantus_id"],
            siglum=record["siglum"],
            folio=record["folio"],
            srclink=record["srclink"],
            db=record["db"],
            mode=record.get("mode"),
            position=record.get("position"),
            sequence=record.get("sequence"),
            feast=record.get("feast"),
            feast_code=record.get("feast_code"),
            genre=record.get("genre"),
            office=record.get("office"),
            melody_id=record.get("melody_id"),
            full_text=record.get("full_text"),
            melody=record.get("melody"),
            image=record.get("image"),
        ))
    return chants, issues


def parse_sources_csv(data: bytes, max_field_length: int = MAX_FIELD_LENGTH):
    """Parse a sources.csv snapshot into (sources, issues)."""
    issues, rows = _read_rows(data, SOURCE_COLUMNS, SOURCE_REQUIRED)
    sources: list[Source] = []
    for row_number, record in rows:
        ok = True
        for name in SOURCE_REQUIRED:
            if not record.get(name, ""):
                issues.append(IngestIssue(
                    row_number, name, Severity.ERROR,
                    f"required field {name!r} is empty"))
                ok = False
        for name, value in record.items():
            if len(value) > max_field_length:
                issues.append(IngestIssue(
                    row_number, name, Severity.ERROR,
                    f"field {name!r} exceeds {max_field_length} characters"))
                ok = False
        if not ok:
            continue

        cursus = record.get("cursus") or None
        if cursus is not None and cursus not in CURSUS_VALUES:
            folded = cursus.capitalize()
            if folded in CURSUS_VALUES:
                issues.append(IngestIssue(
                    row_number, "cursus", Severity.WARNING,
                    f"cursus {cursus!r} normalized to {folded!r}"))
                cursus = folded
            else:
                issues.append(IngestIssue(
                    row_number, "cursus", Severity.WARNING,
                    f"unexpected cursus value {cursus!r} kept verbatim"))

        num_century: int | None = None
        raw_century = record.get("num_century", "")
        if raw_century:
            try:
                num_century = int(raw_century)
            except ValueError:
                issues.append(IngestIssue(
                    row_number, "num_century", Severity.WARNING,
                    f"non-integer num_century {raw_century!r} dropped"))

        sources.append(Source(
            siglum=record["siglum"],
            srclink=record["srclink"],
            title=record.get("title"),
            century=record.get("century"),
            provenance=record.get("provenance"),
            cursus=cursus,
            num_century=num_century,
        ))
    return sources, issues


def issues_to_csv(issues: list[IngestIssue]) -> bytes:
    """Diagnostics as a CSV report (row_number, field, severity, message)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row_number", "field", "severity", "message"])
    for issue in issues:
        writer.writerow([issue.row_number, issue.field, issue.severity.value, issue.message])
    return buf.getvalue().encode("utf-8")
