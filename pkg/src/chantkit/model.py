"""Core data model: chant and source records, the corpus aggregate with its
anti-mutation lock, the append-only operations-history ledger, and canonical
CSV export."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, fields as dataclass_fields, replace
from datetime import datetime, timezone

from chantkit import volpiano
from chantkit.errors import CorpusLocked, DuplicateIdentifier, ValidationFailed

# Canonical column orders of chants.csv / sources.csv.
CHANT_COLUMNS = [
    "chantlink", "incipit", "cantus_id", "mode", "siglum", "position",
    "folio", "sequence", "feast", "feast_code", "genre", "office",
    "srclink", "melody_id", "full_text", "melody", "db", "image",
]
CHANT_REQUIRED = ["chantlink", "incipit", "cantus_id", "siglum", "folio", "srclink", "db"]

SOURCE_COLUMNS = ["title", "siglum", "century", "provenance", "srclink", "cursus", "num_century"]
SOURCE_REQUIRED = ["siglum", "srclink"]

KNOWN_DBS = ("CD", "MMMO", "CSK", "FCB", "CPL", "PEM", "SEMM", "HCD", "A4M", "HYM")

CURSUS_VALUES = ("Secular", "Monastic")


def _norm_opt(value: str | None) -> str | None:
    """Empty string and absent are the same thing for optional fields."""
    if value is None:
        return None
    value = value.strip()
    return value or None


class _Lockable:
    """Attribute-setter guard shared by record types and the corpus."""

    def __setattr__(self, name, value):
        if not name.startswith("_") and getattr(self, "_locked", False):
            raise CorpusLocked(f"cannot set {name!r}: corpus is locked")
        object.__setattr__(self, name, value)


@dataclass(eq=True)
class Chant(_Lockable):
    """One catalogue record of a repertoire unit, identified by chantlink."""

    chantlink: str
    incipit: str
    cantus_id: str
    siglum: str
    folio: str
    srclink: str
    db: str
    mode: str | None = None
    position: str | None = None
    sequence: str | None = None
    feast: str | None = None
    feast_code: str | None = None
    genre: str | None = None
    office: str | None = None
    melody_id: str | None = None
    full_text: str | None = None
    melody: str | None = None
    image: str | None = None
    _locked: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        for f in dataclass_fields(self):
            if f.name.startswith("_") or f.name in CHANT_REQUIRED:
                continue
            object.__setattr__(self, f.name, _norm_opt(getattr(self, f.name)))

    def as_row(self) -> list[str]:
        return [getattr(self, col) or "" for col in CHANT_COLUMNS]


@dataclass(eq=True)
class Source(_Lockable):
    """One manuscript/print record, identified by srclink."""

    siglum: str
    srclink: str
    title: str | None = None
    century: str | None = None
    provenance: str | None = None
    cursus: str | None = None
    num_century: int | None = None
    _locked: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        for name in ("title", "century", "provenance", "cursus"):
            object.__setattr__(self, name, _norm_opt(getattr(self, name)))

    def as_row(self) -> list[str]:
        row = []
        for col in SOURCE_COLUMNS:
            value = getattr(self, col)
            row.append("" if value is None else str(value))
        return row


@dataclass
class Melody(_Lockable):
    """Volpiano melody with derived cleaned form and note count."""

    raw: str
    _locked: bool = field(default=False, compare=False, repr=False)

    @property
    def cleaned(self) -> str:
        return volpiano.clean_melody(self.raw)

    @property
    def note_count(self) -> int:
        return volpiano.count_notes(self.raw)


@dataclass(frozen=True)
class HistoryEntry:
    """One entry of the append-only operations ledger."""

    op_name: str
    params_digest: str
    chants_before: int
    chants_after: int
    sources_before: int
    sources_after: int
    timestamp: datetime

    def as_line(self) -> str:
        return (
            f"{self.timestamp.isoformat()}  {self.op_name}"
            f"  params={self.params_digest or '-'}"
            f"  chants {self.chants_before}->{self.chants_after}"
            f"  sources {self.sources_before}->{self.sources_after}"
        )


def validate_chant(chant: Chant, known_dbs=KNOWN_DBS) -> list[str]:
    """Record-level errors: required fields present, db code known."""
    errors = []
    for name in CHANT_REQUIRED:
        if not (getattr(chant, name) or "").strip():
            errors.append(f"chant {chant.chantlink!r}: required field {name!r} is empty")
    if chant.db and chant.db not in known_dbs:
        errors.append(f"chant {chant.chantlink!r}: unknown db code {chant.db!r}")
    return errors


def validate_source(source: Source) -> list[str]:
    errors = []
    for name in SOURCE_REQUIRED:
        if not (getattr(source, name) or "").strip():
            errors.append(f"source {source.srclink!r}: required field {name!r} is empty")
    if source.num_century is not None and not 1 <= source.num_century <= 21:
        errors.append(f"source {source.srclink!r}: num_century {source.num_century} outside [1, 21]")
    return errors


class Corpus(_Lockable):
    """Aggregate of chants and sources with lock and history ledger.

    Equality compares the chant and source records field-wise; history
    timestamps and lock state do not participate.
    """

    def __init__(self, chants, sources, locked=False, history=None, warnings=None):
        self.chants: list[Chant] = list(chants)
        self.sources: list[Source] = list(sources)
        self.history: list[HistoryEntry] = list(history or [])
        self.warnings: list[str] = list(warnings or [])
        self.locked = False
        if locked:
            self.lock()

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.chants == other.chants and self.sources == other.sources

    def lock(self) -> "Corpus":
        """Freeze the corpus; idempotent. Read operations stay available."""
        for record in self.chants:
            object.__setattr__(record, "_locked", True)
        for record in self.sources:
            object.__setattr__(record, "_locked", True)
        object.__setattr__(self, "locked", True)
        object.__setattr__(self, "_locked", True)
        return self

    def append_history(self, entry: HistoryEntry) -> None:
        # The ledger itself may grow on a locked corpus only through
        # operations that return new corpora; direct appends respect the lock.
        if self.locked:
            raise CorpusLocked("cannot append history to a locked corpus")
        self.history.append(entry)

    def export_csv(self) -> tuple[bytes, bytes]:
        """Chants and sources as Excel-flavour CSV (LF line endings, UTF-8)."""
        return (
            _write_csv(CHANT_COLUMNS, (c.as_row() for c in self.chants)),
            _write_csv(SOURCE_COLUMNS, (s.as_row() for s in self.sources)),
        )

    def export_history(self) -> str:
        return "\n".join(entry.as_line() for entry in self.history) + "\n"


def _write_csv(header: list[str], rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def history_entry(op_name: str, params_digest: str,
                  chants_before: int, chants_after: int,
                  sources_before: int, sources_after: int) -> HistoryEntry:
    return HistoryEntry(
        op_name=op_name,
        params_digest=params_digest,
        chants_before=chants_before,
        chants_after=chants_after,
        sources_before=sources_before,
        sources_after=sources_after,
        timestamp=datetime.now(timezone.utc),
    )


def unlocked_copy(record):
    """Fresh mutable copy of a chant or source record."""
    return replace(record, _locked=False)


def new_corpus(chants, sources, locked=False, strict=True, known_dbs=KNOWN_DBS) -> Corpus:
    """Build a corpus, rejecting duplicate identifiers and invalid records.

    Strict mode additionally enforces that every chant's srclink resolves to
    a source; lenient mode records such violations as warnings so that
    pre-cleaning snapshots remain loadable. known_dbs is the corpus
    manifest of accepted db codes; extend it when integrating external data.
    """
    chants = list(chants)
    sources = list(sources)

    errors: list[str] = []
    for chant in chants:
        errors.extend(validate_chant(chant, known_dbs))
    for source in sources:
        errors.extend(validate_source(source))
    if errors:
        raise ValidationFailed(errors)

    seen = set()
    for chant in chants:
        if chant.chantlink in seen:
            raise DuplicateIdentifier("chantlink", chant.chantlink)
        seen.add(chant.chantlink)
    seen = set()
    for source in sources:
        if source.srclink in seen:
            raise DuplicateIdentifier("srclink", source.srclink)
        seen.add(source.srclink)

    known_srclinks = {source.srclink for source in sources}
    dangling = [c.chantlink for c in chants if c.srclink not in known_srclinks]
    warnings = []
    if dangling:
        messages = [f"chant {link!r}: srclink not found among sources" for link in dangling]
        if strict:
            raise ValidationFailed(messages)
        warnings = messages

    corpus = Corpus(chants, sources, warnings=warnings)
    corpus.append_history(history_entry(
        "create", "", 0, len(chants), 0, len(sources)))
    if locked:
        corpus.lock()
    return corpus
