"""Descriptive corpus statistics: whole-corpus counts and the per-database
distribution table."""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass

from chantkit import volpiano
from chantkit.model import Corpus

# "100+ chants" means strictly more than 100 associated chant records.
MANY_CHANTS_THRESHOLD = 100
MELODY_NOTE_THRESHOLD = 20


@dataclass(frozen=True)
class StatsReport:
    total_chants: int
    chants_with_melody: int
    chants_with_melody_20plus: int
    total_sources: int
    sources_100plus_chants: int
    sources_with_provenance: int
    sources_with_century: int
    sources_with_cursus: int

    def as_dict(self) -> dict[str, int]:
        return {
            "total_chants": self.total_chants,
            "chants_with_melody": self.chants_with_melody,
            "chants_with_melody_20plus": self.chants_with_melody_20plus,
            "total_sources": self.total_sources,
            "sources_100plus_chants": self.sources_100plus_chants,
            "sources_with_provenance": self.sources_with_provenance,
            "sources_with_century": self.sources_with_century,
            "sources_with_cursus": self.sources_with_cursus,
        }


@dataclass(frozen=True)
class PerDbRow:
    db: str
    n_chants: int
    n_cantus_ids: int
    n_unique_cantus_ids: int
    n_sources: int
    n_sources_100plus: int


def corpus_stats(corpus: Corpus) -> StatsReport:
    """Whole-corpus counts; melody presence is judged on the raw field."""
    chants_per_source = Counter(c.srclink for c in corpus.chants)
    with_melody = [c for c in corpus.chants if c.melody]
    return StatsReport(
        total_chants=len(corpus.chants),
        chants_with_melody=len(with_melody),
        chants_with_melody_20plus=sum(
            1 for c in with_melody
            if volpiano.count_notes(c.melody) >= MELODY_NOTE_THRESHOLD),
        total_sources=len(corpus.sources),
        sources_100plus_chants=sum(
            1 for s in corpus.sources
            if chants_per_source[s.srclink] > MANY_CHANTS_THRESHOLD),
        sources_with_provenance=sum(1 for s in corpus.sources if s.provenance),
        sources_with_century=sum(1 for s in corpus.sources if s.century),
        sources_with_cursus=sum(1 for s in corpus.sources if s.cursus),
    )


def per_db_stats(corpus: Corpus) -> list[PerDbRow]:
    """Distribution of data among the source databases, largest first.

    A source is attributed to the database(s) of the chants referencing it;
    a source referenced from two databases counts once in each.
    """
    cantus_ids: dict[str, set[str]] = defaultdict(set)
    n_chants: Counter = Counter()
    per_db_source_chants: dict[str, Counter] = defaultdict(Counter)
    for chant in corpus.chants:
        n_chants[chant.db] += 1
        cantus_ids[chant.db].add(chant.cantus_id)
        per_db_source_chants[chant.db][chant.srclink] += 1

    rows = []
    for db in n_chants:
        others = set().union(*(ids for code, ids in cantus_ids.items() if code != db)) \
            if len(cantus_ids) > 1 else set()
        source_counter = per_db_source_chants[db]
        rows.append(PerDbRow(
            db=db,
            n_chants=n_chants[db],
            n_cantus_ids=len(cantus_ids[db]),
            n_unique_cantus_ids=len(cantus_ids[db] - others),
            n_sources=len(source_counter),
            n_sources_100plus=sum(
                1 for count in source_counter.values() if count > MANY_CHANTS_THRESHOLD),
        ))
    rows.sort(key=lambda row: (-row.n_chants, row.db))
    return rows


def stats_text(report: StatsReport, per_db: list[PerDbRow]) -> str:
    lines = ["Corpus statistics", "-----------------"]
    for name, value in report.as_dict().items():
        lines.append(f"{name}: {value}")
    lines.append("")
    lines.append("Per-database distribution")
    lines.append("-------------------------")
    lines.append("db  n_chants  n_cantus_ids  n_unique_cantus_ids  n_sources  n_sources_100plus")
    for row in per_db:
        lines.append(
            f"{row.db}  {row.n_chants}  {row.n_cantus_ids}  "
            f"{row.n_unique_cantus_ids}  {row.n_sources}  {row.n_sources_100plus}")
    return "\n".join(lines) + "\n"


def stats_csv(report: StatsReport, per_db: list[PerDbRow]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "value"])
    for name, value in report.as_dict().items():
        writer.writerow([name, value])
    writer.writerow([])
    writer.writerow(["db", "n_chants", "n_cantus_ids", "n_unique_cantus_ids",
                     "n_sources", "n_sources_100plus"])
    for row in per_db:
        writer.writerow([row.db, row.n_chants, row.n_cantus_ids,
                         row.n_unique_cantus_ids, row.n_sources, row.n_sources_100plus])
    return buf.getvalue().encode("utf-8")
