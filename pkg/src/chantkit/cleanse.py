"""Deterministic snapshot-cleaning passes plus a review report for the cases
that need human judgment. Every pass is a pure records-in / records-out
transform, idempotent, and never invents records.

Fixed pipeline order: normalize_url_scheme, dedup_sources_by_siglum,
drop_chants_without_visible_source, standardize_genre (plus per-database
field overrides), dedup_chants_by_chantlink, derive num_century.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field, replace

from chantkit.model import SOURCE_COLUMNS, Chant, Source


@dataclass
class CleaningReport:
    pass_name: str
    records_in: int = 0
    records_out: int = 0
    actions: list[tuple[str, str]] = field(default_factory=list)
    review_candidates: list[tuple[tuple[str, str], str]] = field(default_factory=list)

    @property
    def n_drops(self) -> int:
        return sum(1 for _, action in self.actions if action.startswith("drop"))

    def to_csv(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pass_name", "record_id", "action"])
        for record_id, action in self.actions:
            writer.writerow([self.pass_name, record_id, action])
        return buf.getvalue().encode("utf-8")


def review_candidates_csv(reports: list[CleaningReport]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pass_name", "record_id_a", "record_id_b", "reason"])
    for report in reports:
        for (a, b), reason in report.review_candidates:
            writer.writerow([report.pass_name, a, b, reason])
    return buf.getvalue().encode("utf-8")


# --- chant passes ---------------------------------------------------------

def standardize_genre(chants: list[Chant], genre_of_origin: dict[str, str]):
    """Overwrite genre with the code of the genre list each chant came from."""
    report = CleaningReport("standardize_genre", records_in=len(chants))
    out = []
    for chant in chants:
        code = genre_of_origin.get(chant.chantlink)
        if code is not None and code != chant.genre:
            chant = replace(chant, genre=code, _locked=False)
            report.actions.append((chant.chantlink, f"set genre={code}"))
        out.append(chant)
    report.records_out = len(out)
    return out, report


def dedup_chants_by_chantlink(chants: list[Chant]):
    """Keep the first occurrence of each chantlink, preserving order."""
    report = CleaningReport("dedup_chants_by_chantlink", records_in=len(chants))
    seen: set[str] = set()
    out = []
    for chant in chants:
        if chant.chantlink in seen:
            report.actions.append((chant.chantlink, "drop duplicate chantlink"))
            continue
        seen.add(chant.chantlink)
        out.append(chant)
    report.records_out = len(out)
    return out, report


def drop_chants_without_visible_source(chants: list[Chant], sources: list[Source]):
    """Drop chants whose srclink matches no source record."""
    report = CleaningReport("drop_chants_without_visible_source", records_in=len(chants))
    known = {source.srclink for source in sources}
    out = []
    for chant in chants:
        if chant.srclink not in known:
            report.actions.append((chant.chantlink, f"drop: source {chant.srclink} not visible"))
            continue
        out.append(chant)
    report.records_out = len(out)
    return out, report


def apply_field_overrides(chants: list[Chant],
                          overrides: list[tuple[str, str, str, str]]):
    """Per-database field rewrites, e.g. office corrections for one db.

    Each override is (db, chantlink, field, new value); the override tables
    themselves are data shipped outside the code.
    """
    report = CleaningReport("apply_field_overrides", records_in=len(chants))
    by_key = {(db, link): (fld, value) for db, link, fld, value in overrides}
    out = []
    for chant in chants:
        hit = by_key.get((chant.db, chant.chantlink))
        if hit is not None:
            fld, value = hit
            if getattr(chant, fld) != value:
                chant = replace(chant, **{fld: value, "_locked": False})
                report.actions.append((chant.chantlink, f"set {fld}={value}"))
        out.append(chant)
    report.records_out = len(out)
    return out, report


# --- source passes --------------------------------------------------------

_SCHEME = re.compile(r"^https?://")


def _canonical_url(url: str, scheme: str) -> str:
    return _SCHEME.sub(scheme + "://", url)


def normalize_url_scheme(sources: list[Source], chants: list[Chant],
                         canonical_scheme: str = "https"):
    """Rewrite source and chant URLs to one scheme; merge sources that become
    identical, re-pointing chants so referential integrity is preserved."""
    report = CleaningReport("normalize_url_scheme",
                            records_in=len(sources) + len(chants))
    out_sources: list[Source] = []
    seen: dict[str, Source] = {}
    for source in sources:
        canon = _canonical_url(source.srclink, canonical_scheme)
        if canon != source.srclink:
            report.actions.append((source.srclink, f"set srclink={canon}"))
            source = replace(source, srclink=canon, _locked=False)
        if source.srclink in seen:
            report.actions.append((source.srclink, "drop: merged with scheme twin"))
            continue
        seen[source.srclink] = source
        out_sources.append(source)

    out_chants: list[Chant] = []
    for chant in chants:
        new_src = _canonical_url(chant.srclink, canonical_scheme)
        new_link = _canonical_url(chant.chantlink, canonical_scheme)
        if new_src != chant.srclink or new_link != chant.chantlink:
            report.actions.append((chant.chantlink, "set canonical url scheme"))
            chant = replace(chant, srclink=new_src, chantlink=new_link, _locked=False)
        out_chants.append(chant)

    report.records_out = len(out_sources) + len(out_chants)
    return out_sources, out_chants, report


def _source_metadata(source: Source) -> tuple:
    return tuple(getattr(source, col) for col in SOURCE_COLUMNS if col != "srclink")


def dedup_sources_by_siglum(sources: list[Source], chants: list[Chant]):
    """Auto-merge same-siglum sources only when all other metadata is
    identical; same-siglum sources that differ go to the review report."""
    report = CleaningReport("dedup_sources_by_siglum", records_in=len(sources))

    surviving: dict[str, str] = {}  # dropped srclink -> surviving srclink
    kept: list[Source] = []
    by_metadata: dict[tuple, Source] = {}
    by_siglum: dict[str, list[Source]] = {}
    for source in sources:
        key = (source.siglum, _source_metadata(source))
        twin = by_metadata.get(key)
        if twin is not None:
            surviving[source.srclink] = twin.srclink
            report.actions.append(
                (source.srclink, f"drop: merged into {twin.srclink} (same siglum and metadata)"))
            continue
        by_metadata[key] = source
        for other in by_siglum.get(source.siglum, []):
            report.review_candidates.append(
                ((other.srclink, source.srclink),
                 f"same siglum {source.siglum!r} with differing metadata"))
        by_siglum.setdefault(source.siglum, []).append(source)
        kept.append(source)
    report.records_out = len(kept)

    out_chants: list[Chant] = []
    seen_links: set[str] = set()
    for chant in chants:
        target = surviving.get(chant.srclink)
        if target is not None:
            chant = replace(chant, srclink=target, _locked=False)
        # Merged manuscript parts may catalogue the same chant twice.
        if target is not None and chant.chantlink in seen_links:
            report.actions.append((chant.chantlink, "drop duplicate after source merge"))
            continue
        seen_links.add(chant.chantlink)
        out_chants.append(chant)
    return kept, out_chants, report


# --- century parsing ------------------------------------------------------

_QUALIFIERS = re.compile(
    r"\b(early|late|mid|possibly|around|before|after)\b|\b(circa|ca|c)\b\.?|\?",
    re.IGNORECASE,
)
_ORDINAL = re.compile(r"\b(\d{1,2})(?:st|nd|rd|th)\b")
_YEAR_RANGE = re.compile(r"\b(\d{3,4})\s*[-–/]\s*(\d{1,4})\b")
_YEAR = re.compile(r"\b(\d{3,4})\b")


def century_of_year(year: float) -> int:
    return int((year - 1) // 100) + 1


def derive_num_century(century_text: str, span_policy: str = "first") -> int | None:
    """Parse free-text century descriptions into an integer century.

    Grammar: qualifier words are stripped; an ordinal with the word
    "century" wins (span_policy picks among several ordinals: first,
    latest, or midpoint); otherwise a 3-4 digit year or year range maps
    to the century of its midpoint ("1225-50" expands to 1225-1250).
    """
    if not century_text:
        return None
    text = _QUALIFIERS.sub(" ", century_text.lower())

    if "century" in text:
        ordinals = [int(m.group(1)) for m in _ORDINAL.finditer(text)]
        if ordinals:
            if span_policy == "latest":
                value = max(ordinals)
            elif span_policy == "midpoint":
                value = round((min(ordinals) + max(ordinals)) / 2)
            else:
                value = ordinals[0]
            return value if 1 <= value <= 21 else None

    m = _YEAR_RANGE.search(text)
    if m:
        lo, hi_text = m.group(1), m.group(2)
        # Short second halves inherit the prefix of the first: 1225-50 -> 1250.
        if len(hi_text) < len(lo):
            hi_text = lo[: len(lo) - len(hi_text)] + hi_text
        hi = int(hi_text)
        midpoint = (int(lo) + hi) / 2
        value = century_of_year(midpoint)
        return value if 1 <= value <= 21 else None

    m = _YEAR.search(text)
    if m:
        value = century_of_year(int(m.group(1)))
        return value if 1 <= value <= 21 else None
    return None


def derive_num_century_pass(sources: list[Source], span_policy: str = "first"):
    """Recompute num_century from the century text for every source."""
    report = CleaningReport("derive_num_century", records_in=len(sources))
    out = []
    for source in sources:
        value = derive_num_century(source.century or "", span_policy=span_policy)
        if value != source.num_century:
            source = replace(source, num_century=value, _locked=False)
            report.actions.append((source.srclink, f"set num_century={value}"))
        out.append(source)
    report.records_out = len(out)
    return out, report


# --- full pipeline --------------------------------------------------------

def clean(chants: list[Chant], sources: list[Source],
          genre_of_origin: dict[str, str] | None = None,
          overrides: list[tuple[str, str, str, str]] | None = None,
          canonical_scheme: str = "https",
          span_policy: str = "first"):
    """Run all passes in the fixed order; returns (chants, sources, reports)."""
    reports: list[CleaningReport] = []

    sources, chants, report = normalize_url_scheme(sources, chants, canonical_scheme)
    reports.append(report)

    sources, chants, report = dedup_sources_by_siglum(sources, chants)
    reports.append(report)

    chants, report = drop_chants_without_visible_source(chants, sources)
    reports.append(report)

    chants, report = standardize_genre(chants, genre_of_origin or {})
    reports.append(report)

    if overrides:
        chants, report = apply_field_overrides(chants, overrides)
        reports.append(report)

    chants, report = dedup_chants_by_chantlink(chants)
    reports.append(report)

    sources, report = derive_num_century_pass(sources, span_policy=span_policy)
    reports.append(report)

    return chants, sources, reports
