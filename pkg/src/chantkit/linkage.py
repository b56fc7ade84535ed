"""Fuzzy Cantus-ID assignment for external chant datasets, plus export of the
matched records into the chants.csv / sources.csv schema with a full audit
trail for the unmatched remainder."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field

from chantkit.errors import EmptyCandidateSet, MissingConcordanceEntry
from chantkit.model import CHANT_COLUMNS, SOURCE_COLUMNS, Chant, Source

DEFAULT_THRESHOLD = 60

# Optional spelling-divergence folding (h-dropping, i/j and u/v conflation)
# applied before tokenization; off by default.
LATIN_FOLDING = {"h": "", "j": "i", "v": "u"}

_PUNCT = re.compile(r"[^\w\s]")


@dataclass(frozen=True)
class ExternalRecord:
    record_id: str
    text_content: str
    genre: str
    external_siglum: str
    feast: str | None = None
    melody: str | None = None
    folio: str | None = None


@dataclass(frozen=True)
class Candidate:
    cantus_id: str
    text: str
    genre: str
    feast: str | None = None


@dataclass
class MatchDecision:
    record_id: str
    outcome: str  # "matched" | "ambiguous" | "no_match"
    cantus_id: str | None = None
    score: int = 0
    candidates: list[tuple[str, int]] = field(default_factory=list)
    disambiguated_by_feast: bool = False


def normalize_text(text: str, substitutions: dict[str, str] | None = None) -> str:
    """Lowercase, strip punctuation, sort whitespace tokens."""
    text = text.lower()
    if substitutions:
        for old, new in substitutions.items():
            text = text.replace(old, new)
    text = _PUNCT.sub(" ", text)
    return " ".join(sorted(text.split()))


def edit_distance(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute edit distance (two-row DP)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def token_sort_similarity(a: str, b: str,
                          substitutions: dict[str, str] | None = None) -> int:
    """Similarity in [0, 100] after token-sort normalization of both strings."""
    na = normalize_text(a, substitutions)
    nb = normalize_text(b, substitutions)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 100
    distance = edit_distance(na, nb)
    return round(100 * (1 - distance / longest))


def match_cantus_id(record: ExternalRecord, candidates: list[Candidate],
                    threshold: int = DEFAULT_THRESHOLD,
                    substitutions: dict[str, str] | None = None) -> MatchDecision:
    """Match one external record against genre-filtered candidates.

    The unique best score at or above the threshold wins; exact ties are
    broken by feast similarity, and unresolved ties come back ambiguous.
    """
    if not candidates:
        raise EmptyCandidateSet(f"no candidates for record {record.record_id!r}")

    scored = [
        (candidate, token_sort_similarity(record.text_content, candidate.text, substitutions))
        for candidate in candidates
    ]
    scored.sort(key=lambda pair: -pair[1])
    top5 = [(candidate.cantus_id, score) for candidate, score in scored[:5]]
    best_score = scored[0][1]

    if best_score < threshold:
        return MatchDecision(record.record_id, "no_match",
                             score=best_score, candidates=top5)

    tied = [candidate for candidate, score in scored if score == best_score]
    if len(tied) == 1:
        return MatchDecision(record.record_id, "matched",
                             cantus_id=tied[0].cantus_id, score=best_score,
                             candidates=top5)

    if record.feast:
        feast_scored = [
            (candidate,
             token_sort_similarity(record.feast, candidate.feast or "", substitutions))
            for candidate in tied
        ]
        best_feast = max(score for _, score in feast_scored)
        feast_tied = [candidate for candidate, score in feast_scored if score == best_feast]
        if len(feast_tied) == 1:
            return MatchDecision(record.record_id, "matched",
                                 cantus_id=feast_tied[0].cantus_id, score=best_score,
                                 candidates=top5, disambiguated_by_feast=True)

    return MatchDecision(record.record_id, "ambiguous",
                         score=best_score, candidates=top5)


def match_batch(records: list[ExternalRecord], candidates: list[Candidate],
                threshold: int = DEFAULT_THRESHOLD,
                substitutions: dict[str, str] | None = None) -> list[MatchDecision]:
    """Match every record against the candidates of its genre."""
    by_genre: dict[str, list[Candidate]] = {}
    for candidate in candidates:
        by_genre.setdefault(candidate.genre, []).append(candidate)
    decisions = []
    for record in records:
        pool = by_genre.get(record.genre, [])
        if not pool:
            decisions.append(MatchDecision(record.record_id, "no_match"))
            continue
        decisions.append(match_cantus_id(record, pool, threshold, substitutions))
    return decisions


def export_to_schema(records: list[ExternalRecord], decisions: list[MatchDecision],
                     concordance: dict[str, str],
                     source_metadata: dict[str, dict[str, str]] | None = None,
                     base_url: str = "https://example.org/external",
                     db_code: str = "CM"):
    """Write matched records as chants.csv rows, the referenced sources as
    sources.csv rows, and every record (matched or not) to an audit CSV.

    The concordance maps external sigla to standard (RISM) sigla and must
    cover every input siglum. source_metadata, keyed by standard siglum,
    may supply title/century/provenance/cursus/srclink for the sources.
    """
    decision_by_id = {d.record_id: d for d in decisions}
    source_metadata = source_metadata or {}

    chant_rows: list[Chant] = []
    sources: dict[str, Source] = {}
    audit_rows: list[list[str]] = []
    for record in records:
        siglum = concordance.get(record.external_siglum)
        if siglum is None:
            raise MissingConcordanceEntry(record.external_siglum)
        decision = decision_by_id[record.record_id]
        audit_rows.append([
            record.record_id,
            decision.outcome,
            str(decision.score),
            decision.cantus_id or "",
            "feast" if decision.disambiguated_by_feast else "text",
            "; ".join(f"{cid}:{score}" for cid, score in decision.candidates),
        ])
        if decision.outcome != "matched":
            continue

        meta = source_metadata.get(siglum, {})
        srclink = meta.get("srclink") or f"{base_url}/source/{_slug(siglum)}"
        if srclink not in sources:
            sources[srclink] = Source(
                siglum=siglum,
                srclink=srclink,
                title=meta.get("title"),
                century=meta.get("century"),
                provenance=meta.get("provenance"),
                cursus=meta.get("cursus"),
            )
        chant_rows.append(Chant(
            chantlink=f"{base_url}/chant/{record.record_id}",
            incipit=record.text_content,
            cantus_id=decision.cantus_id,
            siglum=siglum,
            folio=record.folio or "unknown",
            srclink=srclink,
            db=db_code,
            genre=record.genre,
            feast=record.feast,
            melody=record.melody,
        ))

    chants_csv = _csv_bytes(CHANT_COLUMNS, (c.as_row() for c in chant_rows))
    sources_csv = _csv_bytes(SOURCE_COLUMNS, (s.as_row() for s in sources.values()))
    audit_csv = _csv_bytes(
        ["record_id", "outcome", "best_score", "cantus_id", "matched_on", "top_candidates"],
        audit_rows)
    return chants_csv, sources_csv, audit_csv


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-")


def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")
