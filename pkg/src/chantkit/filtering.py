"""Declarative, replicable corpus filtering.

A filter is a small YAML document; its canonical export (fixed key order,
sorted value lists, defaults omitted) is the shareable artifact, and its
hash is the digest recorded in the corpus history ledger.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import yaml

from chantkit import volpiano
from chantkit.errors import BadRange, FilterSyntaxError, UnknownField
from chantkit.model import (
    CHANT_COLUMNS,
    SOURCE_COLUMNS,
    Corpus,
    history_entry,
    unlocked_copy,
)

_KEY_ORDER = [
    "version",
    "chant_include",
    "chant_exclude",
    "source_include",
    "source_exclude",
    "has_melody",
    "min_melody_notes",
    "incipit_contains",
    "century_range",
    "drop_chants_without_source",
    "drop_sources_without_chants",
]


@dataclass(eq=True)
class FilterConfig:
    version: int = 1
    chant_include: dict[str, list[str]] = field(default_factory=dict)
    chant_exclude: dict[str, list[str]] = field(default_factory=dict)
    source_include: dict[str, list[str]] = field(default_factory=dict)
    source_exclude: dict[str, list[str]] = field(default_factory=dict)
    has_melody: bool | None = None
    min_melody_notes: int | None = None
    incipit_contains: list[str] | None = None
    century_range: tuple[int, int] | None = None
    drop_chants_without_source: bool = True
    drop_sources_without_chants: bool = True


def _check_fields(mapping: dict, allowed: list[str], where: str) -> dict[str, list[str]]:
    if not isinstance(mapping, dict):
        raise FilterSyntaxError(f"{where} must be a mapping of field name to value list")
    out: dict[str, list[str]] = {}
    for name, values in mapping.items():
        if name not in allowed:
            raise UnknownField(name)
        if values is None:
            values = []
        if not isinstance(values, list):
            values = [values]
        out[name] = sorted(str(v).strip() for v in values)
    return out


def parse_filter(config_text: str) -> FilterConfig:
    """Parse and structurally validate a filter config document."""
    try:
        doc = yaml.safe_load(config_text)
    except yaml.YAMLError as exc:
        line = None
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            line = mark.line + 1
        raise FilterSyntaxError(str(exc), line=line) from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise FilterSyntaxError("config must be a mapping")

    for key in doc:
        if key not in _KEY_ORDER:
            raise FilterSyntaxError(f"unknown config key {key!r}")
    if doc.get("version", 1) != 1:
        raise FilterSyntaxError(f"unsupported config version {doc.get('version')!r}")

    config = FilterConfig()
    config.chant_include = _check_fields(doc.get("chant_include", {}), CHANT_COLUMNS, "chant_include")
    config.chant_exclude = _check_fields(doc.get("chant_exclude", {}), CHANT_COLUMNS, "chant_exclude")
    config.source_include = _check_fields(doc.get("source_include", {}), SOURCE_COLUMNS, "source_include")
    config.source_exclude = _check_fields(doc.get("source_exclude", {}), SOURCE_COLUMNS, "source_exclude")

    if "has_melody" in doc and doc["has_melody"] is not None:
        config.has_melody = bool(doc["has_melody"])
    if "min_melody_notes" in doc and doc["min_melody_notes"] is not None:
        value = int(doc["min_melody_notes"])
        if value < 0:
            raise BadRange(f"min_melody_notes must be >= 0, got {value}")
        config.min_melody_notes = value
    if "incipit_contains" in doc and doc["incipit_contains"] is not None:
        values = doc["incipit_contains"]
        if not isinstance(values, list):
            values = [values]
        config.incipit_contains = sorted(str(v) for v in values)
    if "century_range" in doc and doc["century_range"] is not None:
        pair = doc["century_range"]
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise BadRange(f"century_range must be a [lo, hi] pair, got {pair!r}")
        lo, hi = int(pair[0]), int(pair[1])
        if lo > hi:
            raise BadRange(f"century_range lo {lo} > hi {hi}")
        config.century_range = (lo, hi)
    if "drop_chants_without_source" in doc:
        config.drop_chants_without_source = bool(doc["drop_chants_without_source"])
    if "drop_sources_without_chants" in doc:
        config.drop_sources_without_chants = bool(doc["drop_sources_without_chants"])
    return config


def export_filter(config: FilterConfig) -> str:
    """Canonical serialization: fixed key order, sorted lists, defaults omitted."""
    doc: dict = {"version": config.version}
    for key in ("chant_include", "chant_exclude", "source_include", "source_exclude"):
        mapping = getattr(config, key)
        cleaned = {name: sorted(values) for name, values in sorted(mapping.items()) if values}
        if cleaned:
            doc[key] = cleaned
    if config.has_melody is not None:
        doc["has_melody"] = config.has_melody
    if config.min_melody_notes is not None:
        doc["min_melody_notes"] = config.min_melody_notes
    if config.incipit_contains is not None:
        doc["incipit_contains"] = sorted(config.incipit_contains)
    if config.century_range is not None:
        doc["century_range"] = [config.century_range[0], config.century_range[1]]
    if config.drop_chants_without_source is not True:
        doc["drop_chants_without_source"] = False
    if config.drop_sources_without_chants is not True:
        doc["drop_sources_without_chants"] = False
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False,
                          allow_unicode=True)


def config_digest(config: FilterConfig) -> str:
    return hashlib.sha256(export_filter(config).encode("utf-8")).hexdigest()


def _matches(value, wanted: list[str]) -> bool:
    text = "" if value is None else str(value).strip()
    return text in wanted


def source_passes(source, config: FilterConfig) -> bool:
    for name, values in config.source_include.items():
        if values and not _matches(getattr(source, name), values):
            return False
    for name, values in config.source_exclude.items():
        if values and _matches(getattr(source, name), values):
            return False
    if config.century_range is not None:
        # Undated sources fail a date filter; silently passing them would
        # corrupt date-restricted experiments.
        if source.num_century is None:
            return False
        lo, hi = config.century_range
        if not lo <= source.num_century <= hi:
            return False
    return True


def chant_passes(chant, config: FilterConfig) -> bool:
    for name, values in config.chant_include.items():
        if values and not _matches(getattr(chant, name), values):
            return False
    for name, values in config.chant_exclude.items():
        if values and _matches(getattr(chant, name), values):
            return False
    if config.has_melody is not None:
        if bool(chant.melody) != config.has_melody:
            return False
    if config.min_melody_notes is not None:
        if volpiano.count_notes(chant.melody or "") < config.min_melody_notes:
            return False
    if config.incipit_contains is not None:
        incipit = (chant.incipit or "").lower()
        if not any(s.lower() in incipit for s in config.incipit_contains):
            return False
    return True


def apply_filter(corpus: Corpus, config: FilterConfig) -> Corpus:
    """Evaluate the config against a corpus and return a new, filtered corpus.

    Order: restrict sources, optionally drop orphaned chants, restrict
    chants, optionally prune chant-less sources. The input corpus (locked
    or not) is never modified; the result carries a history entry with the
    config digest.
    """
    sources = [s for s in corpus.sources if source_passes(s, config)]

    chants = list(corpus.chants)
    if config.drop_chants_without_source:
        known = {s.srclink for s in sources}
        chants = [c for c in chants if c.srclink in known]

    chants = [c for c in chants if chant_passes(c, config)]

    if config.drop_sources_without_chants:
        used = {c.srclink for c in chants}
        sources = [s for s in sources if s.srclink in used]

    result = Corpus(
        [unlocked_copy(c) for c in chants],
        [unlocked_copy(s) for s in sources],
        history=list(corpus.history),
    )
    result.append_history(history_entry(
        "apply_filter", config_digest(config),
        len(corpus.chants), len(chants),
        len(corpus.sources), len(sources)))
    return result
