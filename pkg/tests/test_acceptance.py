"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The golden-statistics criterion needs the real corpus snapshot; point
CHANTKIT_SNAPSHOT_DIR at a directory containing chants.csv and sources.csv
to enable it. Everything else runs on bundled fixtures.
"""

import itertools
import os
import random
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from chantkit import cleanse, filtering, ingest, linkage, model, stats, volpiano
from chantkit.service import create_app
from tests.conftest import make_chant, make_source, random_corpus
from tests.test_filtering import oracle_filter, random_config
from tests.test_linkage import oracle_similarity

SNAPSHOT_DIR = os.environ.get("CHANTKIT_SNAPSHOT_DIR", "")

EXPECTED_TABLE_3_4 = {
    "total_chants": 888_010,
    "chants_with_melody": 60_588,
    "chants_with_melody_20plus": 44_625,
    "total_sources": 2_278,
    "sources_100plus_chants": 508,
    "sources_with_provenance": 1_606,
    "sources_with_century": 2_240,
    "sources_with_cursus": 345,
}
EXPECTED_CD_ROW = (429_982, 30_350, 14_662, 231, 166)


def _report(name: str, ok: bool):
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'}: {name}")
    assert ok, name


def _load_snapshot():
    directory = Path(SNAPSHOT_DIR)
    chants, _ = ingest.parse_chants_csv((directory / "chants.csv").read_bytes())
    sources, _ = ingest.parse_sources_csv((directory / "sources.csv").read_bytes())
    return model.new_corpus(chants, sources, strict=False)


@pytest.mark.skipif(not SNAPSHOT_DIR, reason="CHANTKIT_SNAPSHOT_DIR not set")
def test_golden_statistics_full_snapshot():
    corpus = _load_snapshot()
    report = stats.corpus_stats(corpus).as_dict()
    exact = {k: v for k, v in EXPECTED_TABLE_3_4.items() if k != "chants_with_melody_20plus"}
    ok = all(report[k] == v for k, v in exact.items())
    expected_20plus = EXPECTED_TABLE_3_4["chants_with_melody_20plus"]
    # 20+ count allows <= 0.5% residual divergence from the character-class
    # convention; any divergence must be documented.
    ok = ok and abs(report["chants_with_melody_20plus"] - expected_20plus) <= 0.005 * expected_20plus
    cd = next(r for r in stats.per_db_stats(corpus) if r.db == "CD")
    ok = ok and (cd.n_chants, cd.n_cantus_ids, cd.n_unique_cantus_ids,
                 cd.n_sources, cd.n_sources_100plus) == EXPECTED_CD_ROW
    _report("golden statistics on full snapshot", ok)


def test_fixture_ingest_round_trip():
    corpus = random_corpus(seed=41)
    chants_csv, sources_csv = corpus.export_csv()
    chants, _ = ingest.parse_chants_csv(chants_csv)
    sources, _ = ingest.parse_sources_csv(sources_csv)
    again = model.new_corpus(chants, sources, strict=False).export_csv()
    _report("ingest round-trip byte equality", (chants_csv, sources_csv) == again)


def _messy_records():
    sources = [
        make_source(0, srclink="http://x/1", century="13th century"),
        make_source(0, srclink="https://x/1", century="13th century"),
        make_source(0, srclink="https://x/3", century="12th century"),
        make_source(1, srclink="https://x/2", century="c.1250"),
    ]
    chants = [
        make_chant(0, srclink="http://x/1"),
        make_chant(0, srclink="https://x/1"),
        make_chant(1, srclink="https://x/2", genre="Antiphon"),
        make_chant(2, srclink="https://x/gone"),
        make_chant(3, srclink="https://x/3"),
    ]
    return chants, sources


def test_cleaning_pass_idempotence_all_passes():
    chants, sources = _messy_records()
    genre_map = {make_chant(1).chantlink: "A"}
    overrides = [("CD", make_chant(3).chantlink, "office", "M")]
    chants, sources, _ = cleanse.clean(chants, sources, genre_of_origin=genre_map,
                                       overrides=overrides)
    again_chants, again_sources, reports = cleanse.clean(
        chants, sources, genre_of_origin=genre_map, overrides=overrides)
    ok = again_chants == chants and again_sources == sources
    ok = ok and len(reports) == 7  # six fixed passes plus the override pass
    ok = ok and all(r.n_drops == 0 and not r.actions for r in reports)
    _report("cleaning-pass idempotence for all passes", ok)


def test_dedup_count_arithmetic():
    chants, sources = _messy_records()
    _, _, reports = cleanse.clean(chants, sources)
    ok = all(r.records_in - r.records_out == r.n_drops for r in reports)
    _report("dedup count arithmetic (records_in - records_out == drops)", ok)


def test_filter_replicability_200_random_configs():
    corpus = random_corpus(seed=51, n_chants=100)
    rng = random.Random(123)
    ok = True
    for _ in range(200):
        config = random_config(rng)
        filtered = filtering.apply_filter(corpus, config)
        reparsed = filtering.parse_filter(filtering.export_filter(config))
        ok = ok and filtering.apply_filter(corpus, reparsed) == filtered
        ok = ok and filtering.apply_filter(filtered, config) == filtered
        oracle_chants, oracle_sources = oracle_filter(corpus, config)
        ok = ok and filtered.chants == oracle_chants and filtered.sources == oracle_sources
        if not ok:
            break
    _report("filter replicability, idempotence, oracle equality (200 configs)", ok)


def test_century_parser_criteria():
    ok = all(cleanse.derive_num_century(text) == 13 for text in
             ("13th century", "c.1250", "late 13th century", "possibly around 1225-50"))
    ok = ok and all(cleanse.derive_num_century(f"{n}th century") == n for n in range(1, 22))
    rng = random.Random(7)
    for _ in range(1000):
        year = rng.randint(800, 1600)
        ok = ok and cleanse.derive_num_century(str(year)) == (year - 1) // 100 + 1
    _report("century parser criteria", ok)


def test_linkage_metric_criteria():
    alphabet = "abc "
    strings = [""]
    for length in range(1, 5):
        strings.extend("".join(p) for p in itertools.product(alphabet, repeat=length))
    ok = True
    for a in strings:
        for b in strings:
            if linkage.token_sort_similarity(a, b) != oracle_similarity(
                    linkage.normalize_text(a), linkage.normalize_text(b)):
                ok = False
                break
        if not ok:
            break
    ok = ok and linkage.token_sort_similarity("kitten", "sitting") == 57

    a, b = "a" * 100, "a" * 59 + "b" * 41
    decision = linkage.match_cantus_id(
        linkage.ExternalRecord("r", a, "In", "S"),
        [linkage.Candidate("c", b, "In")], threshold=60)
    ok = ok and decision.outcome == "no_match" and decision.score == 59
    _report("linkage metric: DP oracle, kitten/sitting=57, threshold edge", ok)


def test_volpiano_property_criteria():
    rng = random.Random(17)
    alphabet = sorted(set().union(*volpiano.CHAR_CLASSES.values())) + list("~@ ?!àZ*")
    ok = True
    for _ in range(1000):
        m = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 50)))
        n = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 20)))
        cleaned = volpiano.clean_melody(m)
        ok = ok and volpiano.clean_melody(cleaned) == cleaned
        ok = ok and volpiano.count_notes(cleaned) == volpiano.count_notes(m)
        ok = ok and volpiano.count_notes(m + n) == volpiano.count_notes(m) + volpiano.count_notes(n)
        if not ok:
            break
    _report("volpiano clean idempotence, note preservation, additivity (1000 strings)", ok)


def test_service_preview_apply_consistency():
    client = TestClient(create_app(random_corpus(seed=61)))
    rng = random.Random(29)
    ok = True
    for _ in range(50):
        text = filtering.export_filter(random_config(rng))
        preview = client.post("/filter/preview", content=text).json()
        applied = client.post("/filter/apply", content=text).json()
        ok = ok and preview["chant_count"] == applied["chants_csv"].count("\n") - 1
        ok = ok and preview["source_count"] == applied["sources_csv"].count("\n") - 1
        if not ok:
            break
    _report("service preview/apply consistency (50 configs)", ok)
