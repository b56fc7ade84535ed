import pytest

from chantkit.errors import CorpusLocked, DuplicateIdentifier, ValidationFailed
from chantkit.ingest import parse_chants_csv, parse_sources_csv
from chantkit.model import Corpus, new_corpus
from tests.conftest import make_chant, make_source


def small_corpus(**kw):
    source = make_source(0)
    chant = make_chant(0, srclink=source.srclink)
    return new_corpus([chant], [source], **kw)


def test_new_corpus_counts():
    corpus = small_corpus()
    assert (len(corpus.chants), len(corpus.sources)) == (1, 1)
    assert corpus.history[0].op_name == "create"


def test_duplicate_chantlink_rejected():
    source = make_source(0)
    chants = [make_chant(0, srclink=source.srclink), make_chant(0, srclink=source.srclink)]
    with pytest.raises(DuplicateIdentifier) as exc:
        new_corpus(chants, [source])
    assert exc.value.kind == "chantlink"


def test_duplicate_srclink_rejected():
    with pytest.raises(DuplicateIdentifier) as exc:
        new_corpus([], [make_source(0), make_source(1, srclink=make_source(0).srclink)])
    assert exc.value.kind == "srclink"


def test_strict_mode_rejects_dangling_srclink():
    chant = make_chant(0, srclink="https://db.example/source/none")
    with pytest.raises(ValidationFailed) as exc:
        new_corpus([chant], [make_source(0)], strict=True)
    assert "srclink" in str(exc.value)


def test_lenient_mode_warns_on_dangling_srclink():
    chant = make_chant(0, srclink="https://db.example/source/none")
    corpus = new_corpus([chant], [make_source(0)], strict=False)
    assert len(corpus.warnings) == 1


def test_invalid_record_rejected():
    with pytest.raises(ValidationFailed):
        new_corpus([make_chant(0, cantus_id="")], [make_source(0)], strict=False)


def test_lock_blocks_mutation():
    corpus = small_corpus()
    corpus.lock()
    with pytest.raises(CorpusLocked):
        corpus.chants[0].mode = "1"
    with pytest.raises(CorpusLocked):
        corpus.sources[0].title = "x"


def test_lock_is_idempotent():
    corpus = small_corpus()
    corpus.lock()
    corpus.lock()
    assert corpus.locked


def test_reads_succeed_on_locked_corpus():
    corpus = small_corpus(locked=True)
    chants_csv, sources_csv = corpus.export_csv()
    assert chants_csv and sources_csv
    assert corpus.chants[0].incipit


def _reingest(corpus: Corpus) -> Corpus:
    chants_csv, sources_csv = corpus.export_csv()
    chants, chant_issues = parse_chants_csv(chants_csv)
    sources, source_issues = parse_sources_csv(sources_csv)
    assert not chant_issues and not source_issues
    return new_corpus(chants, sources, strict=False)


def test_export_ingest_export_fixed_point(fixture_corpus):
    first = fixture_corpus.export_csv()
    second = _reingest(fixture_corpus).export_csv()
    assert first == second


def test_reingested_corpus_is_equal(fixture_corpus):
    assert _reingest(fixture_corpus) == fixture_corpus


def test_empty_corpus_exports_headers_only():
    corpus = new_corpus([], [])
    chants_csv, sources_csv = corpus.export_csv()
    assert chants_csv.decode().count("\n") == 1
    assert sources_csv.decode().splitlines() == [
        "title,siglum,century,provenance,srclink,cursus,num_century"]


def test_embedded_comma_round_trips():
    source = make_source(0)
    chant = make_chant(0, srclink=source.srclink, feast="Nativitas Domini, in die")
    corpus = new_corpus([chant], [source])
    assert '"Nativitas Domini, in die"' in corpus.export_csv()[0].decode()
    assert _reingest(corpus).chants[0].feast == "Nativitas Domini, in die"


def test_history_export_and_chaining():
    from chantkit import filtering

    corpus = small_corpus()
    config = filtering.parse_filter("version: 1")
    filtered = filtering.apply_filter(corpus, config)
    lines = filtered.export_history().strip().splitlines()
    assert len(lines) == 2
    assert "create" in lines[0]
    assert filtering.config_digest(config) in lines[1]
    entries = filtered.history
    for before, after in zip(entries, entries[1:]):
        assert after.chants_before == before.chants_after
        assert after.sources_before == before.sources_after


def test_fresh_corpus_history_has_one_create_line():
    assert small_corpus().export_history().strip().splitlines()[0].count("create") == 1
    assert len(small_corpus().export_history().strip().splitlines()) == 1


def test_empty_string_optional_normalized_to_absent():
    chant = make_chant(0, mode="  ")
    assert chant.mode is None
