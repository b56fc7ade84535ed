"""Read-only HTTP facade over a loaded corpus: stats, field-value
enumeration, and filter preview/apply for the filter-builder UI."""

from __future__ import annotations

from collections import Counter

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from chantkit import filtering, stats
from chantkit.errors import BadRange, FilterSyntaxError, UnknownField
from chantkit.model import CHANT_COLUMNS, SOURCE_COLUMNS, Corpus

SAMPLE_LIMIT = 20


def create_app(corpus: Corpus | None, allow_cross_origin: bool = False) -> FastAPI:
    """Build the app around one shared corpus, locked for safe concurrent reads."""
    if corpus is not None and not corpus.locked:
        corpus = Corpus(corpus.chants, corpus.sources,
                        history=corpus.history).lock()

    app = FastAPI(title="chant corpus filter service")
    app.state.corpus = corpus

    if allow_cross_origin:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=["*"],
                           allow_methods=["*"], allow_headers=["*"])

    def _corpus() -> Corpus | None:
        return app.state.corpus

    @app.get("/stats")
    def get_stats():
        corpus = _corpus()
        if corpus is None:
            return JSONResponse({"error": "no corpus loaded"}, status_code=503)
        report = stats.corpus_stats(corpus)
        per_db = stats.per_db_stats(corpus)
        return JSONResponse({
            **report.as_dict(),
            "per_db": [vars(row) for row in per_db],
        })

    @app.get("/fields/{entity}/{field}/values")
    def field_values(entity: str, field: str):
        corpus = _corpus()
        if corpus is None:
            return JSONResponse({"error": "no corpus loaded"}, status_code=503)
        if entity == "chant" and field in CHANT_COLUMNS:
            records = corpus.chants
        elif entity == "source" and field in SOURCE_COLUMNS:
            records = corpus.sources
        else:
            return JSONResponse({"error": f"unknown field {entity}/{field}"},
                                status_code=404)
        counts = Counter(
            str(value) for record in records
            if (value := getattr(record, field)) is not None)
        return JSONResponse({
            "entity": entity,
            "field": field,
            "values": [[value, counts[value]] for value in sorted(counts)],
        })

    async def _parse_body(request: Request):
        text = (await request.body()).decode("utf-8")
        return filtering.parse_filter(text)

    @app.post("/filter/preview")
    async def filter_preview(request: Request):
        corpus = _corpus()
        if corpus is None:
            return JSONResponse({"error": "no corpus loaded"}, status_code=503)
        try:
            config = await _parse_body(request)
        except (FilterSyntaxError, UnknownField, BadRange, ValueError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        filtered = filtering.apply_filter(corpus, config)
        return JSONResponse({
            "chant_count": len(filtered.chants),
            "source_count": len(filtered.sources),
            "sample_chants": [
                {
                    "chantlink": chant.chantlink,
                    "incipit": chant.incipit,
                    "cantus_id": chant.cantus_id,
                    "genre": chant.genre,
                    "db": chant.db,
                }
                for chant in filtered.chants[:SAMPLE_LIMIT]
            ],
            "config_digest": filtering.config_digest(config),
            "canonical_config": filtering.export_filter(config),
        })

    @app.post("/filter/apply")
    async def filter_apply(request: Request):
        corpus = _corpus()
        if corpus is None:
            return JSONResponse({"error": "no corpus loaded"}, status_code=503)
        try:
            config = await _parse_body(request)
        except (FilterSyntaxError, UnknownField, BadRange, ValueError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        filtered = filtering.apply_filter(corpus, config)
        chants_csv, sources_csv = filtered.export_csv()
        return JSONResponse({
            "chant_count": len(filtered.chants),
            "source_count": len(filtered.sources),
            "config_digest": filtering.config_digest(config),
            "canonical_config": filtering.export_filter(config),
            "history": filtered.export_history(),
            "chants_csv": chants_csv.decode("utf-8"),
            "sources_csv": sources_csv.decode("utf-8"),
        })

    return app
