"""HTTP JSON API over the recommendation pipeline.

The service is read-only: artifacts are loaded once and shared across
requests.  Request validation is strict (unknown fields are rejected), and
every response carries the parsed-query echo plus full score breakdowns so
clients never re-rank on their side.
"""
from __future__ import annotations

import logging
import os
import time
from dataclasses import asdict, dataclass, replace

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from .artifacts import (
    ArtifactManifest,
    load_artifacts,
    load_embedder_config,
    posting_as_dict,
)
from .dense import DenseIndex, Embedder, restore_embedder
from .errors import MetajobsError, UnknownDocument
from .ingest import Corpus, normalize_text
from .lexical import SparseIndex
from .queries import EMPLOYMENT_TYPES, SENIORITY_LEVELS, WORK_MODES
from .ranker import (
    PairScorer,
    QueryOutcome,
    RankerConfig,
    Recommendation,
    TokenOverlapScorer,
    run_query,
)

logger = logging.getLogger(__name__)

API_PREFIX = "/api/v1"
WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass
class ServiceState:
    """Everything a request needs, loaded once."""

    corpus: Corpus
    sparse: SparseIndex
    dense: DenseIndex
    embedder: Embedder
    pair_scorer: PairScorer
    config: RankerConfig
    manifest: ArtifactManifest | None = None


def state_from_artifacts(
    artifacts_dir: str,
    provider_url: str | None = None,
    config: RankerConfig | None = None,
) -> ServiceState:
    corpus, sparse, dense, manifest = load_artifacts(artifacts_dir)
    embedder = restore_embedder(load_embedder_config(artifacts_dir), provider_url)
    return ServiceState(
        corpus=corpus,
        sparse=sparse,
        dense=dense,
        embedder=embedder,
        pair_scorer=TokenOverlapScorer(),
        config=config if config is not None else RankerConfig(),
        manifest=manifest,
    )


class RecommendRequest(BaseModel):
    """Body of ``POST /api/v1/recommend``; unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid")

    query: str
    top_k: int | None = None
    rerank: bool | None = None
    w_sem: float | None = None
    w_lex: float | None = None
    work_mode: str | None = None
    seniority: str | None = None
    employment: str | None = None
    location: str | None = None


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def _parsed_query_payload(outcome: QueryOutcome) -> dict:
    parsed = outcome.parsed
    return {
        "raw": parsed.raw,
        "normalized": parsed.normalized,
        "tokens": list(parsed.tokens),
        "work_mode": parsed.work_mode,
        "seniority": parsed.seniority_filter,
        "employment": parsed.employment_filter,
        "location": parsed.location_hint,
    }


def _result_payload(rec: Recommendation) -> dict:
    breakdown = rec.breakdown
    explanation = rec.explanation
    return {
        "rank": rec.rank,
        "posting": posting_as_dict(rec.posting),
        "score_breakdown": {
            "s_sem_raw": breakdown.s_sem_raw,
            "s_lex_raw": breakdown.s_lex_raw,
            "s_sem_hat": breakdown.s_sem_hat,
            "s_lex_hat": breakdown.s_lex_hat,
            "s_hybrid": breakdown.s_hybrid,
            "s_rerank_hat": breakdown.s_rerank_hat,
            "bonus": breakdown.bonus,
            "s_final": breakdown.s_final,
        },
        "explanation": {
            "matched_keywords": list(explanation.matched_keywords),
            "applied_filters": [list(pair) for pair in explanation.applied_filters],
            "fallback_used": explanation.fallback_used,
            "metadata_evidence": [list(pair) for pair in explanation.metadata_evidence],
            "ranking_evidence": explanation.ranking_evidence,
        },
    }


def recommend_payload(state: ServiceState, body: RecommendRequest) -> dict | JSONResponse:
    """Validate one request against the loaded state and run the pipeline."""
    if not body.query.strip():
        return _error(400, "query must not be empty")

    w_sem, w_lex = body.w_sem, body.w_lex
    if w_sem is not None or w_lex is not None:
        if w_sem is None:
            w_sem = 1.0 - w_lex
        if w_lex is None:
            w_lex = 1.0 - w_sem
        if abs(w_sem + w_lex - 1.0) > WEIGHT_SUM_TOLERANCE:
            return _error(400, f"weights must sum to 1, got w_sem={w_sem} w_lex={w_lex}")

    overrides: dict[str, str | None] = {}
    fields_set = body.model_fields_set
    if "work_mode" in fields_set:
        if body.work_mode is not None and body.work_mode not in WORK_MODES:
            return _error(400, f"work_mode must be one of {list(WORK_MODES)}")
        overrides["work_mode"] = body.work_mode
    if "seniority" in fields_set:
        if body.seniority is not None and body.seniority not in SENIORITY_LEVELS:
            return _error(400, f"seniority must be one of {list(SENIORITY_LEVELS)}")
        overrides["seniority"] = body.seniority
    if "employment" in fields_set:
        if body.employment is not None and body.employment not in EMPLOYMENT_TYPES:
            return _error(400, f"employment must be one of {list(EMPLOYMENT_TYPES)}")
        overrides["employment"] = body.employment
    if "location" in fields_set:
        overrides["location"] = (
            normalize_text(body.location) if body.location is not None else None
        )

    cfg = state.config
    changes: dict = {}
    if body.top_k is not None:
        if not 1 <= body.top_k <= 100:
            return _error(400, "top_k must lie in [1, 100]")
        changes["top_k"] = body.top_k
    if body.rerank is not None:
        changes["rerank_enabled"] = body.rerank
    if w_sem is not None:
        changes["w_sem"] = w_sem
        changes["w_lex"] = w_lex
    if changes:
        try:
            cfg = replace(cfg, **changes)
        except ValueError as exc:
            return _error(400, str(exc))

    started = time.perf_counter()
    outcome = run_query(
        body.query,
        state.corpus,
        state.sparse,
        state.dense,
        state.embedder,
        state.pair_scorer if cfg.rerank_enabled else None,
        cfg,
        filter_overrides=overrides or None,
    )
    timing_ms = (time.perf_counter() - started) * 1000.0
    return {
        "query": body.query,
        "parsed_query": _parsed_query_payload(outcome),
        "applied_filters": [list(pair) for pair in outcome.applied_filters],
        "fallback_used": outcome.fallback_used,
        "results": [_result_payload(rec) for rec in outcome.recommendations],
        "timing_ms": timing_ms,
    }


def create_app(state: ServiceState | None, ui_dir: str | None = None) -> FastAPI:
    """Build the FastAPI app; ``state=None`` yields 503 on every route."""
    app = FastAPI(title="metajobs", docs_url=None, redoc_url=None)
    app.state.engine = state

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return _error(400, str(exc.errors()))

    def _engine() -> ServiceState | None:
        return app.state.engine

    @app.post(API_PREFIX + "/recommend")
    def recommend_route(body: RecommendRequest):
        state = _engine()
        if state is None:
            return _error(503, "artifacts not loaded")
        try:
            return recommend_payload(state, body)
        except MetajobsError as exc:
            logger.exception("recommend failed")
            return _error(503, str(exc))

    @app.get(API_PREFIX + "/jobs/{posting_id}")
    def job_route(posting_id: int):
        state = _engine()
        if state is None:
            return _error(503, "artifacts not loaded")
        try:
            posting = state.corpus.posting(posting_id)
        except UnknownDocument:
            return _error(404, f"no posting with id {posting_id}")
        return posting_as_dict(posting)

    @app.get(API_PREFIX + "/health")
    def health_route():
        state = _engine()
        if state is None:
            return _error(503, "artifacts not loaded")
        return {
            "status": "ok",
            "corpus_size": len(state.corpus),
            "embedder_name": state.dense.embedder_name,
        }

    @app.get(API_PREFIX + "/stats")
    def stats_route():
        state = _engine()
        if state is None:
            return _error(503, "artifacts not loaded")
        return {
            "corpus_size": len(state.corpus),
            "vocabulary_size": len(state.sparse.vocabulary),
            "sparse_nonzeros": int(state.sparse.term_ids.shape[0]),
            "embedding_dimension": state.dense.dimension,
            "embedder_name": state.dense.embedder_name,
            "config": asdict(state.config),
        }

    @app.get(API_PREFIX + "/config")
    def config_route():
        state = _engine()
        if state is None:
            return _error(503, "artifacts not loaded")
        return asdict(state.config)

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
        logger.info("serving UI from %s", ui_dir)

    return app


def create_app_from_dir(
    artifacts_dir: str, provider_url: str | None = None, ui_dir: str | None = None
) -> FastAPI:
    """Load artifacts and build the app; a failed load still serves 503s."""
    try:
        state = state_from_artifacts(artifacts_dir, provider_url=provider_url)
    except MetajobsError:
        logger.exception("failed to load artifacts from %s", artifacts_dir)
        state = None
    return create_app(state, ui_dir=ui_dir)
