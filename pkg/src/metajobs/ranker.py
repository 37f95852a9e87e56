"""Hybrid ranking: candidate fusion, filtering, re-ranking and assembly.

The pipeline is fixed: semantic candidate retrieval, keyword scoring over
those candidates, per-query min-max normalization of both score lists,
weighted fusion, metadata filters with a fallback when nothing survives,
optional pair-scorer re-ranking of the top pool, then deduplication, a
per-company cap and truncation.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Protocol, Sequence

import numpy as np
import requests

from .dense import DenseIndex, Embedder, semantic_candidates
from .errors import IndexMismatch, ProviderUnavailable
from .explain import Explanation, explain
from .ingest import Corpus, JobPosting
from .lexical import SparseIndex, lexical_scores, query_vector, tokenize
from .queries import (
    ParsedQuery,
    canonical_employment,
    canonical_seniority,
    contains_phrase,
    parse_query,
    work_mode_phrases,
)


@dataclass(frozen=True)
class RankerConfig:
    """Knobs for one ranking run; weights must sum to one."""

    n_candidates: int = 250
    w_sem: float = 0.4
    w_lex: float = 0.6
    epsilon: float = 1e-9
    rerank_enabled: bool = False
    rerank_alpha: float = 0.7
    rerank_pool: int = 100
    metadata_bonus_per_field: float = 0.05
    metadata_bonus_cap: float = 0.10
    bonus_enabled: bool = False
    company_cap: int = 2
    top_k: int = 10

    def __post_init__(self):
        if abs(self.w_sem + self.w_lex - 1.0) > 1e-9:
            raise ValueError(
                f"fusion weights must sum to 1, got w_sem={self.w_sem} w_lex={self.w_lex}"
            )
        if not 0.0 <= self.rerank_alpha <= 1.0:
            raise ValueError(f"rerank_alpha must lie in [0, 1], got {self.rerank_alpha}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        for name in ("n_candidates", "rerank_pool", "company_cap", "top_k"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1, got {getattr(self, name)}")


@dataclass(frozen=True)
class ScoreBreakdown:
    """Every intermediate score for one candidate."""

    s_sem_raw: float
    s_lex_raw: float
    s_sem_hat: float
    s_lex_hat: float
    s_hybrid: float
    s_rerank_hat: float | None = None
    bonus: float = 0.0
    s_final: float = 0.0


@dataclass
class ScoredCandidate:
    """Mutable pipeline record for one candidate posting."""

    posting: JobPosting
    composite_text: str
    s_sem_raw: float = 0.0
    s_lex_raw: float = 0.0
    s_sem_hat: float = 0.0
    s_lex_hat: float = 0.0
    s_hybrid: float = 0.0
    s_rerank_hat: float | None = None
    bonus: float = 0.0
    s_final: float = 0.0

    def breakdown(self) -> ScoreBreakdown:
        return ScoreBreakdown(
            s_sem_raw=self.s_sem_raw,
            s_lex_raw=self.s_lex_raw,
            s_sem_hat=self.s_sem_hat,
            s_lex_hat=self.s_lex_hat,
            s_hybrid=self.s_hybrid,
            s_rerank_hat=self.s_rerank_hat,
            bonus=self.bonus,
            s_final=self.s_final,
        )


@dataclass(frozen=True)
class Recommendation:
    posting_id: int
    posting: JobPosting
    rank: int
    breakdown: ScoreBreakdown
    explanation: Explanation


@dataclass(frozen=True)
class QueryOutcome:
    """Full result of one query, including the effective parsed query."""

    parsed: ParsedQuery
    applied_filters: tuple[tuple[str, str], ...]
    fallback_used: bool
    recommendations: tuple[Recommendation, ...]


class PairScorer(Protocol):
    """Scores a (query, document) pair; higher means more relevant."""

    name: str

    def score(self, query_text: str, document_text: str) -> float: ...


class TokenOverlapScorer:
    """Deterministic token-overlap Jaccard stand-in for a learned pair scorer."""

    name = "token-jaccard"

    def score(self, query_text: str, document_text: str) -> float:
        a, b = set(tokenize(query_text)), set(tokenize(document_text))
        if not a or not b:
            return 0.0
        return len(a & b) / len(a | b)


class HttpPairScorer:
    """JSON-over-HTTP pair scorer.

    Contract: ``POST url`` with ``{"query": q, "documents": [...]}`` returns
    ``{"scores": [...]}`` in document order.
    """

    name = "external-pair-scorer"

    def __init__(self, url: str, timeout: float = 30.0, session: requests.Session | None = None):
        self.url = url
        self.timeout = timeout
        self._session = session or requests.Session()

    def score_batch(self, query_text: str, document_texts: Sequence[str]) -> list[float]:
        try:
            response = self._session.post(
                self.url,
                json={"query": query_text, "documents": list(document_texts)},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"pair-scorer provider unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ProviderUnavailable(f"pair-scorer provider returned HTTP {response.status_code}")
        scores = response.json()["scores"]
        if len(scores) != len(document_texts):
            raise ProviderUnavailable(
                f"pair-scorer returned {len(scores)} scores for {len(document_texts)} documents"
            )
        return [float(s) for s in scores]

    def score(self, query_text: str, document_text: str) -> float:
        return self.score_batch(query_text, [document_text])[0]


def min_max_normalize(scores: Sequence[float] | np.ndarray, epsilon: float) -> np.ndarray:
    """Map scores to [0, 1) via ``(s - min) / (max - min + epsilon)``.

    A single score, or an all-equal list, maps to zeros.
    """
    arr = np.asarray(scores, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty score list")
    lo = float(arr.min())
    return (arr - lo) / (float(arr.max()) - lo + epsilon)


def fuse(s_sem_hat: float, s_lex_hat: float, cfg: RankerConfig) -> float:
    """Weighted sum of the two normalized signals."""
    return cfg.w_sem * s_sem_hat + cfg.w_lex * s_lex_hat


def _passes_filters(candidate: ScoredCandidate, parsed: ParsedQuery) -> bool:
    posting = candidate.posting
    if parsed.work_mode is not None:
        tokens = tuple(tokenize(candidate.composite_text))
        if not any(
            contains_phrase(tokens, phrase.split())
            for phrase in work_mode_phrases(parsed.work_mode)
        ):
            return False
    if parsed.seniority_filter is not None:
        if canonical_seniority(posting.seniority) != parsed.seniority_filter:
            return False
    if parsed.employment_filter is not None:
        if canonical_employment(posting.employment_type) != parsed.employment_filter:
            return False
    if parsed.location_hint is not None:
        if parsed.location_hint not in posting.location:
            return False
    return True


def apply_filters(
    candidates: list[ScoredCandidate], parsed: ParsedQuery
) -> tuple[list[ScoredCandidate], list[tuple[str, str]], bool]:
    """Keep candidates satisfying every extracted filter.

    If nothing survives, the original list comes back untouched with
    ``fallback_used`` set and no filters reported as applied.
    """
    active: list[tuple[str, str]] = []
    if parsed.work_mode is not None:
        active.append(("work_mode", parsed.work_mode))
    if parsed.seniority_filter is not None:
        active.append(("seniority", parsed.seniority_filter))
    if parsed.employment_filter is not None:
        active.append(("employment", parsed.employment_filter))
    if parsed.location_hint is not None:
        active.append(("location", parsed.location_hint))
    if not active:
        return candidates, [], False
    kept = [c for c in candidates if _passes_filters(c, parsed)]
    if not kept:
        return candidates, [], True
    return kept, active, False


def metadata_bonus(seed: JobPosting | None, candidate: JobPosting, cfg: RankerConfig) -> float:
    """Additive bonus for matching seed function/industry; capped and off by default."""
    if not cfg.bonus_enabled or seed is None:
        return 0.0
    bonus = 0.0
    if seed.function and seed.function == candidate.function:
        bonus += cfg.metadata_bonus_per_field
    if seed.industry and seed.industry == candidate.industry:
        bonus += cfg.metadata_bonus_per_field
    return min(bonus, cfg.metadata_bonus_cap)


def rerank_blend(
    s_hybrid: float,
    pool_raw_scores: Sequence[float],
    candidate_index: int,
    bonus: float,
    cfg: RankerConfig,
) -> float:
    """Blend a pool member's normalized pair score with its hybrid score."""
    pool_hat = min_max_normalize(pool_raw_scores, cfg.epsilon)
    return (
        cfg.rerank_alpha * float(pool_hat[candidate_index])
        + (1.0 - cfg.rerank_alpha) * s_hybrid
        + bonus
    )


def deduplicate(entries: list[ScoredCandidate]) -> list[ScoredCandidate]:
    """Drop repeat (title, company, location) tuples, keeping the first seen."""
    seen: set[tuple[str, str, str]] = set()
    kept = []
    for entry in entries:
        key = (entry.posting.title, entry.posting.company, entry.posting.location)
        if key in seen:
            continue
        seen.add(key)
        kept.append(entry)
    return kept


def company_diversify(entries: list[ScoredCandidate], cap: int) -> list[ScoredCandidate]:
    """Keep at most ``cap`` entries per company name, preserving order."""
    counts: dict[str, int] = {}
    kept = []
    for entry in entries:
        company = entry.posting.company
        if counts.get(company, 0) >= cap:
            continue
        counts[company] = counts.get(company, 0) + 1
        kept.append(entry)
    return kept


def _pair_scores(scorer: PairScorer, query_text: str, texts: list[str]) -> list[float]:
    score_batch = getattr(scorer, "score_batch", None)
    if score_batch is not None:
        return [float(s) for s in score_batch(query_text, texts)]
    return [float(scorer.score(query_text, text)) for text in texts]


def _apply_overrides(parsed: ParsedQuery, overrides: dict[str, str | None]) -> ParsedQuery:
    mapping = {
        "work_mode": "work_mode",
        "seniority": "seniority_filter",
        "employment": "employment_filter",
        "location": "location_hint",
    }
    changes = {}
    for key, value in overrides.items():
        if key not in mapping:
            raise ValueError(f"unknown filter override: {key!r}")
        changes[mapping[key]] = value
    return replace(parsed, **changes)


def run_query(
    query_text: str,
    corpus: Corpus,
    sparse: SparseIndex,
    dense: DenseIndex,
    embedder: Embedder,
    pair_scorer: PairScorer | None = None,
    cfg: RankerConfig | None = None,
    *,
    seed: JobPosting | None = None,
    exclude_ids: Sequence[int] = (),
    filter_overrides: dict[str, str | None] | None = None,
) -> QueryOutcome:
    """Run the full pipeline and return recommendations plus query context."""
    cfg = cfg if cfg is not None else RankerConfig()
    if sparse.num_documents != len(corpus):
        raise IndexMismatch(
            f"sparse index covers {sparse.num_documents} documents, corpus has {len(corpus)}"
        )
    if dense.vectors.shape[0] != len(corpus):
        raise IndexMismatch(
            f"dense index covers {dense.vectors.shape[0]} documents, corpus has {len(corpus)}"
        )
    if dense.embedder_name != embedder.name:
        raise IndexMismatch(
            f"dense index was built with {dense.embedder_name!r}, query embedder is {embedder.name!r}"
        )
    if cfg.rerank_enabled and pair_scorer is None:
        raise ValueError("rerank is enabled but no pair scorer was provided")

    parsed = parse_query(query_text, corpus.location_vocabulary())
    if filter_overrides:
        parsed = _apply_overrides(parsed, filter_overrides)

    query_vec = embedder.encode(parsed.normalized)
    candidates = semantic_candidates(dense, query_vec, cfg.n_candidates)
    if exclude_ids:
        excluded = set(int(i) for i in exclude_ids)
        candidates = [(i, s) for i, s in candidates if i not in excluded]
    if not candidates:
        return QueryOutcome(parsed, (), False, ())

    ids = [i for i, _ in candidates]
    sem_raw = np.asarray([s for _, s in candidates], dtype=np.float64)
    lex_raw = lexical_scores(sparse, query_vector(sparse, parsed.tokens), ids)
    sem_hat = min_max_normalize(sem_raw, cfg.epsilon)
    lex_hat = min_max_normalize(lex_raw, cfg.epsilon)

    entries = []
    for pos, doc_id in enumerate(ids):
        entry = ScoredCandidate(
            posting=corpus.posting(doc_id),
            composite_text=corpus.composites[doc_id].text,
            s_sem_raw=float(sem_raw[pos]),
            s_lex_raw=float(lex_raw[pos]),
            s_sem_hat=float(sem_hat[pos]),
            s_lex_hat=float(lex_hat[pos]),
        )
        entry.s_hybrid = fuse(entry.s_sem_hat, entry.s_lex_hat, cfg)
        entries.append(entry)

    entries, applied_filters, fallback_used = apply_filters(entries, parsed)
    for entry in entries:
        entry.bonus = metadata_bonus(seed, entry.posting, cfg)

    pre_ranks: dict[int, int] | None = None
    post_ranks: dict[int, int] | None = None
    if cfg.rerank_enabled:
        pre_order = sorted(entries, key=lambda e: (-(e.s_hybrid + e.bonus), e.posting.id))
        pre_ranks = {e.posting.id: r for r, e in enumerate(pre_order, start=1)}
        pool = pre_order[: cfg.rerank_pool]
        raw = _pair_scores(pair_scorer, parsed.normalized, [e.composite_text for e in pool])
        pool_hat = min_max_normalize(raw, cfg.epsilon)
        for idx, entry in enumerate(pool):
            entry.s_rerank_hat = float(pool_hat[idx])
            entry.s_final = rerank_blend(entry.s_hybrid, raw, idx, entry.bonus, cfg)
        for entry in pre_order[cfg.rerank_pool :]:
            entry.s_final = entry.s_hybrid + entry.bonus
    else:
        for entry in entries:
            entry.s_final = entry.s_hybrid + entry.bonus

    entries.sort(key=lambda e: (-e.s_final, e.posting.id))
    if cfg.rerank_enabled:
        post_ranks = {e.posting.id: r for r, e in enumerate(entries, start=1)}

    entries = deduplicate(entries)
    entries = company_diversify(entries, cfg.company_cap)
    entries = entries[: cfg.top_k]

    recommendations = []
    for rank, entry in enumerate(entries, start=1):
        doc_id = entry.posting.id
        explanation = explain(
            parsed,
            entry.posting,
            entry.composite_text,
            entry.breakdown(),
            applied_filters,
            fallback_used,
            w_sem=cfg.w_sem,
            w_lex=cfg.w_lex,
            seed=seed,
            rank_before_rerank=pre_ranks.get(doc_id) if pre_ranks else None,
            rank_after_rerank=post_ranks.get(doc_id) if post_ranks else None,
        )
        recommendations.append(
            Recommendation(
                posting_id=doc_id,
                posting=entry.posting,
                rank=rank,
                breakdown=entry.breakdown(),
                explanation=explanation,
            )
        )
    return QueryOutcome(parsed, tuple(applied_filters), fallback_used, tuple(recommendations))


def recommend(
    query_text: str,
    corpus: Corpus,
    sparse: SparseIndex,
    dense: DenseIndex,
    embedder: Embedder,
    pair_scorer: PairScorer | None = None,
    cfg: RankerConfig | None = None,
    *,
    seed: JobPosting | None = None,
    exclude_ids: Sequence[int] = (),
    filter_overrides: dict[str, str | None] | None = None,
) -> list[Recommendation]:
    """Top-k recommendations for a free-text query."""
    outcome = run_query(
        query_text,
        corpus,
        sparse,
        dense,
        embedder,
        pair_scorer,
        cfg,
        seed=seed,
        exclude_ids=exclude_ids,
        filter_overrides=filter_overrides,
    )
    return list(outcome.recommendations)
