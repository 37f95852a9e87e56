"""Per-result explanations: matched keywords, filter and metadata evidence.

Explanations are observational; they are attached after ranking and never
feed back into scores.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .ingest import JobPosting
from .lexical import tokenize
from .queries import ParsedQuery, canonical_employment, canonical_seniority

if TYPE_CHECKING:
    from .ranker import ScoreBreakdown

# Minimum gap between the weighted normalized signals before one of them is
# called the dominant ranking evidence.
DOMINANCE_MARGIN = 0.1


@dataclass(frozen=True)
class Explanation:
    matched_keywords: tuple[str, ...]
    applied_filters: tuple[tuple[str, str], ...]
    fallback_used: bool
    metadata_evidence: tuple[tuple[str, str], ...]
    ranking_evidence: str  # one of: lexical, semantic, balanced, reranked


def explain(
    parsed: ParsedQuery,
    posting: JobPosting,
    composite_text: str,
    breakdown: "ScoreBreakdown",
    applied_filters: list[tuple[str, str]],
    fallback_used: bool,
    *,
    w_sem: float,
    w_lex: float,
    seed: JobPosting | None = None,
    rank_before_rerank: int | None = None,
    rank_after_rerank: int | None = None,
) -> Explanation:
    """Describe why a posting was returned for this query."""
    composite_tokens = set(tokenize(composite_text))
    matched: list[str] = []
    for token in parsed.tokens:
        if token in composite_tokens and token not in matched:
            matched.append(token)

    evidence: list[tuple[str, str]] = []

    def _add(field: str, value: str) -> None:
        if value and (field, value) not in evidence:
            evidence.append((field, value))

    if parsed.seniority_filter and canonical_seniority(posting.seniority) == parsed.seniority_filter:
        _add("seniority", posting.seniority)
    if (
        parsed.employment_filter
        and canonical_employment(posting.employment_type) == parsed.employment_filter
    ):
        _add("employment_type", posting.employment_type)
    if seed is not None:
        if seed.function and seed.function == posting.function:
            _add("function", posting.function)
        if seed.industry and seed.industry == posting.industry:
            _add("industry", posting.industry)
        if seed.seniority and seed.seniority == posting.seniority:
            _add("seniority", posting.seniority)
        if seed.employment_type and seed.employment_type == posting.employment_type:
            _add("employment_type", posting.employment_type)

    moved = (
        rank_before_rerank is not None
        and rank_after_rerank is not None
        and rank_before_rerank != rank_after_rerank
    )
    if moved:
        ranking_evidence = "reranked"
    elif w_lex * breakdown.s_lex_hat > w_sem * breakdown.s_sem_hat + DOMINANCE_MARGIN:
        ranking_evidence = "lexical"
    elif w_sem * breakdown.s_sem_hat > w_lex * breakdown.s_lex_hat + DOMINANCE_MARGIN:
        ranking_evidence = "semantic"
    else:
        ranking_evidence = "balanced"

    return Explanation(
        matched_keywords=tuple(matched),
        applied_filters=tuple(applied_filters) if not fallback_used else (),
        fallback_used=fallback_used,
        metadata_evidence=tuple(evidence),
        ranking_evidence=ranking_evidence,
    )
