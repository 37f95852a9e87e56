"""Offline evaluation without human labels.

Each sampled seed posting is turned into a query from its own title, the
ranker answers, and the results are graded purely from metadata agreement
with the seed: 3 for the same normalized title, 2 for the same function or
industry, 1 for the same seniority or employment type, 0 otherwise.  From
the graded lists we report precision@k and nDCG@k with mean and population
standard deviation across seeds.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .dense import DenseIndex, Embedder
from .ingest import Corpus, JobPosting
from .lexical import SparseIndex
from .ranker import PairScorer, RankerConfig, recommend

DEFAULT_SWEEP_CANDIDATES = (80, 150, 250)
DEFAULT_SWEEP_WEIGHTS = ((0.7, 0.3), (0.6, 0.4), (0.5, 0.5), (0.4, 0.6))

SWEEP_CSV_HEADER = ("candidates", "w_sem", "w_lex", "p_at_10", "ndcg_at_10")


def grade_relevance(seed: JobPosting, candidate: JobPosting) -> int:
    """Metadata agreement grade in {0, 1, 2, 3}; empty fields never match."""
    if seed.title and seed.title == candidate.title:
        return 3
    if (seed.function and seed.function == candidate.function) or (
        seed.industry and seed.industry == candidate.industry
    ):
        return 2
    if (seed.seniority and seed.seniority == candidate.seniority) or (
        seed.employment_type and seed.employment_type == candidate.employment_type
    ):
        return 1
    return 0


def precision_at_k(grades: Sequence[int], k: int) -> float:
    """Fraction of the first ``k`` ranks with grade >= 2; short lists pad with 0."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    hits = sum(1 for g in grades[:k] if g >= 2)
    return hits / k


def _dcg(grades: Sequence[int], k: int) -> float:
    return sum((2.0**g - 1.0) / math.log2(i + 1.0) for i, g in enumerate(grades[:k], start=1))


def ndcg_at_k(grades: Sequence[int], k: int) -> float:
    """DCG against the ideal ordering of this list's own grades; 0 when all grades are 0."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    ideal = sorted(grades, reverse=True)
    idcg = _dcg(ideal, k)
    if idcg == 0.0:
        return 0.0
    return _dcg(grades, k) / idcg


@dataclass(frozen=True)
class EvalConfig:
    """Protocol settings; the RNG seed is mandatory so runs are reproducible."""

    rng_seed: int
    n_seeds: int = 500
    k: int = 10
    ranker: RankerConfig = field(default_factory=RankerConfig)
    exclude_seed_itself: bool = True


@dataclass(frozen=True)
class SeedResult:
    seed_id: int
    grades: tuple[int, ...]
    precision: float
    ndcg: float


@dataclass(frozen=True)
class EvalReport:
    mean_precision_at_k: float
    std_precision_at_k: float
    mean_ndcg_at_k: float
    std_ndcg_at_k: float
    k: int
    per_seed: tuple[SeedResult, ...]


@dataclass(frozen=True)
class SweepRow:
    candidates: int
    w_sem: float
    w_lex: float
    p_at_10: float
    ndcg_at_10: float


@dataclass(frozen=True)
class RerankComparison:
    baseline: EvalReport
    reranked: EvalReport
    delta_precision: float
    delta_ndcg: float


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    # math.fsum is exactly rounded, so aggregation does not depend on the
    # order of the per-seed records.
    n = len(values)
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(variance)


def aggregate(per_seed: Sequence[SeedResult], k: int) -> EvalReport:
    """Fold per-seed results into a report; permutation-invariant."""
    if not per_seed:
        raise ValueError("cannot aggregate zero seed results")
    mp, sp = _mean_std([r.precision for r in per_seed])
    mn, sn = _mean_std([r.ndcg for r in per_seed])
    return EvalReport(
        mean_precision_at_k=mp,
        std_precision_at_k=sp,
        mean_ndcg_at_k=mn,
        std_ndcg_at_k=sn,
        k=k,
        per_seed=tuple(per_seed),
    )


def sample_seed_ids(corpus_size: int, eval_cfg: EvalConfig) -> list[int]:
    """Sample seed posting ids uniformly without replacement."""
    if eval_cfg.n_seeds < 1:
        raise ValueError(f"n_seeds must be positive, got {eval_cfg.n_seeds}")
    if eval_cfg.n_seeds > corpus_size:
        raise ValueError(
            f"n_seeds={eval_cfg.n_seeds} exceeds corpus size {corpus_size}"
        )
    rng = np.random.default_rng(eval_cfg.rng_seed)
    return [int(i) for i in rng.choice(corpus_size, size=eval_cfg.n_seeds, replace=False)]


def run_protocol(
    corpus: Corpus,
    sparse: SparseIndex,
    dense: DenseIndex,
    embedder: Embedder,
    eval_cfg: EvalConfig,
    pair_scorer: PairScorer | None = None,
) -> EvalReport:
    """Evaluate the ranker over sampled seed postings."""
    seed_ids = sample_seed_ids(len(corpus), eval_cfg)
    results = []
    for seed_id in seed_ids:
        seed = corpus.posting(seed_id)
        recs = recommend(
            seed.title,
            corpus,
            sparse,
            dense,
            embedder,
            pair_scorer,
            eval_cfg.ranker,
            seed=seed,
            exclude_ids=(seed_id,) if eval_cfg.exclude_seed_itself else (),
        )
        grades = tuple(grade_relevance(seed, rec.posting) for rec in recs)
        results.append(
            SeedResult(
                seed_id=seed_id,
                grades=grades,
                precision=precision_at_k(grades, eval_cfg.k),
                ndcg=ndcg_at_k(grades, eval_cfg.k),
            )
        )
    return aggregate(results, eval_cfg.k)


def sweep(
    corpus: Corpus,
    sparse: SparseIndex,
    dense: DenseIndex,
    embedder: Embedder,
    eval_cfg: EvalConfig,
    candidate_sizes: Sequence[int] = DEFAULT_SWEEP_CANDIDATES,
    weight_pairs: Sequence[tuple[float, float]] = DEFAULT_SWEEP_WEIGHTS,
) -> list[SweepRow]:
    """Grid of candidate-pool sizes by fusion weights; same seed sample per cell."""
    rows = []
    for candidates in candidate_sizes:
        for w_sem, w_lex in weight_pairs:
            cell_cfg = replace(
                eval_cfg,
                ranker=replace(
                    eval_cfg.ranker, n_candidates=candidates, w_sem=w_sem, w_lex=w_lex
                ),
            )
            report = run_protocol(corpus, sparse, dense, embedder, cell_cfg)
            rows.append(
                SweepRow(
                    candidates=candidates,
                    w_sem=w_sem,
                    w_lex=w_lex,
                    p_at_10=report.mean_precision_at_k,
                    ndcg_at_10=report.mean_ndcg_at_k,
                )
            )
    return rows


def compare_rerank(
    corpus: Corpus,
    sparse: SparseIndex,
    dense: DenseIndex,
    embedder: Embedder,
    pair_scorer: PairScorer,
    eval_cfg: EvalConfig,
) -> RerankComparison:
    """Same protocol twice: fusion-only versus pair-scorer re-ranking on top."""
    base_cfg = replace(eval_cfg, ranker=replace(eval_cfg.ranker, rerank_enabled=False))
    rerank_cfg = replace(
        eval_cfg,
        ranker=replace(eval_cfg.ranker, rerank_enabled=True, rerank_alpha=0.7, rerank_pool=100),
    )
    baseline = run_protocol(corpus, sparse, dense, embedder, base_cfg)
    reranked = run_protocol(corpus, sparse, dense, embedder, rerank_cfg, pair_scorer=pair_scorer)
    return RerankComparison(
        baseline=baseline,
        reranked=reranked,
        delta_precision=reranked.mean_precision_at_k - baseline.mean_precision_at_k,
        delta_ndcg=reranked.mean_ndcg_at_k - baseline.mean_ndcg_at_k,
    )


def report_as_dict(report: EvalReport) -> dict:
    """JSON-ready view of a report, including every per-seed record."""
    return {
        "k": report.k,
        "mean_precision_at_k": report.mean_precision_at_k,
        "std_precision_at_k": report.std_precision_at_k,
        "mean_ndcg_at_k": report.mean_ndcg_at_k,
        "std_ndcg_at_k": report.std_ndcg_at_k,
        "per_seed": [
            {
                "seed_id": r.seed_id,
                "grades": list(r.grades),
                "precision": r.precision,
                "ndcg": r.ndcg,
            }
            for r in report.per_seed
        ],
    }


def format_report_table(report: EvalReport) -> str:
    """Small aligned table with mean and spread of both metrics."""
    rows = [
        ("metric", "mean", "std"),
        (f"p_at_{report.k}", f"{report.mean_precision_at_k:.4f}", f"{report.std_precision_at_k:.4f}"),
        (f"ndcg_at_{report.k}", f"{report.mean_ndcg_at_k:.4f}", f"{report.std_ndcg_at_k:.4f}"),
    ]
    widths = [max(len(row[col]) for row in rows) for col in range(3)]
    lines = ["  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row)) for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + f"\n(seeds: {len(report.per_seed)})"


def sweep_rows_as_csv(rows: Sequence[SweepRow]) -> str:
    """Machine-readable sweep output with a fixed header."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for row in rows:
        writer.writerow([row.candidates, row.w_sem, row.w_lex, row.p_at_10, row.ndcg_at_10])
    return buffer.getvalue()


def format_sweep_table(rows: Sequence[SweepRow]) -> str:
    cells = [SWEEP_CSV_HEADER] + [
        (
            str(row.candidates),
            f"{row.w_sem:.1f}",
            f"{row.w_lex:.1f}",
            f"{row.p_at_10:.4f}",
            f"{row.ndcg_at_10:.4f}",
        )
        for row in rows
    ]
    widths = [max(len(row[col]) for row in cells) for col in range(5)]
    lines = ["  ".join(cell.rjust(widths[col]) for col, cell in enumerate(row)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def comparison_as_dict(comparison: RerankComparison) -> dict:
    return {
        "baseline": report_as_dict(comparison.baseline),
        "reranked": report_as_dict(comparison.reranked),
        "delta_precision": comparison.delta_precision,
        "delta_ndcg": comparison.delta_ndcg,
    }


def format_comparison_table(comparison: RerankComparison) -> str:
    base, rr = comparison.baseline, comparison.reranked
    rows = [
        ("arm", f"p_at_{base.k}", f"ndcg_at_{base.k}"),
        ("fusion-only", f"{base.mean_precision_at_k:.4f} ± {base.std_precision_at_k:.4f}",
         f"{base.mean_ndcg_at_k:.4f} ± {base.std_ndcg_at_k:.4f}"),
        ("reranked", f"{rr.mean_precision_at_k:.4f} ± {rr.std_precision_at_k:.4f}",
         f"{rr.mean_ndcg_at_k:.4f} ± {rr.std_ndcg_at_k:.4f}"),
        ("delta", f"{comparison.delta_precision:+.4f}", f"{comparison.delta_ndcg:+.4f}"),
    ]
    widths = [max(len(row[col]) for row in rows) for col in range(3)]
    lines = ["  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row)) for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
