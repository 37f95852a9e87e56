"""Metadata-only hybrid job recommendation.

Sparse keyword scoring and dense embedding retrieval over cleaned posting
metadata, fused per query and served with explanations.  No posting bodies,
no interaction logs, no human labels.
"""

from .artifacts import ArtifactManifest, load_artifacts, save_artifacts
from .dense import (
    DenseIndex,
    Embedder,
    HashEmbedder,
    HttpEmbeddingProvider,
    ProviderEmbedder,
    build_dense_index,
    external_embed,
    hash_embed,
    semantic_candidates,
)
from .errors import (
    ArtifactError,
    ChecksumMismatch,
    DimensionMismatch,
    EmptyCorpus,
    IndexMismatch,
    MetajobsError,
    MissingColumn,
    MissingComponent,
    ProviderUnavailable,
    UnknownDocument,
    VersionMismatch,
)
from .evaluation import (
    EvalConfig,
    EvalReport,
    RerankComparison,
    SeedResult,
    SweepRow,
    aggregate,
    compare_rerank,
    comparison_as_dict,
    format_comparison_table,
    format_report_table,
    format_sweep_table,
    grade_relevance,
    ndcg_at_k,
    precision_at_k,
    report_as_dict,
    run_protocol,
    sample_seed_ids,
    sweep,
    sweep_rows_as_csv,
)
from .explain import Explanation, explain
from .ingest import (
    CompositeDocument,
    Corpus,
    IngestReport,
    JobPosting,
    RawRecord,
    build_composite_document,
    clean_record,
    expand_abbreviations,
    ingest_corpus,
    load_dataset,
    normalize_text,
)
from .lexical import (
    SparseIndex,
    Vocabulary,
    build_sparse_index,
    lexical_scores,
    query_vector,
    tokenize,
)
from .queries import ParsedQuery, parse_query
from .ranker import (
    HttpPairScorer,
    PairScorer,
    QueryOutcome,
    RankerConfig,
    Recommendation,
    ScoreBreakdown,
    TokenOverlapScorer,
    apply_filters,
    company_diversify,
    deduplicate,
    fuse,
    metadata_bonus,
    min_max_normalize,
    recommend,
    rerank_blend,
    run_query,
)

__version__ = "0.1.0"
