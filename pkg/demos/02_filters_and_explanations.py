# Query-side understanding: extracted filters, the zero-survivor fallback,
# filter overrides, and what the explanations report.
#
# Run from the repository root:  python3 demos/02_filters_and_explanations.py

from metajobs import (
    HashEmbedder,
    build_dense_index,
    build_sparse_index,
    parse_query,
    run_query,
)
from metajobs.ingest import Corpus, JobPosting

# Hand-built corpus: two seniorities, two work styles, three cities.
postings = [
    JobPosting(0, "data analyst", "acme", "london", "open", "2024-01-01", "entry level", "analytics", "full time", "finance"),
    JobPosting(1, "data analyst", "beta", "berlin", "open", "2024-01-02", "senior level", "analytics", "full time", "finance"),
    JobPosting(2, "data analyst", "gamma", "remote", "open", "2024-01-03", "entry level", "analytics", "contract", "finance"),
    JobPosting(3, "insight examiner", "acme", "london", "open", "2024-01-04", "entry level", "analytics", "part time", "finance"),
    JobPosting(4, "nurse", "hospital", "new york", "open", "2024-01-05", "mid senior level", "nursing", "full time", "healthcare"),
]
corpus = Corpus.from_postings(postings)
embedder = HashEmbedder(64)
sparse = build_sparse_index(corpus.composites)
dense = build_dense_index(corpus.composites, embedder)

# The parser pulls structured constraints out of free text. Trigger words
# stay in the text (they still contribute to scoring); the location hint is
# only accepted if it matches a location that actually occurs in the corpus.
for text in ("remote junior data analyst London", "part-time analyst", "nurse new york"):
    parsed = parse_query(text, corpus.location_vocabulary())
    print(f"{text!r}")
    print(f"  tokens={list(parsed.tokens)}")
    print(
        f"  work_mode={parsed.work_mode} seniority={parsed.seniority_filter}"
        f" employment={parsed.employment_filter} location={parsed.location_hint}"
    )
print()

# Filters are conjunctive. When they would empty the result list entirely,
# the ranker falls back to the unfiltered candidates and says so.
outcome = run_query("junior data analyst berlin", corpus, sparse, dense, embedder)
print("query: 'junior data analyst berlin'  (entry + berlin matches nothing)")
print(f"  fallback_used={outcome.fallback_used} applied_filters={list(outcome.applied_filters)}")
for rec in outcome.recommendations[:3]:
    print(f"  #{rec.rank} {rec.posting.title} @ {rec.posting.company} ({rec.posting.location})")
print()

# Overrides force a filter on or off regardless of what the parser saw.
# None disables a detected filter; a value injects one.
outcome = run_query(
    "junior data analyst", corpus, sparse, dense, embedder,
    filter_overrides={"seniority": None, "employment": "contract"},
)
print("same query, seniority override=None, employment override='contract'")
print(f"  applied_filters={list(outcome.applied_filters)}")
for rec in outcome.recommendations:
    print(f"  #{rec.rank} {rec.posting.title} ({rec.posting.employment_type})")
print()

# Explanations are observational: keyword overlap in query order, metadata
# evidence for filter/seed agreement, and which signal carried the result.
outcome = run_query("junior data analyst london", corpus, sparse, dense, embedder)
for rec in outcome.recommendations:
    e = rec.explanation
    print(f"#{rec.rank} {rec.posting.title} @ {rec.posting.company}")
    print(f"   matched={list(e.matched_keywords)} evidence={list(e.metadata_evidence)}")
    print(f"   ranking_evidence={e.ranking_evidence}")
