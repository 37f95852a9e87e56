# Persistence and serving: save the engine to an artifact directory, load it
# back, prove the answers are identical, and exercise the HTTP API in-process.
#
# Needs the test extra (httpx) for the in-process client.
# Run from the repository root:  python3 demos/04_artifacts_and_api.py

import json
import os
import tempfile

from fastapi.testclient import TestClient

from metajobs import (
    HashEmbedder,
    RankerConfig,
    TokenOverlapScorer,
    build_dense_index,
    build_sparse_index,
    load_artifacts,
    recommend,
    save_artifacts,
)
from metajobs.dense import restore_embedder
from metajobs.artifacts import load_embedder_config
from metajobs.ingest import Corpus, JobPosting
from metajobs.service import ServiceState, create_app

postings = [
    JobPosting(0, "data analyst", "acme", "london", "open", "2024-01-01", "entry level", "analytics", "full time", "finance"),
    JobPosting(1, "insight examiner", "beta", "london", "open", "2024-01-02", "entry level", "analytics", "full time", "finance"),
    JobPosting(2, "software engineer", "acme", "remote", "open", "2024-01-03", "senior level", "engineering", "full time", "technology"),
    JobPosting(3, "data analyst", "gamma", "berlin", "open", "2024-01-04", "senior level", "analytics", "contract", "finance"),
]
corpus = Corpus.from_postings(postings)
embedder = HashEmbedder(64)
sparse = build_sparse_index(corpus.composites)
dense = build_dense_index(corpus.composites, embedder)

# Save. The manifest checksums every file; created_at is the only field that
# changes between identical builds.
directory = os.path.join(tempfile.mkdtemp(prefix="metajobs-demo-"), "artifacts")
manifest = save_artifacts(directory, corpus, sparse, dense, embedder.config())
print(f"saved {manifest.record_count} postings to {directory}")
for name, checksum in sorted(manifest.files.items()):
    print(f"  {name:14s} {checksum}")
print()

# Load and compare. Same bytes in, same ranking out.
corpus2, sparse2, dense2, _ = load_artifacts(directory)
embedder2 = restore_embedder(load_embedder_config(directory))
before = recommend("data analyst london", corpus, sparse, dense, embedder)
after = recommend("data analyst london", corpus2, sparse2, dense2, embedder2)
assert [(r.posting_id, r.breakdown) for r in before] == [(r.posting_id, r.breakdown) for r in after]
print("round trip verified: identical recommendations from loaded artifacts")
print()

# The HTTP API serves the same pipeline. Filter overrides are tri-state:
# omitted = keep what the parser found, null = force off, value = force on.
state = ServiceState(
    corpus=corpus2, sparse=sparse2, dense=dense2, embedder=embedder2,
    pair_scorer=TokenOverlapScorer(), config=RankerConfig(),
)
client = TestClient(create_app(state))

response = client.post("/api/v1/recommend", json={"query": "junior data analyst london"})
payload = response.json()
print("POST /api/v1/recommend  'junior data analyst london'")
print("  parsed_query:", json.dumps(payload["parsed_query"]))
print("  applied_filters:", payload["applied_filters"], "fallback:", payload["fallback_used"])
for result in payload["results"]:
    posting = result["posting"]
    print(
        f"  #{result['rank']} {posting['title']} @ {posting['company']}"
        f"  s_final={result['score_breakdown']['s_final']:.3f}"
        f"  matched={result['explanation']['matched_keywords']}"
    )
print()

response = client.post(
    "/api/v1/recommend",
    json={"query": "junior data analyst london", "seniority": None, "w_sem": 0.7},
)
payload = response.json()
print("same query with seniority chip dismissed and w_sem=0.7")
print("  applied_filters:", payload["applied_filters"])
print("  top hit:", payload["results"][0]["posting"]["title"])
print()

print("GET /api/v1/health ->", client.get("/api/v1/health").json())
print("GET /api/v1/jobs/2 ->", client.get("/api/v1/jobs/2").json()["title"])
