# End-to-end walkthrough: raw CSV -> cleaned corpus -> indexes -> ranked results.
#
# Run from the repository root:  python3 demos/01_build_and_query.py

import csv
import tempfile
import os

from metajobs import (
    HashEmbedder,
    build_dense_index,
    build_sparse_index,
    ingest_corpus,
    recommend,
)

# A small raw export. Deliberately messy: mixed casing, punctuation,
# abbreviations, one row with a blank title and one with a junk title.
header = [
    "job_title", "company_name", "location", "hiring_status", "date",
    "seniority_level", "job_function", "employment_type", "industry",
]
rows = [
    ["Data Analyst", "Acme Corp", "London", "open", "2024-01-02", "Entry level", "Analytics", "Full-time", "Finance"],
    ["Senior Data Analyst", "Acme Corp", "London", "open", "2024-01-03", "Senior level", "Analytics", "Full-time", "Finance"],
    ["Insight Examiner", "Beta Ltd", "London", "open", "2024-01-04", "Entry level", "Analytics", "Full-time", "Finance"],
    ["Data Analyst", "Gamma GmbH", "Berlin", "open", "2024-01-05", "Entry level", "Analytics", "Contract", "Retail"],
    ["SWE", "Acme Corp", "Remote", "open", "2024-01-06", "Mid-Senior level", "Engineering", "Full-time", "Technology"],
    ["ML Engineer", "Beta Ltd", "Remote", "open", "2024-01-07", "Senior level", "Engineering", "Full-time", "Technology"],
    ["Registered Nurse", "City Hospital", "London", "open", "2024-01-08", "Mid-Senior level", "Nursing", "Part-time", "Healthcare"],
    ["Sales Manager (EMEA)", "Acme Corp", "Paris", "open", "2024-01-09", "Director", "Sales", "Full-time", "Retail"],
    ["", "Vanish Inc", "London", "open", "2024-01-10", "", "", "", ""],
    ["###", "Noise Inc", "London", "open", "2024-01-11", "", "", "", ""],
]

workdir = tempfile.mkdtemp(prefix="metajobs-demo-")
csv_path = os.path.join(workdir, "jobs.csv")
with open(csv_path, "w", newline="", encoding="utf-8") as fh:
    writer = csv.writer(fh)
    writer.writerow(header)
    writer.writerows(rows)

# Ingestion normalizes text, expands abbreviations (swe -> software engineer),
# drops unusable rows, and reports what it removed and why.
corpus, report = ingest_corpus(csv_path)
print(f"raw rows: {report.raw_count}, kept: {report.cleaned_count}, removed: {report.removed_count}")
print("removal reasons:", report.removal_reasons)
print()

# Each posting becomes one composite text document; the title appears twice
# so it dominates both the keyword weights and the embedding.
print("composite for posting 0:")
print(" ", corpus.composites[0].text)
print()

# Two indexes over the same composites: CSR TF-IDF and unit-norm embeddings.
embedder = HashEmbedder(128)
sparse = build_sparse_index(corpus.composites)
dense = build_dense_index(corpus.composites, embedder)
print(f"vocabulary: {len(sparse.vocabulary)} terms, embeddings: {dense.vectors.shape}")
print()

# Query. "swe" expands to "software engineer" before any matching happens.
for query in ("data analyst london", "swe", "remote ml engineer"):
    print(f"query: {query!r}")
    for rec in recommend(query, corpus, sparse, dense, embedder):
        b = rec.breakdown
        print(
            f"  #{rec.rank} [{b.s_final:.3f}] {rec.posting.title} @ {rec.posting.company}"
            f" ({rec.posting.location})  sem={b.s_sem_hat:.2f} lex={b.s_lex_hat:.2f}"
            f"  matched={list(rec.explanation.matched_keywords)}"
        )
    print()
