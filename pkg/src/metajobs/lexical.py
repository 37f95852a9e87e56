"""Sparse keyword index over composite documents.

Term weights follow ``tf(t, d) * ln(N / (df(t) + 1))`` with raw in-document
counts.  The ``+ 1`` smoothing makes the weight of a term present in every
document slightly negative; such weights are stored as-is rather than
clamped.  Query terms are weighted the same way, and a document's keyword
score is the sparse dot product of the two vectors.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyCorpus, UnknownDocument
from .ingest import CompositeDocument


def tokenize(text: str) -> list[str]:
    """Split normalized text on whitespace; no stemming or stop-word removal."""
    return text.split()


@dataclass
class Vocabulary:
    """Corpus terms with dense ids (sorted term order) and document frequencies."""

    term_to_id: dict[str, int]
    df: np.ndarray  # int64, df[term_id] = number of documents containing the term

    def __len__(self) -> int:
        return len(self.term_to_id)


@dataclass
class SparseIndex:
    """Per-document weight vectors in CSR form; row ``i`` is posting id ``i``."""

    vocabulary: Vocabulary
    num_documents: int
    indptr: np.ndarray  # int64, len N + 1
    term_ids: np.ndarray  # int32, strictly increasing within each row
    weights: np.ndarray  # float64
    idf: np.ndarray  # float64, idf[term_id] = ln(N / (df + 1))


def _sorted_documents(docs: Sequence[CompositeDocument]) -> list[CompositeDocument]:
    ordered = sorted(docs, key=lambda d: d.posting_id)
    for expected, doc in enumerate(ordered):
        if doc.posting_id != expected:
            raise ValueError(
                f"document ids must be dense and zero-based; found {doc.posting_id}"
            )
    return ordered


def build_sparse_index(docs: Sequence[CompositeDocument]) -> SparseIndex:
    """Count terms, derive idf and assemble per-document weight rows."""
    if not docs:
        raise EmptyCorpus("cannot build a sparse index over zero documents")
    ordered = _sorted_documents(docs)
    n = len(ordered)
    counts = [Counter(tokenize(doc.text)) for doc in ordered]
    terms = sorted(set().union(*counts)) if counts else []
    term_to_id = {term: tid for tid, term in enumerate(terms)}
    df = np.zeros(len(terms), dtype=np.int64)
    for doc_counts in counts:
        for term in doc_counts:
            df[term_to_id[term]] += 1
    idf = np.log(n / (df.astype(np.float64) + 1.0)) if len(terms) else np.zeros(0)

    indptr = np.zeros(n + 1, dtype=np.int64)
    ids_out: list[int] = []
    weights_out: list[float] = []
    for row, doc_counts in enumerate(counts):
        row_ids = sorted(term_to_id[t] for t in doc_counts)
        for tid in row_ids:
            ids_out.append(tid)
            weights_out.append(doc_counts[terms[tid]] * idf[tid])
        indptr[row + 1] = len(ids_out)
    return SparseIndex(
        vocabulary=Vocabulary(term_to_id=term_to_id, df=df),
        num_documents=n,
        indptr=indptr,
        term_ids=np.asarray(ids_out, dtype=np.int32),
        weights=np.asarray(weights_out, dtype=np.float64),
        idf=idf,
    )


def query_vector(index: SparseIndex, tokens: Iterable[str]) -> dict[int, float]:
    """Weight query tokens like document terms; out-of-vocabulary tokens drop out."""
    counts = Counter(tokens)
    vec: dict[int, float] = {}
    for term, tf in counts.items():
        tid = index.vocabulary.term_to_id.get(term)
        if tid is not None:
            vec[tid] = tf * float(index.idf[tid])
    return vec


def lexical_scores(
    index: SparseIndex, query_vec: dict[int, float], candidate_ids: Sequence[int]
) -> np.ndarray:
    """Sparse dot product of the query vector against each candidate row.

    Candidates sharing no term with the query score exactly 0.0.
    """
    dense_query = np.zeros(len(index.vocabulary), dtype=np.float64)
    for tid, weight in query_vec.items():
        dense_query[tid] = weight
    scores = np.zeros(len(candidate_ids), dtype=np.float64)
    for out, doc_id in enumerate(candidate_ids):
        if not 0 <= doc_id < index.num_documents:
            raise UnknownDocument(doc_id)
        lo, hi = index.indptr[doc_id], index.indptr[doc_id + 1]
        if lo == hi:
            continue
        # The trailing + 0.0 turns a possible -0.0 (all products negative zero)
        # into a plain 0.0 and leaves every other value untouched.
        scores[out] = float(np.dot(index.weights[lo:hi], dense_query[index.term_ids[lo:hi]])) + 0.0
    return scores
