"""Artifact persistence: build once, serve and evaluate from disk.

An artifact directory holds:

* ``corpus.jsonl``    one JSON object per posting, fixed key order
* ``vocab.tsv``       ``term \\t term_id \\t df``
* ``sparse.bin``      magic ``MJSX``, CSR arrays (row offsets, term ids, weights)
* ``dense.bin``       magic ``MJDX``, float32 row-major embedding matrix
* ``embedder.json``   how to rebuild the query-side embedder
* ``manifest.json``   format version, counts and per-file checksums

All multi-byte integers are little-endian; header counts are 64-bit
unsigned.  Checksums are 8-byte blake2b digests in hex.  Loading verifies
every checksum and fails loudly on any mismatch.
"""
from __future__ import annotations

import datetime as dt
import hashlib
import json
import logging
import os
import struct
from dataclasses import dataclass

import numpy as np

from .dense import DenseIndex
from .errors import ArtifactError, ChecksumMismatch, MissingComponent, VersionMismatch
from .ingest import Corpus, JobPosting
from .lexical import SparseIndex, Vocabulary

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
DENSE_MAGIC = b"MJDX"
SPARSE_MAGIC = b"MJSX"

CORPUS_FILE = "corpus.jsonl"
VOCAB_FILE = "vocab.tsv"
SPARSE_FILE = "sparse.bin"
DENSE_FILE = "dense.bin"
EMBEDDER_FILE = "embedder.json"
MANIFEST_FILE = "manifest.json"

_COMPONENTS = (CORPUS_FILE, VOCAB_FILE, SPARSE_FILE, DENSE_FILE, EMBEDDER_FILE)

_POSTING_KEYS = (
    "id",
    "title",
    "company",
    "location",
    "hiring_status",
    "posted_date",
    "seniority",
    "function",
    "employment_type",
    "industry",
)


@dataclass(frozen=True)
class ArtifactManifest:
    format_version: int
    created_at: str
    corpus_checksum: str
    record_count: int
    embedder_name: str
    embedding_dimension: int
    files: dict[str, str]


def checksum_bytes(data: bytes) -> str:
    """Fixed 64-bit blake2b digest, rendered as 16 hex characters."""
    return hashlib.blake2b(data, digest_size=8).hexdigest()


def checksum_file(path: str) -> str:
    digest = hashlib.blake2b(digest_size=8)
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def posting_as_dict(posting: JobPosting) -> dict:
    """Posting fields in the fixed serialization order."""
    return {key: getattr(posting, key) for key in _POSTING_KEYS}


def _corpus_jsonl(corpus: Corpus) -> bytes:
    lines = [
        json.dumps(posting_as_dict(p), ensure_ascii=False, separators=(",", ":"))
        for p in corpus.postings
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_corpus(directory: str, corpus: Corpus) -> str:
    """Write ``corpus.jsonl`` and return its checksum."""
    os.makedirs(directory, exist_ok=True)
    blob = _corpus_jsonl(corpus)
    with open(os.path.join(directory, CORPUS_FILE), "wb") as fh:
        fh.write(blob)
    return checksum_bytes(blob)


def read_corpus(directory: str) -> Corpus:
    path = os.path.join(directory, CORPUS_FILE)
    if not os.path.exists(path):
        raise MissingComponent(CORPUS_FILE)
    postings = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                postings.append(JobPosting(**{key: record[key] for key in _POSTING_KEYS}))
    return Corpus.from_postings(postings)


def _vocab_tsv(vocabulary: Vocabulary) -> bytes:
    by_id = sorted(vocabulary.term_to_id.items(), key=lambda item: item[1])
    lines = [f"{term}\t{tid}\t{int(vocabulary.df[tid])}" for term, tid in by_id]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def _sparse_bytes(index: SparseIndex) -> bytes:
    header = SPARSE_MAGIC + struct.pack(
        "<QQQQ",
        FORMAT_VERSION,
        index.num_documents,
        len(index.vocabulary),
        len(index.term_ids),
    )
    return (
        header
        + index.indptr.astype("<u8").tobytes()
        + index.term_ids.astype("<u4").tobytes()
        + index.weights.astype("<f8").tobytes()
    )


def _dense_bytes(index: DenseIndex) -> bytes:
    name = index.embedder_name.encode("utf-8")
    header = DENSE_MAGIC + struct.pack("<QQ", FORMAT_VERSION, len(name)) + name
    header += struct.pack("<QQ", index.vectors.shape[0], index.vectors.shape[1])
    return header + index.vectors.astype("<f4").tobytes(order="C")


def save_artifacts(
    directory: str,
    corpus: Corpus,
    sparse: SparseIndex,
    dense: DenseIndex,
    embedder_config: dict | None = None,
) -> ArtifactManifest:
    """Write every component plus a manifest with per-file checksums."""
    os.makedirs(directory, exist_ok=True)
    corpus_checksum = write_corpus(directory, corpus)
    blobs = {
        VOCAB_FILE: _vocab_tsv(sparse.vocabulary),
        SPARSE_FILE: _sparse_bytes(sparse),
        DENSE_FILE: _dense_bytes(dense),
        EMBEDDER_FILE: json.dumps(
            embedder_config or {"kind": "unknown"}, ensure_ascii=False, sort_keys=True
        ).encode("utf-8"),
    }
    files = {CORPUS_FILE: corpus_checksum}
    for name, blob in blobs.items():
        with open(os.path.join(directory, name), "wb") as fh:
            fh.write(blob)
        files[name] = checksum_bytes(blob)
    manifest = ArtifactManifest(
        format_version=FORMAT_VERSION,
        created_at=dt.datetime.now(dt.timezone.utc).isoformat(),
        corpus_checksum=corpus_checksum,
        record_count=len(corpus),
        embedder_name=dense.embedder_name,
        embedding_dimension=dense.dimension,
        files=files,
    )
    with open(os.path.join(directory, MANIFEST_FILE), "w", encoding="utf-8") as fh:
        json.dump(manifest.__dict__, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    logger.info("saved artifacts to %s (%d postings)", directory, len(corpus))
    return manifest


def _read_exact(fh, count: int, context: str) -> bytes:
    data = fh.read(count)
    if len(data) != count:
        raise ArtifactError(f"truncated {context}")
    return data


def _load_sparse(path: str) -> SparseIndex:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, SPARSE_FILE)
        if magic != SPARSE_MAGIC:
            raise ArtifactError(f"bad magic in {SPARSE_FILE}: {magic!r}")
        version, n, vocab_size, nnz = struct.unpack("<QQQQ", _read_exact(fh, 32, SPARSE_FILE))
        if version != FORMAT_VERSION:
            raise VersionMismatch(FORMAT_VERSION, version)
        indptr = np.frombuffer(_read_exact(fh, 8 * (n + 1), SPARSE_FILE), dtype="<u8")
        term_ids = np.frombuffer(_read_exact(fh, 4 * nnz, SPARSE_FILE), dtype="<u4")
        weights = np.frombuffer(_read_exact(fh, 8 * nnz, SPARSE_FILE), dtype="<f8")
    # df and the term list live in vocab.tsv; the caller stitches them in.
    return SparseIndex(
        vocabulary=Vocabulary(term_to_id={}, df=np.zeros(vocab_size, dtype=np.int64)),
        num_documents=int(n),
        indptr=indptr.astype(np.int64),
        term_ids=term_ids.astype(np.int32),
        weights=weights.astype(np.float64),
        idf=np.zeros(vocab_size, dtype=np.float64),
    )


def _load_dense(path: str) -> DenseIndex:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, DENSE_FILE)
        if magic != DENSE_MAGIC:
            raise ArtifactError(f"bad magic in {DENSE_FILE}: {magic!r}")
        version, name_len = struct.unpack("<QQ", _read_exact(fh, 16, DENSE_FILE))
        if version != FORMAT_VERSION:
            raise VersionMismatch(FORMAT_VERSION, version)
        name = _read_exact(fh, name_len, DENSE_FILE).decode("utf-8")
        n, d = struct.unpack("<QQ", _read_exact(fh, 16, DENSE_FILE))
        payload = _read_exact(fh, 4 * n * d, DENSE_FILE)
    vectors = np.frombuffer(payload, dtype="<f4").reshape(int(n), int(d)).astype(np.float32)
    return DenseIndex(embedder_name=name, dimension=int(d), vectors=vectors)


def _load_vocab(path: str, expected_size: int) -> Vocabulary:
    term_to_id: dict[str, int] = {}
    df = np.zeros(expected_size, dtype=np.int64)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                term, tid_text, df_text = line.split("\t")
            except ValueError as exc:
                raise ArtifactError(f"malformed line in {VOCAB_FILE}: {line!r}") from exc
            tid = int(tid_text)
            if not 0 <= tid < expected_size:
                raise ArtifactError(f"term id {tid} out of range in {VOCAB_FILE}")
            term_to_id[term] = tid
            df[tid] = int(df_text)
    if len(term_to_id) != expected_size:
        raise ArtifactError(
            f"{VOCAB_FILE} lists {len(term_to_id)} terms, sparse index expects {expected_size}"
        )
    return Vocabulary(term_to_id=term_to_id, df=df)


def load_manifest(directory: str) -> ArtifactManifest:
    path = os.path.join(directory, MANIFEST_FILE)
    if not os.path.exists(path):
        raise MissingComponent(MANIFEST_FILE)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if raw.get("format_version") != FORMAT_VERSION:
        raise VersionMismatch(FORMAT_VERSION, raw.get("format_version"))
    return ArtifactManifest(
        format_version=raw["format_version"],
        created_at=raw["created_at"],
        corpus_checksum=raw["corpus_checksum"],
        record_count=raw["record_count"],
        embedder_name=raw["embedder_name"],
        embedding_dimension=raw["embedding_dimension"],
        files=dict(raw["files"]),
    )


def load_embedder_config(directory: str) -> dict:
    path = os.path.join(directory, EMBEDDER_FILE)
    if not os.path.exists(path):
        raise MissingComponent(EMBEDDER_FILE)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_artifacts(directory: str) -> tuple[Corpus, SparseIndex, DenseIndex, ArtifactManifest]:
    """Load and cross-validate every component of an artifact directory."""
    manifest = load_manifest(directory)
    for name in _COMPONENTS:
        path = os.path.join(directory, name)
        if name not in manifest.files or not os.path.exists(path):
            raise MissingComponent(name)
        actual = checksum_file(path)
        if actual != manifest.files[name]:
            raise ChecksumMismatch(name, manifest.files[name], actual)

    corpus = read_corpus(directory)
    if len(corpus) != manifest.record_count:
        raise ArtifactError(
            f"{CORPUS_FILE} has {len(corpus)} postings, manifest says {manifest.record_count}"
        )
    sparse = _load_sparse(os.path.join(directory, SPARSE_FILE))
    vocab_size = int(sparse.vocabulary.df.shape[0])
    sparse.vocabulary = _load_vocab(os.path.join(directory, VOCAB_FILE), vocab_size)
    n = sparse.num_documents
    sparse.idf = np.log(n / (sparse.vocabulary.df.astype(np.float64) + 1.0)) if len(
        sparse.vocabulary
    ) else np.zeros(0)
    dense = _load_dense(os.path.join(directory, DENSE_FILE))
    if sparse.num_documents != len(corpus) or dense.vectors.shape[0] != len(corpus):
        raise ArtifactError("component record counts disagree")
    if dense.embedder_name != manifest.embedder_name:
        raise ArtifactError(
            f"{DENSE_FILE} was built with {dense.embedder_name!r}, "
            f"manifest says {manifest.embedder_name!r}"
        )
    if dense.dimension != manifest.embedding_dimension:
        raise ArtifactError(
            f"{DENSE_FILE} dimension {dense.dimension} disagrees with manifest "
            f"{manifest.embedding_dimension}"
        )
    logger.info("loaded artifacts from %s (%d postings)", directory, len(corpus))
    return corpus, sparse, dense, manifest
