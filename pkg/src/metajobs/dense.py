"""Dense unit-vector index with exact cosine retrieval.

Document vectors are stored as float32 rows; similarity accumulation happens
in float64.  Retrieval is an exhaustive inner-product scan, so results are
exact and ties are broken by ascending posting id.  Embedders come in two
flavours: a deterministic seeded-hash embedder that needs no model downloads,
and a thin client for an external embedding provider.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np
import requests

from .errors import DimensionMismatch, EmptyCorpus, ProviderUnavailable
from .ingest import CompositeDocument
from .lexical import tokenize

MIN_DIMENSION = 8
_HASH_KEY = b"metajobs-hash-embed-v1"


@runtime_checkable
class Embedder(Protocol):
    """Anything that turns text into a unit-norm vector of fixed dimension."""

    name: str
    dimension: int

    def encode(self, text: str) -> np.ndarray: ...


def _unit(vec: np.ndarray) -> np.ndarray:
    """L2-normalize in float64; the zero vector maps to the first basis vector."""
    v = np.asarray(vec, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        out = np.zeros(v.shape[-1], dtype=np.float64)
        out[0] = 1.0
        return out
    return v / norm


def hash_embed(text: str, dimension: int, synonym_table: dict[str, str] | None = None) -> np.ndarray:
    """Deterministic bag-of-tokens embedding via a keyed blake2b hash.

    Each token (after optional synonym canonicalization) lands on one
    coordinate with a +/-1 sign; contributions accumulate and the result is
    L2-normalized.  The hash key is fixed, so output is identical across
    processes and platforms.
    """
    if dimension < MIN_DIMENSION:
        raise ValueError(f"dimension must be at least {MIN_DIMENSION}, got {dimension}")
    acc = np.zeros(dimension, dtype=np.float64)
    for token in tokenize(text):
        if synonym_table:
            token = synonym_table.get(token, token)
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=9, key=_HASH_KEY).digest()
        coord = int.from_bytes(digest[:8], "little") % dimension
        acc[coord] += 1.0 if digest[8] & 1 else -1.0
    return _unit(acc)


class HashEmbedder:
    """Index-facing wrapper around :func:`hash_embed`.

    The name encodes the synonym table (when present) so indexes built with
    different tables are not silently interchangeable.
    """

    def __init__(self, dimension: int, synonym_table: dict[str, str] | None = None):
        if dimension < MIN_DIMENSION:
            raise ValueError(f"dimension must be at least {MIN_DIMENSION}, got {dimension}")
        self.dimension = dimension
        self.synonym_table = dict(synonym_table) if synonym_table else {}
        if self.synonym_table:
            blob = json.dumps(sorted(self.synonym_table.items())).encode("utf-8")
            tag = hashlib.blake2b(blob, digest_size=4).hexdigest()
            self.name = f"hash-v1+syn{tag}"
        else:
            self.name = "hash-v1"

    def encode(self, text: str) -> np.ndarray:
        return hash_embed(text, self.dimension, self.synonym_table or None)

    def config(self) -> dict:
        return {"kind": "hash", "dimension": self.dimension, "synonyms": self.synonym_table}

    @classmethod
    def from_config(cls, config: dict) -> "HashEmbedder":
        return cls(int(config["dimension"]), config.get("synonyms") or None)


class EmbeddingProvider(Protocol):
    """External embedding source: declares its dimension, embeds text batches."""

    dimension: int

    def embed(self, texts: Sequence[str]) -> Sequence[Sequence[float]]: ...


def external_embed(provider: EmbeddingProvider, texts: Sequence[str]) -> np.ndarray:
    """Fetch provider vectors for ``texts``, validate shape, L2-normalize rows.

    Order is preserved.  Raises :class:`DimensionMismatch` when any returned
    vector disagrees with the provider's declared dimension, and lets
    :class:`ProviderUnavailable` from the transport layer propagate.
    """
    vectors = provider.embed(list(texts))
    dimension = provider.dimension
    out = np.zeros((len(vectors), dimension), dtype=np.float64)
    for row, vec in enumerate(vectors):
        arr = np.asarray(vec, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != dimension:
            raise DimensionMismatch(dimension, int(arr.shape[-1]) if arr.ndim else 0)
        out[row] = _unit(arr)
    return out


class HttpEmbeddingProvider:
    """JSON-over-HTTP embedding provider.

    Contract: ``POST url`` with ``{"texts": [...]}`` returns
    ``{"dimension": D, "vectors": [[...], ...]}``.
    """

    def __init__(self, url: str, timeout: float = 30.0, session: requests.Session | None = None):
        self.url = url
        self.timeout = timeout
        self._session = session or requests.Session()
        self._dimension: int | None = None

    @property
    def dimension(self) -> int:
        if self._dimension is None:
            self.embed([])
        assert self._dimension is not None
        return self._dimension

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        try:
            response = self._session.post(
                self.url, json={"texts": list(texts)}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"embedding provider unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ProviderUnavailable(
                f"embedding provider returned HTTP {response.status_code}"
            )
        payload = response.json()
        self._dimension = int(payload["dimension"])
        return payload["vectors"]


class ProviderEmbedder:
    """Index-facing wrapper around an :class:`EmbeddingProvider`."""

    def __init__(self, provider: EmbeddingProvider, name: str = "external"):
        self.provider = provider
        self.name = name

    @property
    def dimension(self) -> int:
        return self.provider.dimension

    def encode(self, text: str) -> np.ndarray:
        return external_embed(self.provider, [text])[0]

    def encode_batch(self, texts: Sequence[str]) -> np.ndarray:
        return external_embed(self.provider, texts)

    def config(self) -> dict:
        return {"kind": "provider", "name": self.name, "dimension": self.dimension}


def restore_embedder(config: dict, provider_url: str | None = None):
    """Rebuild a query-side embedder from its saved configuration.

    Hash embedders rebuild in place; provider embedders need the provider's
    URL again, since only the name and dimension are persisted.
    """
    kind = config.get("kind")
    if kind == "hash":
        return HashEmbedder.from_config(config)
    if kind == "provider":
        if not provider_url:
            raise ProviderUnavailable(
                "index was built with an external embedding provider; pass its URL to query it"
            )
        embedder = ProviderEmbedder(
            HttpEmbeddingProvider(provider_url), name=config.get("name", "external")
        )
        declared = int(config["dimension"])
        if embedder.dimension != declared:
            raise DimensionMismatch(declared, embedder.dimension)
        return embedder
    raise ValueError(f"unknown embedder kind in artifact: {kind!r}")


@dataclass
class DenseIndex:
    """Unit-norm document vectors; row ``i`` is posting id ``i``."""

    embedder_name: str
    dimension: int
    vectors: np.ndarray  # float32, shape (N, D)


def build_dense_index(docs: Sequence[CompositeDocument], embedder: Embedder) -> DenseIndex:
    """Encode every composite document and stack the vectors as float32 rows."""
    if not docs:
        raise EmptyCorpus("cannot build a dense index over zero documents")
    ordered = sorted(docs, key=lambda d: d.posting_id)
    for expected, doc in enumerate(ordered):
        if doc.posting_id != expected:
            raise ValueError(
                f"document ids must be dense and zero-based; found {doc.posting_id}"
            )
    texts = [doc.text for doc in ordered]
    encode_batch = getattr(embedder, "encode_batch", None)
    if encode_batch is not None:
        matrix = np.asarray(encode_batch(texts), dtype=np.float64)
    else:
        matrix = np.stack([embedder.encode(text) for text in texts])
    if matrix.shape != (len(texts), embedder.dimension):
        raise DimensionMismatch(embedder.dimension, int(matrix.shape[-1]))
    return DenseIndex(
        embedder_name=embedder.name,
        dimension=embedder.dimension,
        vectors=matrix.astype(np.float32),
    )


def semantic_candidates(
    index: DenseIndex, query_vec: np.ndarray, n_candidates: int
) -> list[tuple[int, float]]:
    """Exact top-``n_candidates`` by inner product, ties broken by ascending id."""
    if n_candidates < 1:
        raise ValueError(f"n_candidates must be positive, got {n_candidates}")
    query = np.asarray(query_vec, dtype=np.float64)
    if query.ndim != 1 or query.shape[0] != index.dimension:
        raise DimensionMismatch(index.dimension, int(query.shape[-1]) if query.ndim else 0)
    scores = index.vectors @ query  # float32 rows, float64 accumulation
    n = min(n_candidates, index.vectors.shape[0])
    order = np.argsort(-scores, kind="stable")[:n]
    return [(int(i), float(scores[i])) for i in order]
