from types import SimpleNamespace

import pytest

from metajobs import HashEmbedder, build_dense_index, build_sparse_index
from synth import build_family_corpus


@pytest.fixture(scope="session")
def family_engine():
    """Fully indexed 500-posting family corpus, built once per session."""
    corpus, synonyms = build_family_corpus()
    embedder = HashEmbedder(128, synonyms)
    return SimpleNamespace(
        corpus=corpus,
        synonyms=synonyms,
        embedder=embedder,
        sparse=build_sparse_index(corpus.composites),
        dense=build_dense_index(corpus.composites, embedder),
    )
