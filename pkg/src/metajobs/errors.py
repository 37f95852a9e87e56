"""Exception types shared across the package."""
from __future__ import annotations


class MetajobsError(Exception):
    """Base class for every domain error raised by this package."""


class MissingColumn(MetajobsError):
    """A required column is absent from the input file."""

    def __init__(self, name: str):
        super().__init__(f"required column missing from input: {name!r}")
        self.name = name


class EmptyCorpus(MetajobsError):
    """An index was requested over zero documents."""


class UnknownDocument(MetajobsError):
    """A document id falls outside the corpus."""

    def __init__(self, doc_id: int):
        super().__init__(f"unknown document id: {doc_id}")
        self.doc_id = doc_id


class DimensionMismatch(MetajobsError):
    """A vector's dimensionality disagrees with the index or provider."""

    def __init__(self, expected: int, got: int):
        super().__init__(f"embedding dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class ProviderUnavailable(MetajobsError):
    """An external scoring or embedding provider could not be reached."""


class IndexMismatch(MetajobsError):
    """Sparse and dense indexes disagree on corpus size or embedder identity."""


class ArtifactError(MetajobsError):
    """Base class for artifact persistence failures."""


class MissingComponent(ArtifactError):
    """An artifact directory lacks one of its required files."""

    def __init__(self, name: str):
        super().__init__(f"artifact component missing: {name}")
        self.name = name


class ChecksumMismatch(ArtifactError):
    """An artifact file does not match the checksum recorded in the manifest."""

    def __init__(self, name: str, expected: str, got: str):
        super().__init__(
            f"checksum mismatch for {name}: manifest says {expected}, file has {got}"
        )
        self.name = name
        self.expected = expected
        self.got = got


class VersionMismatch(ArtifactError):
    """An artifact was written by an unsupported format version."""

    def __init__(self, supported: int, found: object):
        super().__init__(f"unsupported artifact format version {found!r} (supported: {supported})")
        self.supported = supported
        self.found = found
