"""Loading and cleaning of raw job postings.

Postings are consumed from a tabular export with nine required columns and
turned into normalized records plus one composite text per posting.  The
composite concatenates title (twice, to give it extra weight downstream),
company, location, seniority, function, employment type and industry.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .errors import MetajobsError, MissingColumn

REQUIRED_COLUMNS = (
    "job_title",
    "company_name",
    "location",
    "hiring_status",
    "date",
    "seniority_level",
    "job_function",
    "employment_type",
    "industry",
)

# Whole-token abbreviation expansions applied after normalization.
ABBREVIATIONS = {
    "ml": "machine learning",
    "ai": "artificial intelligence",
    "swe": "software engineer",
    "sde": "software engineer",
    "qa": "quality assurance",
    "pm": "product manager",
    "mle": "machine learning engineer",
}

# These punctuation marks usually separate meaningful units ("Sales/Marketing",
# "Analyst (Contract)"), so they become spaces; any other symbol is dropped.
_PUNCT_TO_SPACE = str.maketrans({ch: " " for ch in "/,()&-"})


@dataclass(frozen=True)
class RawRecord:
    """One row of the source table, untouched apart from cell extraction."""

    job_title: str
    company_name: str
    location: str
    hiring_status: str
    date: str
    seniority_level: str
    job_function: str
    employment_type: str
    industry: str


@dataclass(frozen=True)
class JobPosting:
    """A cleaned posting.  ``posted_date`` is kept verbatim; the rest is normalized."""

    id: int
    title: str
    company: str
    location: str
    hiring_status: str
    posted_date: str
    seniority: str
    function: str
    employment_type: str
    industry: str


@dataclass(frozen=True)
class RejectedRecord:
    """A record dropped during cleaning, with the reason it was dropped."""

    reason: str
    raw: RawRecord


@dataclass(frozen=True)
class CompositeDocument:
    """The scoring text for one posting."""

    posting_id: int
    text: str


@dataclass
class IngestReport:
    """Counts for one ingest run; ``raw_count == cleaned_count + removed_count``."""

    raw_count: int = 0
    cleaned_count: int = 0
    removed_count: int = 0
    removal_reasons: dict[str, int] = field(default_factory=dict)


def normalize_text(raw: str) -> str:
    """Lowercase, map ``/,()&-`` to spaces, drop other symbols, collapse whitespace."""
    text = raw.lower().translate(_PUNCT_TO_SPACE)
    text = "".join(ch for ch in text if ch.isalnum() or ch.isspace())
    return " ".join(text.split())


def expand_abbreviations(normalized: str) -> str:
    """Expand whole-token abbreviations (ml, ai, swe, ...) in normalized text.

    Applied once, left to right; expansions never produce further
    abbreviation tokens, so the operation is idempotent.
    """
    return " ".join(ABBREVIATIONS.get(tok, tok) for tok in normalized.split())


def _clean_field(value: str) -> str:
    return expand_abbreviations(normalize_text(value))


def clean_record(raw: RawRecord, posting_id: int = -1) -> JobPosting | RejectedRecord:
    """Normalize a raw record into a posting, or reject it.

    A record is rejected when its cleaned title is empty (``empty_title`` if
    the source cell was already blank, ``noisy_title`` if cleaning removed
    everything), shorter than two characters, or free of alphabetic
    characters.
    """
    title = _clean_field(raw.job_title)
    if not title:
        reason = "empty_title" if not raw.job_title.strip() else "noisy_title"
        return RejectedRecord(reason, raw)
    if len(title) < 2 or not any(ch.isalpha() for ch in title):
        return RejectedRecord("noisy_title", raw)
    return JobPosting(
        id=posting_id,
        title=title,
        company=_clean_field(raw.company_name),
        location=_clean_field(raw.location),
        hiring_status=_clean_field(raw.hiring_status),
        posted_date=raw.date,
        seniority=_clean_field(raw.seniority_level),
        function=_clean_field(raw.job_function),
        employment_type=_clean_field(raw.employment_type),
        industry=_clean_field(raw.industry),
    )


def build_composite_document(posting: JobPosting) -> CompositeDocument:
    """Join the scoring fields (title twice) with single spaces, skipping empties."""
    parts = [
        posting.title,
        posting.title,
        posting.company,
        posting.location,
        posting.seniority,
        posting.function,
        posting.employment_type,
        posting.industry,
    ]
    return CompositeDocument(posting_id=posting.id, text=" ".join(p for p in parts if p))


def load_dataset(path: str, fmt: str = "csv") -> tuple[list[RawRecord], IngestReport]:
    """Read raw records from ``path``.

    Column names are matched case-insensitively after trimming; extra columns
    are ignored.  Rows with more cells than the header are counted as parse
    errors and skipped; short rows are padded with empty cells.  The returned
    report covers only this stage (parse errors), to be completed by
    :func:`ingest_corpus`.
    """
    if fmt != "csv":
        raise ValueError(f"unsupported input format: {fmt!r}")
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MetajobsError(f"input file has no header row: {path}") from None
        positions: dict[str, int] = {}
        for idx, name in enumerate(header):
            positions.setdefault(name.strip().lower(), idx)
        for name in REQUIRED_COLUMNS:
            if name not in positions:
                raise MissingColumn(name)
        records: list[RawRecord] = []
        parse_errors = 0
        raw_count = 0
        for row in reader:
            raw_count += 1
            if len(row) > len(header):
                parse_errors += 1
                continue
            if len(row) < len(header):
                row = row + [""] * (len(header) - len(row))
            records.append(RawRecord(*(row[positions[name]] for name in REQUIRED_COLUMNS)))
    reasons = {"parse_error": parse_errors} if parse_errors else {}
    report = IngestReport(
        raw_count=raw_count,
        cleaned_count=len(records),
        removed_count=parse_errors,
        removal_reasons=reasons,
    )
    return records, report


@dataclass
class Corpus:
    """Cleaned postings plus their composite documents, ids dense from zero."""

    postings: list[JobPosting]
    composites: list[CompositeDocument]
    _locations: frozenset[str] | None = field(default=None, init=False, repr=False)

    def __len__(self) -> int:
        return len(self.postings)

    def posting(self, posting_id: int) -> JobPosting:
        if not 0 <= posting_id < len(self.postings):
            from .errors import UnknownDocument

            raise UnknownDocument(posting_id)
        return self.postings[posting_id]

    def location_vocabulary(self) -> frozenset[str]:
        """Distinct non-empty posting locations, used for query location hints."""
        if self._locations is None:
            self._locations = frozenset(p.location for p in self.postings if p.location)
        return self._locations

    @classmethod
    def from_postings(cls, postings: list[JobPosting]) -> "Corpus":
        """Build a corpus from already-cleaned postings with dense zero-based ids."""
        for expected, posting in enumerate(postings):
            if posting.id != expected:
                raise ValueError(
                    f"posting ids must be dense and zero-based; found {posting.id} at row {expected}"
                )
        return cls(
            postings=list(postings),
            composites=[build_composite_document(p) for p in postings],
        )


def ingest_corpus(path: str, fmt: str = "csv") -> tuple[Corpus, IngestReport]:
    """Load, clean and number postings from a tabular export."""
    records, partial = load_dataset(path, fmt=fmt)
    reasons = dict(partial.removal_reasons)
    postings: list[JobPosting] = []
    for raw in records:
        result = clean_record(raw, posting_id=len(postings))
        if isinstance(result, RejectedRecord):
            reasons[result.reason] = reasons.get(result.reason, 0) + 1
        else:
            postings.append(result)
    removed = partial.raw_count - len(postings)
    report = IngestReport(
        raw_count=partial.raw_count,
        cleaned_count=len(postings),
        removed_count=removed,
        removal_reasons=reasons,
    )
    assert report.raw_count == report.cleaned_count + report.removed_count
    return Corpus.from_postings(postings), report
