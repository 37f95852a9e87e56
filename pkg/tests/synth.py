"""Synthetic corpora shared across the test-suite.

The family corpus is built around role families whose members either use the
canonical title wording or a synonym wording (mapped back to canonical tokens
by the hash embedder's synonym table).  Distractor postings share one query
token through a metadata field, and filler postings share nothing.
"""
from __future__ import annotations

import csv

import numpy as np

from metajobs.ingest import Corpus, JobPosting

# (canonical title, synonym title, function, industry); titles avoid filter
# trigger tokens on purpose.
FAMILIES = [
    ("software engineer", "application developer", "engineering", "technology"),
    ("data analyst", "insight examiner", "analytics", "finance"),
    ("sales manager", "revenue supervisor", "sales", "retail"),
    ("product strategist", "roadmap planner", "product", "media"),
    ("registered nurse", "certified attendant", "nursing", "healthcare"),
    ("logistics coordinator", "shipping organizer", "logistics", "transport"),
    ("marketing specialist", "brand promoter", "marketing", "advertising"),
    ("tax accountant", "levy auditor", "accounting", "banking"),
    ("graphic designer", "visual artist", "design", "fashion"),
    ("science teacher", "physics instructor", "teaching", "education"),
]

SYNONYM_TABLE = {
    "application": "software",
    "developer": "engineer",
    "insight": "data",
    "examiner": "analyst",
    "revenue": "sales",
    "supervisor": "manager",
    "roadmap": "product",
    "planner": "strategist",
    "certified": "registered",
    "attendant": "nurse",
    "shipping": "logistics",
    "organizer": "coordinator",
    "brand": "marketing",
    "promoter": "specialist",
    "levy": "tax",
    "auditor": "accountant",
    "visual": "graphic",
    "artist": "designer",
    "physics": "science",
    "instructor": "teacher",
}

SENIORITIES = ("entry level", "mid senior level", "senior level", "director", "internship")
EMPLOYMENTS = ("full time", "part time", "contract", "temporary")
LOCATIONS = ("london", "berlin", "new york", "remote", "paris", "madrid")

# Filler vocabulary, checked by tests to stay clear of trigger tokens.
_FILLER_WORDS = (
    "archive", "museum", "parks", "harbor", "festival", "library", "bakery",
    "garden", "railway", "stadium", "cinema", "gallery", "market", "forest",
    "bridge", "tunnel", "observatory", "aquarium", "vineyard", "workshop",
)
_FILLER_ROLES = ("warden", "keeper", "curator", "steward", "attendee", "porter")


def make_posting(
    posting_id: int,
    title: str,
    company: str = "acme",
    location: str = "london",
    hiring_status: str = "open",
    posted_date: str = "2024-01-01",
    seniority: str = "",
    function: str = "",
    employment_type: str = "",
    industry: str = "",
) -> JobPosting:
    """A cleaned posting with short defaults, for hand-built corpora."""
    return JobPosting(
        id=posting_id,
        title=title,
        company=company,
        location=location,
        hiring_status=hiring_status,
        posted_date=posted_date,
        seniority=seniority,
        function=function,
        employment_type=employment_type,
        industry=industry,
    )


def build_family_corpus(
    n_docs: int = 500,
    canonical_per_family: int = 6,
    synonym_per_family: int = 8,
    distractors_per_family: int = 4,
    rng_seed: int = 20240817,
) -> tuple[Corpus, dict[str, str]]:
    """Deterministic corpus of families, distractors and fillers.

    Postings are interleaved by a seeded shuffle so ids carry no family
    structure, then re-numbered densely from zero.
    """
    rng = np.random.default_rng(rng_seed)
    specs: list[dict] = []
    for canonical, synonym, function, industry in FAMILIES:
        for _ in range(canonical_per_family):
            specs.append({"title": canonical, "function": function, "industry": industry})
        for _ in range(synonym_per_family):
            specs.append({"title": synonym, "function": function, "industry": industry})
        first_token = canonical.split()[0]
        for _ in range(distractors_per_family):
            specs.append(
                {
                    "title": "records clerk",
                    "company_suffix": f"{first_token} solutions",
                    "function": "operations",
                    "industry": "services",
                }
            )
    while len(specs) < n_docs:
        word = _FILLER_WORDS[len(specs) % len(_FILLER_WORDS)]
        role = _FILLER_ROLES[len(specs) % len(_FILLER_ROLES)]
        specs.append(
            {
                "title": f"{word} {role}",
                "function": "general support",
                "industry": "municipal",
            }
        )
    specs = specs[:n_docs]
    order = rng.permutation(len(specs))
    postings = []
    for new_id, spec_idx in enumerate(order):
        spec = specs[int(spec_idx)]
        company = f"company {new_id % 37}"
        if "company_suffix" in spec:
            company = spec["company_suffix"]
        postings.append(
            make_posting(
                new_id,
                spec["title"],
                company=company,
                location=LOCATIONS[new_id % len(LOCATIONS)],
                seniority=SENIORITIES[new_id % len(SENIORITIES)],
                function=spec["function"],
                employment_type=EMPLOYMENTS[new_id % len(EMPLOYMENTS)],
                industry=spec["industry"],
            )
        )
    return Corpus.from_postings(postings), dict(SYNONYM_TABLE)


def family_seed_ids(corpus: Corpus) -> dict[str, int]:
    """One canonical-title seed posting id per family (the lowest id)."""
    seeds: dict[str, int] = {}
    canonical_titles = {family[0] for family in FAMILIES}
    for posting in corpus.postings:
        if posting.title in canonical_titles and posting.title not in seeds:
            seeds[posting.title] = posting.id
    return seeds


CSV_HEADER = [
    "job_title",
    "company_name",
    "location",
    "hiring_status",
    "date",
    "seniority_level",
    "job_function",
    "employment_type",
    "industry",
]


def write_jobs_csv(path, rows: list[dict], header: list[str] | None = None) -> None:
    """Write a raw export; ``rows`` may omit columns (written as empty)."""
    header = header if header is not None else CSV_HEADER
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row.get(col, "") for col in header])


def sample_csv_rows(n: int = 30) -> list[dict]:
    """Small plausible raw export with mixed casing and punctuation."""
    titles = [
        "Software Engineer (Backend)",
        "Senior Data Analyst",
        "Sales Manager",
        "ML Engineer",
        "Product Manager - Payments",
        "QA Specialist",
        "Registered Nurse",
        "Marketing/Communications Lead",
        "Graphic Designer",
        "SWE",
    ]
    rows = []
    for i in range(n):
        rows.append(
            {
                "job_title": titles[i % len(titles)],
                "company_name": f"Company {i % 7}",
                "location": ["London", "Berlin", "New York, NY", "Remote"][i % 4],
                "hiring_status": "Open",
                "date": f"2024-03-{(i % 28) + 1:02d}",
                "seniority_level": ["Entry level", "Mid-Senior level", "Director", "Internship"][i % 4],
                "job_function": ["Engineering", "Analytics", "Sales", "Design"][i % 4],
                "employment_type": ["Full-time", "Part-time", "Contract"][i % 3],
                "industry": ["Technology", "Finance", "Retail", "Healthcare"][i % 4],
            }
        )
    return rows
