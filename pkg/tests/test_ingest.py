import numpy as np
import pytest

from metajobs import MissingColumn, ingest_corpus, load_dataset
from metajobs.ingest import (
    Corpus,
    JobPosting,
    RawRecord,
    RejectedRecord,
    build_composite_document,
    clean_record,
    expand_abbreviations,
    normalize_text,
)
from synth import CSV_HEADER, sample_csv_rows, write_jobs_csv


def _raw(title, **overrides):
    fields = {
        "job_title": title,
        "company_name": "Acme",
        "location": "London",
        "hiring_status": "Open",
        "date": "2024-01-05",
        "seniority_level": "Entry level",
        "job_function": "Analytics",
        "employment_type": "Full-time",
        "industry": "Finance",
    }
    fields.update(overrides)
    return RawRecord(**fields)


def test_normalize_text_examples():
    """Punctuation from the separator set becomes a space, the rest is dropped."""
    assert normalize_text("Sr. Software Eng.  (Remote)") == "sr software eng remote"
    assert normalize_text("Sales/Marketing Lead") == "sales marketing lead"
    assert normalize_text("C++ Developer") == "c developer"


def test_normalize_text_hyphen_becomes_space():
    assert normalize_text("Full-time") == "full time"


def test_expand_abbreviations_examples():
    assert expand_abbreviations("ml engineer") == "machine learning engineer"
    assert expand_abbreviations("senior swe") == "senior software engineer"
    assert expand_abbreviations("html developer") == "html developer"


def test_expand_abbreviations_idempotent():
    """No expansion output contains an abbreviation token."""
    for token in ("ml", "ai", "swe", "sde", "qa", "pm", "mle"):
        once = expand_abbreviations(token)
        assert expand_abbreviations(once) == once


def test_clean_record_normalizes_fields():
    posting = clean_record(_raw("SWE"), posting_id=0)
    assert isinstance(posting, JobPosting)
    assert posting.title == "software engineer"
    assert posting.company == "acme"
    assert posting.employment_type == "full time"
    assert posting.posted_date == "2024-01-05"  # kept verbatim


def test_clean_record_rejects_empty_title():
    rejected = clean_record(_raw(""))
    assert isinstance(rejected, RejectedRecord)
    assert rejected.reason == "empty_title"


def test_clean_record_rejects_noisy_title():
    rejected = clean_record(_raw("###"))
    assert isinstance(rejected, RejectedRecord)
    assert rejected.reason == "noisy_title"


def test_clean_record_rejects_single_character_title():
    rejected = clean_record(_raw("x"))
    assert isinstance(rejected, RejectedRecord)
    assert rejected.reason == "noisy_title"


def test_clean_record_rejects_all_digit_title():
    rejected = clean_record(_raw("12345"))
    assert isinstance(rejected, RejectedRecord)
    assert rejected.reason == "noisy_title"


def test_composite_document_repeats_title():
    posting = JobPosting(
        id=0,
        title="data analyst",
        company="acme",
        location="london",
        hiring_status="open",
        posted_date="2024-01-01",
        seniority="entry level",
        function="analytics",
        employment_type="full-time",
        industry="finance",
    )
    doc = build_composite_document(posting)
    assert doc.text == "data analyst data analyst acme london entry level analytics full-time finance"
    assert doc.text.count("data analyst") == 2


def test_composite_document_skips_empty_fields():
    posting = JobPosting(
        id=3,
        title="clerk",
        company="",
        location="paris",
        hiring_status="",
        posted_date="",
        seniority="",
        function="",
        employment_type="",
        industry="",
    )
    doc = build_composite_document(posting)
    assert doc.text == "clerk clerk paris"
    assert "  " not in doc.text


def test_load_dataset_case_insensitive_headers(tmp_path):
    path = tmp_path / "jobs.csv"
    header = [name.upper() for name in CSV_HEADER]
    write_jobs_csv(path, sample_csv_rows(5), header=header)
    records, report = load_dataset(str(path))
    assert len(records) == 5
    assert report.raw_count == 5
    assert report.removal_reasons == {}


def test_load_dataset_missing_column(tmp_path):
    path = tmp_path / "jobs.csv"
    header = [name for name in CSV_HEADER if name != "industry"]
    write_jobs_csv(path, sample_csv_rows(3), header=header)
    with pytest.raises(MissingColumn) as excinfo:
        load_dataset(str(path))
    assert excinfo.value.name == "industry"


def test_load_dataset_counts_broken_rows(tmp_path):
    path = tmp_path / "jobs.csv"
    write_jobs_csv(path, sample_csv_rows(4))
    with open(path, "a", encoding="utf-8") as fh:
        fh.write("a,b,c,d,e,f,g,h,i,extra,cells\n")
    records, report = load_dataset(str(path))
    assert len(records) == 4
    assert report.raw_count == 5
    assert report.removal_reasons == {"parse_error": 1}


def test_load_dataset_pads_short_rows(tmp_path):
    path = tmp_path / "jobs.csv"
    write_jobs_csv(path, sample_csv_rows(1))
    with open(path, "a", encoding="utf-8") as fh:
        fh.write("Backend Engineer,Acme\n")
    records, _ = load_dataset(str(path))
    assert records[-1].job_title == "Backend Engineer"
    assert records[-1].industry == ""


def test_ingest_corpus_conservation(tmp_path):
    """raw_count always equals cleaned_count plus removed_count."""
    rows = sample_csv_rows(20)
    rows[3]["job_title"] = ""
    rows[7]["job_title"] = "###"
    rows[11]["job_title"] = "--"
    path = tmp_path / "jobs.csv"
    write_jobs_csv(path, rows)
    corpus, report = ingest_corpus(str(path))
    assert report.raw_count == 20
    assert report.cleaned_count == len(corpus) == 17
    assert report.raw_count == report.cleaned_count + report.removed_count
    assert report.removal_reasons == {"empty_title": 1, "noisy_title": 2}


def test_ingest_corpus_ids_dense(tmp_path):
    path = tmp_path / "jobs.csv"
    write_jobs_csv(path, sample_csv_rows(12))
    corpus, _ = ingest_corpus(str(path))
    assert [p.id for p in corpus.postings] == list(range(len(corpus)))
    assert [d.posting_id for d in corpus.composites] == list(range(len(corpus)))


def test_ingest_corpus_deterministic(tmp_path):
    path = tmp_path / "jobs.csv"
    write_jobs_csv(path, sample_csv_rows(15))
    first, report_a = ingest_corpus(str(path))
    second, report_b = ingest_corpus(str(path))
    assert first.postings == second.postings
    assert report_a == report_b


def test_corpus_location_vocabulary(tmp_path):
    path = tmp_path / "jobs.csv"
    write_jobs_csv(path, sample_csv_rows(8))
    corpus, _ = ingest_corpus(str(path))
    vocabulary = corpus.location_vocabulary()
    assert "london" in vocabulary
    assert all(loc == loc.lower() for loc in vocabulary)


def test_corpus_from_postings_rejects_sparse_ids():
    posting = JobPosting(
        id=5,
        title="clerk",
        company="",
        location="",
        hiring_status="",
        posted_date="",
        seniority="",
        function="",
        employment_type="",
        industry="",
    )
    with pytest.raises(ValueError):
        Corpus.from_postings([posting])


class TestNormalizationProperties:
    def test_normalize_idempotent(self):
        """Normalizing twice equals normalizing once, over random noisy strings."""
        rng = np.random.default_rng(42)
        alphabet = list("abcXYZ019 /,()&-#!?\t\nüé")
        for _ in range(200):
            raw = "".join(rng.choice(alphabet, size=rng.integers(0, 30)))
            once = normalize_text(raw)
            assert normalize_text(once) == once

    def test_normalize_output_charset(self):
        rng = np.random.default_rng(7)
        alphabet = list("abz19 /,()&-#*@")
        for _ in range(200):
            raw = "".join(rng.choice(alphabet, size=rng.integers(0, 40)))
            out = normalize_text(raw)
            assert out == out.strip()
            assert "  " not in out
            assert all(ch.isalnum() or ch == " " for ch in out)

    def test_expand_idempotent_on_random_token_mixes(self):
        rng = np.random.default_rng(3)
        pool = ["ml", "ai", "swe", "data", "engineer", "qa", "nurse", "pm"]
        for _ in range(200):
            text = " ".join(rng.choice(pool, size=rng.integers(0, 8)))
            once = expand_abbreviations(text)
            assert expand_abbreviations(once) == once
