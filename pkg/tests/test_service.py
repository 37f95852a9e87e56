import threading

import pytest
from fastapi.testclient import TestClient

from metajobs.ranker import RankerConfig, TokenOverlapScorer, run_query
from metajobs.service import ServiceState, create_app


@pytest.fixture(scope="module")
def state(family_engine):
    eng = family_engine
    return ServiceState(
        corpus=eng.corpus,
        sparse=eng.sparse,
        dense=eng.dense,
        embedder=eng.embedder,
        pair_scorer=TokenOverlapScorer(),
        config=RankerConfig(),
    )


@pytest.fixture(scope="module")
def client(state):
    return TestClient(create_app(state))


def test_recommend_response_shape(client):
    response = client.post("/api/v1/recommend", json={"query": "remote junior data analyst london"})
    assert response.status_code == 200
    payload = response.json()
    assert set(payload) == {
        "query",
        "parsed_query",
        "applied_filters",
        "fallback_used",
        "results",
        "timing_ms",
    }
    parsed = payload["parsed_query"]
    assert parsed["raw"] == "remote junior data analyst london"
    assert parsed["work_mode"] == "remote"
    assert parsed["seniority"] == "entry"
    assert parsed["location"] == "london"
    assert payload["timing_ms"] >= 0.0
    assert 0 < len(payload["results"]) <= 10
    for i, result in enumerate(payload["results"], start=1):
        assert result["rank"] == i
        assert set(result) == {"rank", "posting", "score_breakdown", "explanation"}
        assert set(result["score_breakdown"]) == {
            "s_sem_raw",
            "s_lex_raw",
            "s_sem_hat",
            "s_lex_hat",
            "s_hybrid",
            "s_rerank_hat",
            "bonus",
            "s_final",
        }
        assert set(result["explanation"]) == {
            "matched_keywords",
            "applied_filters",
            "fallback_used",
            "metadata_evidence",
            "ranking_evidence",
        }


def test_results_arrive_sorted(client):
    payload = client.post("/api/v1/recommend", json={"query": "software engineer"}).json()
    finals = [r["score_breakdown"]["s_final"] for r in payload["results"]]
    assert finals == sorted(finals, reverse=True)


def test_api_matches_library(client, family_engine):
    """The HTTP layer adds serialization, never different ranking."""
    eng = family_engine
    outcome = run_query("senior software engineer", eng.corpus, eng.sparse, eng.dense, eng.embedder)
    payload = client.post("/api/v1/recommend", json={"query": "senior software engineer"}).json()
    assert [r["posting"]["id"] for r in payload["results"]] == [
        r.posting_id for r in outcome.recommendations
    ]
    assert [r["score_breakdown"]["s_final"] for r in payload["results"]] == [
        r.breakdown.s_final for r in outcome.recommendations
    ]


def test_unknown_field_is_rejected(client):
    response = client.post("/api/v1/recommend", json={"query": "x", "frobnicate": True})
    assert response.status_code == 400


def test_missing_query_is_rejected(client):
    assert client.post("/api/v1/recommend", json={}).status_code == 400


def test_empty_query_is_rejected(client):
    assert client.post("/api/v1/recommend", json={"query": "   "}).status_code == 400


def test_bad_weights_are_rejected(client):
    response = client.post(
        "/api/v1/recommend", json={"query": "engineer", "w_sem": 0.9, "w_lex": 0.9}
    )
    assert response.status_code == 400


def test_single_weight_gets_complement(client):
    payload = client.post("/api/v1/recommend", json={"query": "engineer", "w_sem": 1.0}).json()
    for result in payload["results"]:
        assert result["score_breakdown"]["s_final"] == result["score_breakdown"]["s_sem_hat"]


def test_top_k_bounds(client):
    assert client.post("/api/v1/recommend", json={"query": "x", "top_k": 0}).status_code == 400
    assert client.post("/api/v1/recommend", json={"query": "x", "top_k": 101}).status_code == 400
    payload = client.post("/api/v1/recommend", json={"query": "engineer", "top_k": 3}).json()
    assert len(payload["results"]) <= 3


def test_filter_override_forces_value(client):
    payload = client.post(
        "/api/v1/recommend", json={"query": "data analyst", "seniority": "entry"}
    ).json()
    assert payload["parsed_query"]["seniority"] == "entry"
    if not payload["fallback_used"]:
        assert ["seniority", "entry"] in payload["applied_filters"]


def test_filter_override_null_disables_detected_filter(client):
    detected = client.post("/api/v1/recommend", json={"query": "junior data analyst"}).json()
    assert detected["parsed_query"]["seniority"] == "entry"
    cleared = client.post(
        "/api/v1/recommend", json={"query": "junior data analyst", "seniority": None}
    ).json()
    assert cleared["parsed_query"]["seniority"] is None
    assert all(kind != "seniority" for kind, _ in cleared["applied_filters"])


def test_invalid_filter_value_is_rejected(client):
    response = client.post(
        "/api/v1/recommend", json={"query": "engineer", "work_mode": "telepathic"}
    )
    assert response.status_code == 400


def test_location_override_is_normalized(client):
    payload = client.post(
        "/api/v1/recommend", json={"query": "data analyst", "location": "  London "}
    ).json()
    assert payload["parsed_query"]["location"] == "london"


def test_rerank_toggle(client):
    payload = client.post(
        "/api/v1/recommend", json={"query": "data analyst", "rerank": True}
    ).json()
    assert payload["results"]
    assert any(r["score_breakdown"]["s_rerank_hat"] is not None for r in payload["results"])


def test_job_lookup(client, family_engine):
    posting = family_engine.corpus.posting(0)
    response = client.get("/api/v1/jobs/0")
    assert response.status_code == 200
    assert response.json()["title"] == posting.title
    assert response.json()["id"] == 0


def test_job_lookup_unknown_is_404(client):
    assert client.get("/api/v1/jobs/999999").status_code == 404


def test_health(client, family_engine):
    payload = client.get("/api/v1/health").json()
    assert payload["status"] == "ok"
    assert payload["corpus_size"] == len(family_engine.corpus)


def test_stats(client, family_engine):
    payload = client.get("/api/v1/stats").json()
    assert payload["corpus_size"] == len(family_engine.corpus)
    assert payload["vocabulary_size"] == len(family_engine.sparse.vocabulary)
    assert payload["embedding_dimension"] == family_engine.dense.dimension
    assert payload["config"]["top_k"] == 10


def test_config(client):
    payload = client.get("/api/v1/config").json()
    assert payload["w_sem"] == 0.4 and payload["w_lex"] == 0.6
    assert payload["n_candidates"] == 250


def test_unloaded_app_serves_503(tmp_path):
    from metajobs.service import create_app_from_dir

    app = create_app_from_dir(str(tmp_path / "missing"))
    with TestClient(app) as bare:
        assert bare.post("/api/v1/recommend", json={"query": "x"}).status_code == 503
        assert bare.get("/api/v1/health").status_code == 503
        assert bare.get("/api/v1/jobs/0").status_code == 503


def test_static_ui_mount(tmp_path, state):
    ui_dir = tmp_path / "ui"
    ui_dir.mkdir()
    (ui_dir / "index.html").write_text("<html><body>ok</body></html>")
    with TestClient(create_app(state, ui_dir=str(ui_dir))) as ui_client:
        response = ui_client.get("/")
        assert response.status_code == 200
        assert "ok" in response.text
        # API routes still take priority over the static mount
        assert ui_client.get("/api/v1/health").status_code == 200


def test_concurrent_requests(client):
    """A read-only engine answers identical concurrent queries identically."""
    results = [None] * 8

    def hit(i):
        payload = client.post("/api/v1/recommend", json={"query": "data analyst"}).json()
        results[i] = [r["posting"]["id"] for r in payload["results"]]

    threads = [threading.Thread(target=hit, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(ids == results[0] for ids in results)
