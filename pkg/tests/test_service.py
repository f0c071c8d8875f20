import json

import pytest
from fastapi.testclient import TestClient

from strata.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_r0_horizontal_half(client):
    resp = client.post("/api/r0", json={"w_beta": [1, 2, 3, 4, 5], "w_gamma": [],
                                        "a": 0.5, "b": 1.0})
    assert resp.status_code == 200
    body = resp.json()
    assert body["r0"] == pytest.approx(1.427, abs=1e-9)
    names = [g["name"] for g in body["grade_comparison"]]
    assert names == ["H", "M", "L"]
    assert [g["below"] for g in body["grade_comparison"]] == [False, True, True]


def test_r0_baseline(client):
    resp = client.post("/api/r0", json={"w_beta": [], "w_gamma": [], "a": 1, "b": 1})
    assert resp.status_code == 200
    assert resp.json()["r0"] == pytest.approx(2.854, rel=1e-9)


def test_r0_negative_a_is_422(client):
    resp = client.post("/api/r0", json={"w_beta": [], "w_gamma": [], "a": -0.1, "b": 1})
    assert resp.status_code == 422


def test_r0_bad_cohort_is_422(client):
    resp = client.post("/api/r0", json={"w_beta": [9], "w_gamma": [], "a": 0.5, "b": 1})
    assert resp.status_code == 422


def test_r0_malformed_json_is_400(client):
    resp = client.post("/api/r0", content=b"{oops",
                       headers={"content-type": "application/json"})
    assert resp.status_code == 400


def test_grades_endpoint(client):
    resp = client.get("/api/grades")
    assert resp.status_code == 200
    grades = resp.json()
    assert [g["name"] for g in grades] == ["H", "M", "L"]
    assert grades[0]["r0"] == pytest.approx(0.571, abs=5e-4)
    assert grades[1]["r0"] == pytest.approx(1.427, abs=5e-4)
    assert grades[2]["r0"] == pytest.approx(2.283, abs=5e-4)


def test_sweep_endpoint_and_cache(client):
    body = {"w_beta": [1, 2, 3], "w_gamma": [4, 5], "res": 4}
    first = client.post("/api/sweep", json=body)
    assert first.status_code == 200
    doc = first.json()
    assert len(doc["r0"]) == 4 and len(doc["r0"][0]) == 4
    assert doc["r0"][-1][-1] == pytest.approx(2.854, abs=1e-6)
    second = client.post("/api/sweep", json=body)
    assert second.json() == doc


def test_sweep_res_zero_is_422(client):
    resp = client.post("/api/sweep", json={"w_beta": [], "w_gamma": [], "res": 0})
    assert resp.status_code == 422


def test_table_endpoint(client):
    resp = client.get("/api/table")
    assert resp.status_code == 200
    doc = resp.json()
    assert len(doc["rows"]) == 16
    assert doc["total_coverage"] == pytest.approx(2 / 3, abs=1e-12)


def test_openapi_spec_served(client):
    resp = client.get("/api/spec")
    assert resp.status_code == 200
    spec = resp.json()
    assert "/api/r0" in spec["paths"]
    assert "/api/sweep" in spec["paths"]


def test_api_matches_cli_full_precision(client):
    from click.testing import CliRunner

    from strata.cli import main
    resp = client.post("/api/r0", json={"w_beta": [2], "w_gamma": [4],
                                        "a": 0.35, "b": 0.6})
    api_value = resp.json()["r0"]
    result = CliRunner().invoke(main, ["r0", "--wb", "2", "--wg", "4",
                                       "-a", "0.35", "-b", "0.6", "--raw"])
    cli_value = json.loads(result.output)["r0"]
    assert api_value == pytest.approx(cli_value, rel=1e-12)


def test_statelessness_repeated_requests(client):
    body = {"w_beta": [1], "w_gamma": [2], "a": 0.4, "b": 0.3}
    values = {client.post("/api/r0", json=body).json()["r0"] for _ in range(5)}
    assert len(values) == 1


def test_baseline_endpoint(client):
    resp = client.get("/api/baseline")
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["r0"] == pytest.approx(2.854, rel=1e-9)
    assert len(doc["cohorts"]) == 5
    assert doc["cohorts"][0]["from_years"] == 0.0
