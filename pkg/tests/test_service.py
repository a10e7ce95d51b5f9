import json

import pytest
from fastapi.testclient import TestClient

from qfock.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


class TestHealth:
    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}


class TestExpect:
    def test_relation_scalar(self, client):
        resp = client.post("/expect", json={"expr": "a(0) a+(0)", "q": 0.5})
        assert resp.status_code == 200
        data = resp.json()
        assert data["poly"] == "1"
        assert data["value"] == 1.0

    def test_field_fourth_moment(self, client):
        data = client.post("/expect", json={"expr": "s(0)^4", "q": 0.5}).json()
        assert data["poly"] == "2 + q"
        assert data["value"] == pytest.approx(2.5)

    def test_parse_error_is_400(self, client):
        resp = client.post("/expect", json={"expr": "a(0) %", "q": 0.0})
        assert resp.status_code == 400
        assert "ExprSyntaxError" in resp.json()["detail"]

    def test_q_out_of_domain_is_422(self, client):
        resp = client.post("/expect", json={"expr": "a(0)", "q": 1.5})
        assert resp.status_code == 422


class TestNorm:
    def test_creator_at_q0(self, client):
        resp = client.post(
            "/norm", json={"expr": "a+(0)", "q": 0.0, "window": [0, 1], "max_level": 3}
        )
        data = resp.json()
        assert data["value"] == pytest.approx(1.0, abs=1e-10)
        assert data["method"] == "exact-eigen"
        assert data["levels_used"] == 3

    def test_mode_outside_window_is_400(self, client):
        resp = client.post(
            "/norm", json={"expr": "a+(9)", "q": 0.0, "window": [0, 1], "max_level": 2}
        )
        assert resp.status_code == 400


class TestMixing:
    def test_q0_law(self, client):
        resp = client.post("/mixing", json={"expr": "a+(0)", "q": 0.0, "nmax": 8})
        data = resp.json()
        assert data["ok"]
        assert len(data["rows"]) == 8
        for row in data["rows"]:
            assert row["cesaro"] == pytest.approx(row["n"] ** -0.5, abs=1e-10)
        assert data["csv"].splitlines()[0] == "word,q,seq_kind,seed,n,i,j,norm,cesaro,bound,margin"

    def test_byte_identical_reruns(self, client):
        payload = {"expr": "a+(0) a(0)", "q": 0.5, "nmax": 6, "seq_kind": "random", "seed": 3}
        a = client.post("/mixing", json=payload).json()["csv"]
        b = client.post("/mixing", json=payload).json()["csv"]
        assert a.encode() == b.encode()

    def test_non_monomial_rejected(self, client):
        resp = client.post("/mixing", json={"expr": "a(0) + a(1)", "q": 0.0, "nmax": 2})
        assert resp.status_code == 400


class TestGram:
    def test_schema_matches_contract(self, client):
        resp = client.post("/gram", json={"window": [0, 1], "max_level": 2})
        blocks = resp.json()["blocks"]
        by_key = {(b["block"]["level"], tuple(b["block"]["multiset"])): b for b in blocks}
        assert by_key[(0, ())]["matrix"] == [["1"]]
        assert by_key[(2, (0, 0))]["matrix"] == [["1 + q"]]
        assert by_key[(2, (0, 1))]["matrix"] == [["1", "q"], ["q", "1"]]

    def test_json_serializable(self, client):
        resp = client.post("/gram", json={"window": [0, 0], "max_level": 3})
        json.dumps(resp.json())


class TestVerify:
    def test_default_passes(self, client):
        data = client.post("/verify", json={"symmetry_samples": 50, "confluence_samples": 50}).json()
        assert data["ok"]
        assert all(s["failures"] == 0 for s in data["suites"])

    def test_corruption_hook_fails(self, client):
        data = client.post(
            "/verify",
            json={"corrupt_gram": True, "symmetry_samples": 0, "confluence_samples": 0},
        ).json()
        assert not data["ok"]
        bad = [s for s in data["suites"] if not s["ok"]]
        assert [s["name"] for s in bad] == ["gram-positivity"]
