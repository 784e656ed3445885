"""HTTP service tests over the in-process test client."""

import pytest
from fastapi.testclient import TestClient

from lf_transfer.service.app import create_app


@pytest.fixture(scope="module")
def client(lexicon):
    app = create_app(lexicon=lexicon)
    with TestClient(app) as c:
        yield c


class TestHealth:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["languages"] == ["de", "en", "fr", "nl"]
        assert body["entries"] == 36


class TestTranslateEndpoint:
    def test_happy_path(self, client):
        response = client.post(
            "/translate",
            json={"tokens": ["heavy", "smoker"], "src_lang": "en", "tgt_lang": "fr"},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["surface"] == "grand fumeur"
        assert body["stages"] == [
            "1: heavy smoker",
            "2: Magn(smoker)",
            "3: Magn(fumeur)",
            "4: grand fumeur",
        ]
        assert body["reading"]["label"] == "[collocational Magn]"
        assert body["details"] == []

    def test_trace_returns_details(self, client):
        response = client.post(
            "/translate",
            json={
                "tokens": ["bunch", "of", "keys"],
                "src_lang": "en",
                "tgt_lang": "nl",
                "trace": True,
            },
        )
        assert response.status_code == 200
        body = response.json()
        assert body["surface"] == "sleutelbos"
        assert any(d.startswith("realize:") for d in body["details"])
        assert body["realizations"][0]["strategy"] == "merged"

    def test_missing_sign_maps_to_422(self, client):
        response = client.post(
            "/translate",
            json={"tokens": ["heavy", "smoker"], "src_lang": "en", "tgt_lang": "nl"},
        )
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "MISSING_SIGN"
        assert "smoker" in body["message"]

    def test_unknown_token_maps_to_422(self, client):
        response = client.post(
            "/translate",
            json={"tokens": ["xyzzy"], "src_lang": "en", "tgt_lang": "fr"},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "TOKEN_UNKNOWN"

    def test_empty_tokens_rejected_by_validation(self, client):
        response = client.post(
            "/translate", json={"tokens": [], "src_lang": "en", "tgt_lang": "fr"}
        )
        assert response.status_code == 422  # pydantic min-length validation

    def test_missing_fields_rejected(self, client):
        response = client.post("/translate", json={"tokens": ["heavy"]})
        assert response.status_code == 422


class TestAnalyzeEndpoint:
    def test_readings(self, client):
        response = client.post(
            "/analyze", json={"tokens": ["heavy", "smoker"], "lang": "en"}
        )
        assert response.status_code == 200
        readings = response.json()["readings"]
        assert [r["label"] for r in readings] == ["[collocational Magn]", "[literal]"]
        assert readings[0]["sem"] == "smoker(x),Magn(x)"

    def test_no_parse_maps_to_422(self, client):
        response = client.post(
            "/analyze", json={"tokens": ["heavy", "clear"], "lang": "en"}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "NO_PARSE"


class TestGenerateEndpoint:
    def test_candidates(self, client):
        response = client.post(
            "/generate", json={"lang": "en", "sem": "oppose(x),Magn(x)"}
        )
        assert response.status_code == 200
        realizations = response.json()["realizations"]
        assert len(realizations) == 9
        surfaces = [r["surface"] for r in realizations]
        assert surfaces == sorted(surfaces)

    def test_sem_syntax_maps_to_400(self, client):
        response = client.post(
            "/generate", json={"lang": "en", "sem": "smoker(x),Magn(y)"}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "SEM_SYNTAX"

    def test_realization_gap_maps_to_422(self, client):
        response = client.post(
            "/generate", json={"lang": "fr", "sem": "boite(x),Bon(x)"}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "REALIZATION_GAP"


class TestValidateEndpoint:
    def test_clean_inline_lexicon(self, client):
        files = {
            "inline.lex": (
                "(lfs Magn)\n"
                '(entry (id xx:a) (phon "a") (cat N) (sem (pred a)))\n'
            )
        }
        response = client.post("/validate", json={"files": files})
        assert response.status_code == 200
        body = response.json()
        assert body["ok"] is True
        assert body["diagnostics"] == []

    def test_broken_inline_lexicon(self, client):
        files = {
            "inline.lex": "(lfs Magn)\n(coll (base xx:a) (super xx:b) (lf Magn) (pos pre))"
        }
        response = client.post("/validate", json={"files": files})
        assert response.status_code == 200
        body = response.json()
        assert body["ok"] is False
        codes = [d["code"] for d in body["diagnostics"]]
        assert "DANGLING_REF" in codes
        for diag in body["diagnostics"]:
            assert diag["formatted"].startswith(f"{diag['level']} {diag['code']} ")


class TestAppConstruction:
    def test_create_app_from_paths(self):
        from lf_transfer.cli import default_lexicon_paths

        app = create_app(lexicon_paths=default_lexicon_paths())
        with TestClient(app) as c:
            assert c.get("/health").json()["entries"] == 36

    def test_create_app_rejects_bad_paths(self):
        from lf_transfer.errors import LexiconError

        with pytest.raises(LexiconError):
            create_app(lexicon_paths=["/nonexistent/missing.lex"])
