from __future__ import annotations

import pytest

pytest.importorskip("fastapi")
from fastapi.testclient import TestClient  # noqa: E402

from sonuml.audio import read_wav_bytes  # noqa: E402
from sonuml.service import create_app  # noqa: E402


@pytest.fixture(scope="module")
def client(library_model, proposed):
    return TestClient(create_app(library_model, proposed))


def make_session(client, audience="expert"):
    response = client.post("/sessions", json={"audience": audience})
    assert response.status_code == 200
    return response.json()


class TestSessions:
    def test_create_returns_initial_cue(self, client):
        doc = make_session(client)
        assert doc["focus"] == "package:core"
        assert doc["cue_url"].startswith("/audio/")
        assert doc["breadcrumb"].startswith("Diagram library")

    def test_get_session_state(self, client):
        doc = make_session(client)
        state = client.get(f"/sessions/{doc['session']}").json()
        assert state["focus"] == doc["focus"]
        assert state["audience"] == "expert"

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/move", json={"move": "into"}).status_code == 404

    def test_bad_audience_rejected(self, client):
        assert client.post("/sessions", json={"audience": "wizard"}).status_code == 422

    def test_sessions_expire(self, library_model, proposed):
        ephemeral = TestClient(create_app(library_model, proposed, session_ttl_s=-1.0))
        doc = make_session(ephemeral)
        assert ephemeral.get(f"/sessions/{doc['session']}").status_code == 404


class TestMoves:
    def test_move_updates_focus(self, client):
        doc = make_session(client)
        moved = client.post(
            f"/sessions/{doc['session']}/move", json={"move": "into"}
        ).json()
        assert moved["focus"] == "classifier:Searchable"
        assert moved["moved"] is True

    def test_boundary_flagged(self, client):
        doc = make_session(client)
        event = client.post(
            f"/sessions/{doc['session']}/move", json={"move": "out"}
        ).json()
        assert event["boundary"] is True and event["moved"] is False

    def test_novice_forbidden_move_403(self, client):
        doc = make_session(client, audience="novice")
        response = client.post(
            f"/sessions/{doc['session']}/move",
            json={"move": "follow_relationship", "index": 0},
        )
        assert response.status_code == 403

    def test_unknown_move_422(self, client):
        doc = make_session(client)
        response = client.post(
            f"/sessions/{doc['session']}/move", json={"move": "teleport"}
        )
        assert response.status_code == 422

    def test_cue_ids_deterministic_across_sessions(self, client):
        a = make_session(client)
        b = make_session(client)
        move_a = client.post(f"/sessions/{a['session']}/move", json={"move": "into"}).json()
        move_b = client.post(f"/sessions/{b['session']}/move", json={"move": "into"}).json()
        assert move_a["cue_id"] == move_b["cue_id"]


class TestAudio:
    def test_cue_audio_is_valid_wav(self, client):
        doc = make_session(client)
        wav = client.get(doc["cue_url"])
        assert wav.status_code == 200
        assert wav.headers["content-type"] == "audio/wav"
        buf = read_wav_bytes(wav.content)
        assert buf.sample_rate == 44100 and buf.frames > 0

    def test_unknown_cue_404(self, client):
        assert client.get("/audio/ffffffffffffffff.wav").status_code == 404

    def test_walkthrough_wav_and_vtt(self, client):
        wav = client.get("/walkthrough.wav")
        assert wav.status_code == 200
        assert read_wav_bytes(wav.content).duration_s > 10.0
        vtt = client.get("/walkthrough.vtt")
        assert vtt.status_code == 200
        assert vtt.text.startswith("WEBVTT")


class TestStaticMount:
    def test_ui_served_behind_api(self, library_model, proposed, tmp_path):
        (tmp_path / "index.html").write_text("<!doctype html><title>ui</title>")
        app = create_app(library_model, proposed, static_dir=str(tmp_path))
        served = TestClient(app)
        assert served.get("/").status_code == 200
        assert "ui" in served.get("/").text
        # JSON endpoints keep precedence over the mount.
        assert served.get("/model").json()["name"] == "library"


class TestModelDocument:
    def test_model_json(self, client):
        doc = client.get("/model").json()
        assert doc["name"] == "library"
        assert len(doc["classifiers"]) == 7
        assert len(doc["relationships"]) == 7
        refs = {c["ref"] for c in doc["classifiers"]}
        assert "classifier:Book" in refs
        book = next(c for c in doc["classifiers"] if c["name"] == "Book")
        assert book["position"] == {"x": 20.0, "y": 45.0}
