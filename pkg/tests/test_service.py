import numpy as np
import pytest
from fastapi.testclient import TestClient

from cvdkit.cli import run as cli_run
from cvdkit.core import decode_image, encode_png, save_image
from cvdkit.service import create_app
from cvdkit.survey import generate_survey

from conftest import random_image


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path / "data"


@pytest.fixture
def client(data_dir):
    return TestClient(create_app(data_dir))


def error_code(response):
    return response.json()["error"]["code"]


def answer_everything(client, session_id, choose=lambda plate: 0):
    plates = client.get("/api/plates").json()["plates"]
    for plate in plates:
        r = client.post(
            f"/api/test/{session_id}/answer",
            json={"plate_id": plate["id"], "option_index": choose(plate)},
        )
        assert r.status_code == 200
    return plates


class TestPlateTest:
    def test_plate_listing(self, client):
        plates = client.get("/api/plates").json()["plates"]
        assert len(plates) == 24
        first = plates[0]
        assert set(first) == {"id", "kind", "image_url", "options"}
        img = client.get(first["image_url"])
        assert img.status_code == 200
        assert img.headers["content-type"] == "image/png"

    def test_full_session_walkthrough(self, client):
        plates = client.get("/api/plates").json()["plates"]
        sid = "walkthrough"

        r = client.post(
            f"/api/test/{sid}/answer",
            json={"plate_id": plates[0]["id"], "option_index": 0},
        )
        body = r.json()
        assert body["completed"] is False
        assert body["next_plate_id"] == plates[1]["id"]

        answer_everything(client, sid)
        result = client.get(f"/api/test/{sid}/result")
        assert result.status_code == 200
        profile = result.json()
        for key in ("beta", "alpha_p", "alpha_d", "alpha_n"):
            assert 0.0 <= profile[key] <= 1.0

        stored = client.get(f"/api/profile/{sid}")
        assert stored.status_code == 200
        assert stored.json()["beta"] == profile["beta"]

    def test_result_before_completion(self, client):
        plates = client.get("/api/plates").json()["plates"]
        sid = "incomplete"
        client.post(
            f"/api/test/{sid}/answer",
            json={"plate_id": plates[0]["id"], "option_index": 0},
        )
        r = client.get(f"/api/test/{sid}/result")
        assert r.status_code == 409
        assert error_code(r) == "session_incomplete"

    def test_unknown_session(self, client):
        r = client.get("/api/test/ghost/result")
        assert r.status_code == 404
        assert error_code(r) == "session_not_found"

    def test_bad_answers(self, client):
        r = client.post("/api/test/s/answer", json={"plate_id": "nope", "option_index": 0})
        assert r.status_code == 400 and error_code(r) == "bad_option"
        plates = client.get("/api/plates").json()["plates"]
        r = client.post(
            "/api/test/s/answer",
            json={"plate_id": plates[0]["id"], "option_index": 42},
        )
        assert r.status_code == 400 and error_code(r) == "bad_option"

    def test_resume_by_session_id(self, client):
        plates = client.get("/api/plates").json()["plates"]
        sid = "resume-me"
        client.post(
            f"/api/test/{sid}/answer",
            json={"plate_id": plates[0]["id"], "option_index": 0},
        )
        state = client.get(f"/api/test/{sid}").json()
        assert state["next_plate_id"] == plates[1]["id"]
        assert state["answered"] == [plates[0]["id"]]

    def test_sessions_survive_restart(self, data_dir):
        with TestClient(create_app(data_dir)) as client:
            answer_everything(client, "durable")
        with TestClient(create_app(data_dir)) as fresh:
            r = fresh.get("/api/test/durable/result")
            assert r.status_code == 200


class TestImageEndpoints:
    def test_simulate_degree_zero_round_trips(self, client, rng):
        img = random_image(rng)
        r = client.post(
            "/api/simulate",
            params={"alpha_p": 0, "alpha_d": 0},
            content=encode_png(img),
        )
        assert r.status_code == 200
        assert np.array_equal(decode_image(r.content).pixels, img.pixels)

    def test_simulate_rejects_out_of_range(self, client, rng):
        r = client.post(
            "/api/simulate",
            params={"alpha_p": 1.5, "alpha_d": 0},
            content=encode_png(random_image(rng)),
        )
        assert r.status_code == 422
        assert error_code(r) == "bad_degree_range"

    def test_simulate_rejects_junk_payload(self, client):
        r = client.post(
            "/api/simulate", params={"alpha_p": 0, "alpha_d": 0}, content=b"not an image"
        )
        assert r.status_code == 400
        assert error_code(r) == "bad_image"

    def test_upload_size_limit(self, data_dir, rng):
        client = TestClient(create_app(data_dir, max_upload_bytes=64))
        r = client.post(
            "/api/simulate",
            params={"alpha_p": 0, "alpha_d": 0},
            content=encode_png(random_image(rng)),
        )
        assert r.status_code == 413
        assert error_code(r) == "payload_too_large"

    def test_correct_requires_degrees_or_profile(self, client, rng):
        r = client.post(
            "/api/correct", params={"method": "b"}, content=encode_png(random_image(rng))
        )
        assert r.status_code == 422
        assert error_code(r) == "bad_degree_range"

    def test_correct_with_stored_profile(self, client, rng):
        answer_everything(client, "prof-session")
        client.get("/api/test/prof-session/result")
        r = client.post(
            "/api/correct",
            params={"method": "b", "profile": "prof-session"},
            content=encode_png(random_image(rng)),
        )
        assert r.status_code == 200

    def test_http_matches_cli_byte_for_byte(self, client, rng, tmp_path):
        img = random_image(rng)
        in_path = tmp_path / "in.png"
        out_path = tmp_path / "out.png"
        save_image(img, in_path)
        assert cli_run([
            "correct", "--method", "b", "--domain", "rgb", "--equalize",
            "--beta", "1", "--alpha-p", "0.75", "--alpha-d", "0.25", "--alpha-n", "0",
            str(in_path), str(out_path),
        ]) == 0

        r = client.post(
            "/api/correct",
            params={
                "method": "b", "domain": "rgb", "equalize": "true",
                "beta": 1, "alpha_p": 0.75, "alpha_d": 0.25, "alpha_n": 0,
            },
            content=in_path.read_bytes(),
        )
        assert r.status_code == 200
        assert r.content == out_path.read_bytes()


class TestSurveyEndpoints:
    @pytest.fixture
    def survey_client(self, data_dir, rng):
        corpus = [(f"c{k}", random_image(rng, 12, 12)) for k in range(10)]
        generate_survey(corpus, seed=9, out_dir=data_dir / "survey")
        return TestClient(create_app(data_dir))

    def test_survey_missing_bundle(self, client):
        r = client.get("/api/survey/question/1")
        assert r.status_code == 404
        assert error_code(r) == "survey_not_found"

    def test_question_metadata_and_images(self, survey_client):
        r = survey_client.get("/api/survey/question/1")
        assert r.status_code == 200
        q = r.json()
        assert q["total_questions"] == 90
        assert len(q["options"]) == 5
        for opt in q["options"]:
            img = survey_client.get(opt["image_url"])
            assert img.status_code == 200

    def test_question_out_of_range(self, survey_client):
        r = survey_client.get("/api/survey/question/91")
        assert r.status_code == 404
        assert error_code(r) == "question_not_found"

    def test_response_and_stats_flow(self, survey_client):
        answers = {str(i): "method_b_eq" for i in range(1, 91)}
        r = survey_client.post(
            "/api/survey/response",
            json={"respondent_id": "tester", "answers": answers},
        )
        assert r.status_code == 200
        assert r.json() == {"accepted": True, "respondents": 1}

        stats = survey_client.get("/api/survey/stats").json()
        assert stats["total_answers"] == 90
        assert stats["positive_overall"]["method_b_eq"] == 100.0
        assert sum(stats["overall"].values()) == pytest.approx(100.0, abs=0.1)

    def test_incomplete_response_rejected(self, survey_client):
        r = survey_client.post(
            "/api/survey/response",
            json={"respondent_id": "t", "answers": {"1": "method_b_eq"}},
        )
        assert r.status_code == 400
        assert error_code(r) == "bad_response_record"

    def test_bad_label_rejected(self, survey_client):
        answers = {str(i): "method_b_eq" for i in range(1, 91)}
        answers["5"] = "nonsense"
        r = survey_client.post(
            "/api/survey/response",
            json={"respondent_id": "t", "answers": answers},
        )
        assert r.status_code == 400
        assert error_code(r) == "bad_response_record"

    def test_image_name_traversal_blocked(self, survey_client):
        r = survey_client.get("/api/survey/images/..%2Fspec.json")
        assert r.status_code == 404


class TestDataDirOverride:
    def test_env_var_wins_over_argument(self, tmp_path, monkeypatch):
        env_dir = tmp_path / "from-env"
        monkeypatch.setenv("CVDKIT_DATA", str(env_dir))
        with TestClient(create_app(tmp_path / "from-arg")) as client:
            answer_everything(client, "env-session")
        assert (env_dir / "sessions" / "env-session.json").is_file()
        assert not (tmp_path / "from-arg" / "sessions").exists()


class TestUiHosting:
    def test_placeholder_page_without_bundle(self, client):
        r = client.get("/")
        assert r.status_code == 200
        assert "cvdkit" in r.text

    def test_static_bundle_served(self, data_dir, tmp_path):
        ui = tmp_path / "dist"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>UI BUNDLE</body></html>")
        client = TestClient(create_app(data_dir, ui_dir=ui))
        r = client.get("/")
        assert "UI BUNDLE" in r.text
