"""HTTP service exposing the toolkit.

All image math goes through the same functions the CLI uses, so the two
surfaces cannot diverge. State (test sessions, stored profiles, survey
responses) is plain files under the data directory; the process keeps no
in-memory state worth losing, so a restart forgets nothing.

Layout of the data directory:
    plates.json + plates/    optional custom plate set (bundled set otherwise)
    sessions/<id>.json       plate-test sessions, rewritten atomically
    profiles/<id>.json       fuzzified profiles of completed sessions
    survey/spec.json         generated study bundle (see `cvdkit survey gen`)
    survey/images/*.png
    survey/responses.jsonl   append-only respondent log
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import survey as survey_mod
from .core import decode_image, encode_png
from .correct import (
    CorrectionOptions,
    FuzzyProfile,
    correct,
    load_profile,
    save_profile,
)
from .ishihara import (
    PlateSet,
    TestSession,
    default_plates,
    fuzzify,
    load_plates,
    next_plate,
    record_answer,
    score_session,
)
from .simulate import DegreeRangeError, SimSpec, check_degree, simulate

DEFAULT_MAX_UPLOAD = 16 * 1024 * 1024


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int):
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status


def _not_found_session(session_id: str) -> ApiError:
    return ApiError("session_not_found", f"unknown session {session_id!r}", 404)


class AnswerBody(BaseModel):
    plate_id: str
    option_index: int


class ResponseBody(BaseModel):
    respondent_id: str
    answers: dict[int, str]


class _State:
    def __init__(self, data_dir: Path, plates: PlateSet):
        self.data_dir = data_dir
        self.plates = plates
        self.sessions_dir = data_dir / "sessions"
        self.profiles_dir = data_dir / "profiles"
        self.survey_dir = data_dir / "survey"
        for d in (self.sessions_dir, self.profiles_dir, self.survey_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.responses_lock = threading.Lock()

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def load_session(self, session_id: str) -> TestSession | None:
        path = self.sessions_dir / f"{session_id}.json"
        if not path.is_file():
            return None
        doc = json.loads(path.read_text())
        return TestSession(
            session_id=doc["session_id"],
            plate_order=tuple(doc["plate_order"]),
            responses=dict(doc["responses"]),
        )

    def save_session(self, session: TestSession) -> None:
        path = self.sessions_dir / f"{session.session_id}.json"
        doc = {
            "session_id": session.session_id,
            "plate_order": list(session.plate_order),
            "responses": session.responses,
            "completed": session.completed,
        }
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc, indent=2))
        os.replace(tmp, path)

    def survey_spec(self) -> survey_mod.SurveySpec:
        spec_path = self.survey_dir / "spec.json"
        if not spec_path.is_file():
            raise ApiError(
                "survey_not_found",
                "no survey bundle in the data directory; run `cvdkit survey gen`",
                404,
            )
        return survey_mod.load_spec(spec_path)


def _session_view(state: _State, session: TestSession) -> dict:
    upcoming = next_plate(session, state.plates)
    return {
        "session_id": session.session_id,
        "answered": sorted(session.responses),
        "total_plates": len(session.plate_order),
        "next_plate_id": upcoming.id if upcoming else None,
        "completed": session.completed,
    }


async def _read_upload(request: Request, limit: int) -> bytes:
    body = await request.body()
    if len(body) > limit:
        raise ApiError(
            "payload_too_large",
            f"image upload exceeds the {limit} byte limit",
            413,
        )
    if not body:
        raise ApiError("bad_image", "empty request body", 400)
    return body


def _decode_or_400(data: bytes):
    try:
        return decode_image(data)
    except ValueError as exc:
        raise ApiError("bad_image", str(exc), 400)


def create_app(
    data_dir: str | Path,
    ui_dir: str | Path | None = None,
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD,
) -> FastAPI:
    data_dir = Path(os.environ.get("CVDKIT_DATA", str(data_dir)))
    data_dir.mkdir(parents=True, exist_ok=True)

    plate_file = data_dir / "plates.json"
    plates = load_plates(plate_file) if plate_file.is_file() else default_plates()
    state = _State(data_dir, plates)

    app = FastAPI(title="cvdkit")

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(DegreeRangeError)
    async def _degree_error(request: Request, exc: DegreeRangeError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "bad_degree_range", "message": str(exc)}},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "validation_error", "message": str(exc.errors())}},
        )

    # ----- plate test -------------------------------------------------

    @app.get("/api/plates")
    def list_plates():
        return {
            "plates": [
                {
                    "id": p.id,
                    "kind": p.kind,
                    "image_url": f"/api/plates/{p.id}/image",
                    "options": [o.label for o in p.options],
                }
                for p in state.plates
            ]
        }

    @app.get("/api/plates/{plate_id}/image")
    def plate_image(plate_id: str):
        plate = state.plates.get(plate_id)
        if plate is None:
            raise ApiError("bad_option", f"unknown plate {plate_id!r}", 404)
        path = state.plates.image_path(plate)
        if path is None or not path.is_file():
            raise ApiError("bad_option", f"no raster for plate {plate_id!r}", 404)
        return FileResponse(path, media_type="image/png")

    @app.post("/api/test/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerBody):
        with state.session_lock(session_id):
            session = state.load_session(session_id)
            if session is None:
                session = TestSession(
                    session_id=session_id,
                    plate_order=tuple(p.id for p in state.plates),
                )
            try:
                record_answer(session, state.plates, body.plate_id, body.option_index)
            except (KeyError, IndexError) as exc:
                raise ApiError("bad_option", str(exc), 400)
            state.save_session(session)
            return _session_view(state, session)

    @app.get("/api/test/{session_id}")
    def get_session(session_id: str):
        session = state.load_session(session_id)
        if session is None:
            raise _not_found_session(session_id)
        return _session_view(state, session)

    @app.get("/api/test/{session_id}/result")
    def get_result(session_id: str):
        with state.session_lock(session_id):
            session = state.load_session(session_id)
            if session is None:
                raise _not_found_session(session_id)
            if not session.completed:
                raise ApiError(
                    "session_incomplete",
                    f"{len(session.responses)}/{len(session.plate_order)} plates answered",
                    409,
                )
            profile = fuzzify(score_session(session, state.plates))
            save_profile(state.profiles_dir / f"{session_id}.json", profile, session_id)
        return {
            "session_id": session_id,
            "beta": profile.beta,
            "alpha_p": profile.alpha_p,
            "alpha_d": profile.alpha_d,
            "alpha_n": profile.alpha_n,
        }

    @app.get("/api/profile/{session_id}")
    def get_profile(session_id: str):
        path = state.profiles_dir / f"{session_id}.json"
        if not path.is_file():
            raise _not_found_session(session_id)
        return json.loads(path.read_text())

    # ----- image processing -------------------------------------------

    @app.post("/api/simulate")
    async def post_simulate(request: Request, alpha_p: float, alpha_d: float):
        spec = SimSpec(alpha_p=alpha_p, alpha_d=alpha_d)
        img = _decode_or_400(await _read_upload(request, max_upload_bytes))
        return Response(content=encode_png(simulate(img, spec)), media_type="image/png")

    @app.post("/api/correct")
    async def post_correct(
        request: Request,
        method: str,
        domain: str = "rgb",
        equalize: bool = False,
        beta: float | None = None,
        alpha_p: float | None = None,
        alpha_d: float | None = None,
        alpha_n: float | None = None,
        profile: str | None = None,
    ):
        if profile is not None:
            path = state.profiles_dir / f"{profile}.json"
            if not path.is_file():
                raise _not_found_session(profile)
            prof = load_profile(path)
        else:
            degrees = {"beta": beta, "alpha_p": alpha_p, "alpha_d": alpha_d, "alpha_n": alpha_n}
            missing = [k for k, v in degrees.items() if v is None]
            if missing:
                raise ApiError(
                    "bad_degree_range",
                    f"missing degree parameters: {', '.join(missing)} "
                    "(or pass profile=<session_id>)",
                    422,
                )
            prof = FuzzyProfile(**{k: check_degree(k, v) for k, v in degrees.items()})
        try:
            opts = CorrectionOptions(method=method, domain=domain.upper(), equalize=equalize)
        except ValueError as exc:
            raise ApiError("bad_option", str(exc), 422)
        img = _decode_or_400(await _read_upload(request, max_upload_bytes))
        return Response(content=encode_png(correct(img, prof, opts)), media_type="image/png")

    # ----- survey ------------------------------------------------------

    @app.get("/api/survey/question/{index}")
    def survey_question(index: int):
        spec = state.survey_spec()
        try:
            q = spec.question(index)
        except KeyError as exc:
            raise ApiError("question_not_found", str(exc), 404)
        names = survey_mod.question_image_names(q)
        return {
            "index": q.index,
            "total_questions": len(spec.questions),
            "presented_url": f"/api/survey/images/{names['presented']}",
            "options": [
                {
                    "position": pos,
                    "label": label,
                    "image_url": f"/api/survey/images/{names[pos]}",
                }
                for pos, label in zip(survey_mod.OPTION_POSITIONS, q.option_order)
            ],
        }

    @app.get("/api/survey/images/{name}")
    def survey_image(name: str):
        if "/" in name or "\\" in name or name.startswith("."):
            raise ApiError("question_not_found", f"bad image name {name!r}", 404)
        path = state.survey_dir / "images" / name
        if not path.is_file():
            raise ApiError("question_not_found", f"no survey image {name!r}", 404)
        return FileResponse(path, media_type="image/png")

    @app.post("/api/survey/response")
    def survey_response(body: ResponseBody):
        spec = state.survey_spec()
        missing = [
            q.index for q in spec.questions if q.index not in body.answers
        ]
        if missing:
            raise ApiError(
                "bad_response_record",
                f"incomplete response; unanswered questions: {missing[:10]}"
                + ("..." if len(missing) > 10 else ""),
                400,
            )
        response = survey_mod.SurveyResponse(
            respondent_id=body.respondent_id, answers=dict(body.answers)
        )
        try:
            survey_mod.tally(spec, [response])  # validates indices and labels
        except survey_mod.ResponseValidationError as exc:
            raise ApiError("bad_response_record", str(exc), 400)
        log = state.survey_dir / "responses.jsonl"
        with state.responses_lock:
            survey_mod.append_response(log, response)
            count = sum(1 for line in log.read_text().splitlines() if line.strip())
        return {"accepted": True, "respondents": count}

    @app.get("/api/survey/stats")
    def survey_stats(request: Request):
        spec = state.survey_spec()
        log = state.survey_dir / "responses.jsonl"
        responses = survey_mod.load_responses(log) if log.is_file() else []
        report = survey_mod.tally(spec, responses)
        return {
            "total_answers": report.total_answers,
            "respondents": len(responses),
            "overall": report.overall,
            "positive_overall": report.positive_overall,
            "by_type": report.by_type,
            "by_type_degree": {
                t: {str(d): v for d, v in degrees.items()}
                for t, degrees in report.by_type_degree.items()
            },
            "no_improvement_rate": report.no_improvement_rate,
            "expected_no_improvement_rate": report.expected_no_improvement_rate,
        }

    # ----- UI ----------------------------------------------------------

    if ui_dir is not None and Path(ui_dir).joinpath("index.html").is_file():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<html><body><h1>cvdkit service</h1>"
                "<p>API is up. Build the web UI (see frontend/README) and pass "
                "<code>--ui</code> to serve it here.</p></body></html>"
            )

    return app
