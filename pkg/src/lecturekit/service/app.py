"""HTTP and event-stream facade over bundles and live sessions.

One process serves many lecture bundles (discovered under the bundle
directory) and many independent sessions. Requests touching the same
session serialize behind its engine lock; the event stream replays a
session's buffer from any sequence number and then follows live.

Session state is in-memory; the interaction log and a small metadata
sidecar persist per session, so a restart recovers every log (sessions
resume in Playing mode at position zero).
"""

from __future__ import annotations

import os
import uuid
from pathlib import Path
from typing import Any, Optional

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse

from ..bundle import LectureBundle, load_bundle
from ..errors import LectureKitError, SchemaViolation
from ..gateway import Gateway, MockProvider, provider_from_env
from ..jsonio import read_json, write_json
from ..media import (
    ScaledClock,
    StubImageSearch,
    StubSpeechProvider,
    image_provider_from_env,
    speech_provider_from_env,
)
from ..session import LectureSession
from .events import EventBuffer

SESSIONS_DIRNAME = "_sessions"


class UnknownId(LectureKitError):
    code = "unknown_id"
    http_status = 404


class AppState:
    """Everything one server process owns: bundles, sessions, providers."""

    def __init__(
        self,
        bundle_dir: Path,
        *,
        mock: bool,
        clock_speed: float,
        max_calls: Optional[int] = None,
    ) -> None:
        self.bundle_dir = bundle_dir
        self.mock = mock
        self.clock = ScaledClock(clock_speed)
        self.max_calls = max_calls
        self.bundles: dict[str, LectureBundle] = {}
        self.sessions: dict[str, tuple[LectureSession, EventBuffer]] = {}
        self.scan_bundles()
        self.recover_sessions()

    def _gateway(self) -> Gateway:
        provider = MockProvider() if self.mock else provider_from_env()
        return Gateway(provider, max_calls=self.max_calls)

    def scan_bundles(self) -> None:
        self.bundles.clear()
        if not self.bundle_dir.is_dir():
            return
        candidates = [self.bundle_dir] + sorted(p for p in self.bundle_dir.iterdir() if p.is_dir())
        for candidate in candidates:
            if candidate.name == SESSIONS_DIRNAME or not (candidate / "manifest.json").is_file():
                continue
            bundle = load_bundle(candidate)
            self.bundles[bundle.id] = bundle

    def bundle(self, bundle_id: str) -> LectureBundle:
        if bundle_id not in self.bundles:
            raise UnknownId(f"unknown lecture {bundle_id!r}")
        return self.bundles[bundle_id]

    def session(self, session_id: str) -> tuple[LectureSession, EventBuffer]:
        if session_id not in self.sessions:
            raise UnknownId(f"unknown session {session_id!r}")
        return self.sessions[session_id]

    def _session_dir(self) -> Path:
        path = self.bundle_dir / SESSIONS_DIRNAME
        path.mkdir(parents=True, exist_ok=True)
        return path

    def create_session(
        self,
        bundle_id: str,
        *,
        interests: list[str],
        difficulty: int = 3,
        voice_id: str = "default",
        avatar_region: Optional[tuple[float, float, float, float]] = None,
        session_id: Optional[str] = None,
    ) -> tuple[LectureSession, EventBuffer]:
        bundle = self.bundle(bundle_id)
        session_id = session_id or f"sess-{uuid.uuid4().hex[:12]}"
        buffer = EventBuffer()
        speech = StubSpeechProvider() if self.mock else speech_provider_from_env()
        images = StubImageSearch() if self.mock else image_provider_from_env()
        session = LectureSession(
            session_id,
            bundle,
            self._gateway(),
            self.clock,
            speech_provider=speech,
            image_provider=images,
            interests=interests,
            difficulty=difficulty,
            log_path=self._session_dir() / f"{session_id}.jsonl",
            emit=buffer.emit,
            voice_id=voice_id,
            avatar_region=avatar_region,
        )
        write_json(
            self._session_dir() / f"{session_id}.meta.json",
            {
                "sessionId": session_id,
                "bundleId": bundle_id,
                "interests": interests,
                "difficulty": difficulty,
                "voiceId": voice_id,
                "avatarRect": None if avatar_region is None else list(avatar_region),
            },
        )
        self.sessions[session_id] = (session, buffer)
        return session, buffer

    def recover_sessions(self) -> None:
        """Re-register sessions from metadata sidecars; logs reload from disk."""
        sessions_dir = self.bundle_dir / SESSIONS_DIRNAME
        if not sessions_dir.is_dir():
            return
        for meta_path in sorted(sessions_dir.glob("*.meta.json")):
            meta = read_json(meta_path)
            if meta.get("bundleId") not in self.bundles:
                continue
            avatar = meta.get("avatarRect")
            self.create_session(
                meta["bundleId"],
                interests=list(meta.get("interests", [])),
                difficulty=int(meta.get("difficulty", 3)),
                voice_id=str(meta.get("voiceId", "default")),
                avatar_region=None if avatar is None else tuple(avatar),
                session_id=meta["sessionId"],
            )


def _as_rect(value: Any, *, where: str) -> tuple[float, float, float, float]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 4
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise SchemaViolation(where, "expected [x0, y0, x1, y1] with numeric entries")
    x0, y0, x1, y1 = (float(v) for v in value)
    if not (0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0):
        raise SchemaViolation(where, "rectangle must be normalized with positive area")
    return (x0, y0, x1, y1)


def _opt_rect(payload: dict, key: str) -> Optional[tuple[float, float, float, float]]:
    value = payload.get(key)
    if value is None:
        return None
    return _as_rect(value, where=key)


def _field(payload: dict, key: str, kind: type, *, where: Optional[str] = None) -> Any:
    if key not in payload:
        raise SchemaViolation(where or key, "required field missing")
    value = payload[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaViolation(where or key, "expected an integer")
    if kind is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise SchemaViolation(where or key, "expected a number")
    if kind is str and not isinstance(value, str):
        raise SchemaViolation(where or key, "expected a string")
    if kind is bool and not isinstance(value, bool):
        raise SchemaViolation(where or key, "expected a boolean")
    return kind(value)


def _lecture_card(bundle: LectureBundle) -> dict:
    return {
        "id": bundle.id,
        "title": bundle.title,
        "durationSec": bundle.duration_sec,
        "sectionCount": len(bundle.sections),
        "exampleCount": len(bundle.examples),
        "createdAt": bundle.created_at,
    }


def create_app(
    bundle_dir: str | Path,
    *,
    mock: Optional[bool] = None,
    clock_speed: Optional[float] = None,
    max_calls: Optional[int] = None,
    cors_origins: Optional[list[str]] = None,
) -> FastAPI:
    """Build the service; ``mock`` forces the deterministic offline providers."""
    if mock is None:
        mock = os.environ.get("LLM_MOCK") == "1"
    if clock_speed is None:
        env_speed = os.environ.get("LK_CLOCK_SPEED")
        clock_speed = float(env_speed) if env_speed else (40.0 if mock else 1.0)

    state = AppState(Path(bundle_dir), mock=mock, clock_speed=clock_speed, max_calls=max_calls)
    app = FastAPI(title="lecturekit", docs_url=None, redoc_url=None)
    app.state.lecturekit = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or [os.environ.get("LK_CORS_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(LectureKitError)
    async def _lecturekit_error(request: Request, exc: LectureKitError) -> JSONResponse:
        body = {"code": exc.code, "httpStatus": exc.http_status, "message": str(exc)}
        detail = getattr(exc, "detail", None)
        if callable(detail):
            body["detail"] = detail()
        return JSONResponse(body, status_code=exc.http_status)

    # --- lectures -------------------------------------------------------------

    @app.get("/")
    def health() -> dict:
        return {
            "service": "lecturekit",
            "mock": state.mock,
            "lectures": len(state.bundles),
            "sessions": len(state.sessions),
        }

    @app.get("/lectures")
    def list_lectures() -> list[dict]:
        return [_lecture_card(b) for b in sorted(state.bundles.values(), key=lambda b: b.id)]

    @app.get("/lectures/{bundle_id}/manifest")
    def get_manifest(bundle_id: str) -> Any:
        bundle = state.bundle(bundle_id)
        return read_json(bundle.root / "manifest.json")

    @app.get("/lectures/{bundle_id}/sections/{n}/slide.png")
    def get_slide(bundle_id: str, n: int) -> FileResponse:
        bundle = state.bundle(bundle_id)
        if not 0 <= n < len(bundle.sections):
            raise UnknownId(f"lecture {bundle_id!r} has no section {n}")
        path = bundle.resolve(bundle.sections[n].slide_image_ref)
        return FileResponse(path, media_type="image/png")

    @app.get("/lectures/{bundle_id}/sections/{n}/content.json")
    def get_section_content(bundle_id: str, n: int) -> Any:
        bundle = state.bundle(bundle_id)
        if not 0 <= n < len(bundle.sections):
            raise UnknownId(f"lecture {bundle_id!r} has no section {n}")
        slide = bundle.resolve(bundle.sections[n].slide_image_ref)
        return read_json(slide.parent / "content.json")

    @app.get("/lectures/{bundle_id}/examples/{name}")
    def get_example(bundle_id: str, name: str) -> FileResponse:
        bundle = state.bundle(bundle_id)
        for asset in bundle.examples:
            ref = bundle.resolve(asset.html_ref)
            if ref.name == name:
                return FileResponse(ref, media_type="text/html")
        raise UnknownId(f"lecture {bundle_id!r} has no example {name!r}")

    @app.get("/lectures/{bundle_id}/video")
    def get_video(bundle_id: str) -> FileResponse:
        bundle = state.bundle(bundle_id)
        path = bundle.resolve(bundle.video_ref)
        if not path.is_file():
            raise UnknownId(f"lecture {bundle_id!r} has no stored video file")
        return FileResponse(path, media_type="video/mp4")

    # --- sessions ---------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)) -> dict:
        bundle_id = _field(payload, "bundleId", str)
        interests = payload.get("interests", [])
        if not isinstance(interests, list) or not all(isinstance(i, str) for i in interests):
            raise SchemaViolation("interests", "expected a list of strings")
        difficulty = payload.get("difficulty", 3)
        if isinstance(difficulty, bool) or not isinstance(difficulty, int):
            raise SchemaViolation("difficulty", "expected an integer")
        session, _ = state.create_session(
            bundle_id,
            interests=interests,
            difficulty=difficulty,
            avatar_region=_opt_rect(payload, "avatarRect"),
        )
        return session.snapshot()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session, buffer = state.session(session_id)
        snap = session.snapshot()
        snap["eventCount"] = len(buffer)
        return snap

    @app.post("/sessions/{session_id}/clarify")
    def clarify(session_id: str, payload: dict = Body(default={})) -> dict:
        session, _ = state.session(session_id)
        area = _opt_rect(payload, "areaRect")
        question = payload.get("question")
        if question is not None and not isinstance(question, str):
            raise SchemaViolation("question", "expected a string")
        text, plan, job = session.ask_clarification(area, question or "")
        return {"text": text, "plan": plan.to_json(), "jobId": job.job_id}

    @app.post("/sessions/{session_id}/visual")
    def visual(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        area = _as_rect(_field(payload, "areaRect", list), where="areaRect")
        results = session.request_visual(area)
        return {"results": [r.to_json() for r in results]}

    @app.post("/sessions/{session_id}/visual/dismiss")
    def visual_dismiss(session_id: str) -> dict:
        session, _ = state.session(session_id)
        session.dismiss_visual()
        return session.snapshot()

    @app.post("/sessions/{session_id}/quiz/next")
    def quiz_next(session_id: str, payload: dict = Body(default={})) -> dict:
        session, _ = state.session(session_id)
        section_id = payload.get("sectionId")
        if section_id is not None and not isinstance(section_id, str):
            raise SchemaViolation("sectionId", "expected a string")
        item = session.serve_quiz(section_id)
        return {
            "item": item.to_dict(),
            "level": item.difficulty,
            "levelFallback": item.difficulty != session.difficulty,
        }

    @app.post("/sessions/{session_id}/quiz/answer")
    def quiz_answer(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        answer = _field(payload, "answer", str)
        correct, explanation = session.answer_quiz(answer)
        return {"correct": correct, "explanation": explanation}

    @app.post("/sessions/{session_id}/difficulty")
    def set_difficulty(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        session.set_difficulty(_field(payload, "level", int))
        return {"difficulty": session.difficulty}

    @app.post("/sessions/{session_id}/break")
    def start_break(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        minutes = _field(payload, "minutes", int)
        story, job = session.start_break(minutes)
        return {"story": story, "jobId": job.job_id, "minutes": minutes}

    @app.post("/sessions/{session_id}/highlight")
    def set_highlight(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        session.set_highlight_enabled(_field(payload, "enabled", bool))
        return {
            "enabled": session.highlight_enabled,
            "active": [entry.to_dict() for entry in session.active_highlights()],
        }

    @app.post("/sessions/{session_id}/position")
    def set_position(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        return session.set_position(_field(payload, "tSec", float))

    @app.post("/sessions/{session_id}/example/open")
    def example_open(session_id: str, payload: dict = Body(default={})) -> dict:
        session, _ = state.session(session_id)
        index = payload.get("index", 0)
        if isinstance(index, bool) or not isinstance(index, int):
            raise SchemaViolation("index", "expected an integer")
        asset = session.open_example(index)
        return asset.to_dict()

    @app.post("/sessions/{session_id}/example/close")
    def example_close(session_id: str) -> dict:
        session, _ = state.session(session_id)
        session.close_example()
        return session.snapshot()

    @app.post("/sessions/{session_id}/summary/open")
    def summary_open(session_id: str) -> dict:
        session, _ = state.session(session_id)
        session.open_summary()
        return session.snapshot()

    @app.post("/sessions/{session_id}/summary/close")
    def summary_close(session_id: str) -> dict:
        session, _ = state.session(session_id)
        session.close_summary()
        return session.snapshot()

    @app.post("/sessions/{session_id}/note")
    def add_note(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        text = _field(payload, "text", str)
        record = session.add_note(text, _opt_rect(payload, "areaRect"))
        return record.to_dict()

    @app.post("/sessions/{session_id}/replay")
    def replay(session_id: str, payload: dict = Body(...)) -> dict:
        session, _ = state.session(session_id)
        job = session.replay_text(_field(payload, "recordIndex", int))
        return {"jobId": job.job_id, "text": job.text}

    @app.get("/sessions/{session_id}/summary")
    def get_summary(session_id: str) -> dict:
        session, _ = state.session(session_id)
        return session.build_summary().to_json()

    @app.get("/sessions/{session_id}/records")
    def get_records(session_id: str) -> dict:
        session, _ = state.session(session_id)
        return {"records": [r.to_dict() for r in session.log.records]}

    @app.get("/sessions/{session_id}/events")
    def events(
        session_id: str,
        request: Request,
        after: int = 0,
        max_events: Optional[int] = None,
        idle_timeout_sec: Optional[float] = None,
    ) -> StreamingResponse:
        _, buffer = state.session(session_id)
        last_id = request.headers.get("last-event-id")
        if last_id and last_id.isdigit():
            after = max(after, int(last_id))
        return StreamingResponse(
            buffer.stream_sse(
                after, max_events=max_events, idle_timeout_sec=idle_timeout_sec
            ),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache"},
        )

    return app
