"""HTTP JSON API for interactive diagram navigation.

The server hosts one model plus one catalogue. Sessions live in memory and
expire after 30 minutes idle; cue and walkthrough audio is rendered on
demand, cached, and addressed by deterministic ids so clients can cache.
"""

from __future__ import annotations

import threading
import time

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .audio import wav_bytes
from .catalogue import SoundCatalogue
from .navigation import IllegalMoveError, Navigator, UnknownMoveError
from .sonifier import (
    RenderProfile,
    UnboundConceptError,
    captions_to_vtt,
    plan_walkthrough,
    render_timeline,
)
from .uml import ClassModel, model_stats

SESSION_TTL_S = 30 * 60


class CreateSessionBody(BaseModel):
    audience: str = "expert"


class MoveBody(BaseModel):
    move: str
    index: int = 0


def _model_document(model: ClassModel) -> dict:
    return {
        "name": model.name,
        "stats": model_stats(model),
        "packages": [
            {"name": p.name, "path": list(p.path), "ref": f"package:{'.'.join(p.path)}"}
            for p in model.packages
        ],
        "classifiers": [
            {
                "name": c.name,
                "kind": c.kind,
                "ref": f"classifier:{c.name}",
                "package": list(c.package_path),
                "position": {"x": c.position.x, "y": c.position.y} if c.position else None,
                "attributes": [
                    {"name": a.name, "ref": f"attr:{c.name}.{a.name}"} for a in c.attributes
                ],
                "operations": [
                    {"name": o.name, "ref": f"op:{c.name}.{o.name}"} for o in c.operations
                ],
            }
            for c in model.classifiers
        ],
        "relationships": [
            {
                "ref": f"rel:{r.decl_index}",
                "kind": r.kind,
                "source": r.source,
                "target": r.target,
                "assoc_class": r.assoc_class,
                "label": r.label,
            }
            for r in model.relationships
        ],
    }


def create_app(
    model: ClassModel,
    catalogue: SoundCatalogue,
    session_ttl_s: float = SESSION_TTL_S,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="sonuml navigation service")
    navigator = Navigator(model, catalogue)
    sessions: dict[str, object] = {}
    sessions_lock = threading.Lock()
    walkthrough_cache: dict[str, tuple[bytes, str]] = {}
    walkthrough_lock = threading.Lock()

    def _purge_expired():
        now = time.monotonic()
        stale = [sid for sid, s in sessions.items() if now - s.last_access > session_ttl_s]
        for sid in stale:
            del sessions[sid]

    def _session(sid: str):
        with sessions_lock:
            _purge_expired()
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown or expired session")
        return session

    def _event_doc(session, event) -> dict:
        return {
            "session": session.id,
            "focus": event.focus,
            "caption": event.caption,
            "breadcrumb": event.breadcrumb,
            "cue_id": event.cue_id,
            "cue_url": f"/audio/{event.cue_id}.wav",
            "moved": event.moved,
            "boundary": event.boundary,
        }

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            profile = RenderProfile(audience=body.audience)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        try:
            session = navigator.create_session(profile)
        except UnboundConceptError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        with sessions_lock:
            _purge_expired()
            sessions[session.id] = session
        event = navigator.navigate(session, "repeat_cue")
        doc = _event_doc(session, event)
        doc["audience"] = body.audience
        return doc

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session = _session(sid)
        return {
            "session": session.id,
            "focus": session.focus,
            "breadcrumb": navigator.breadcrumb(session.focus),
            "audience": session.profile.audience,
            "history_length": len(session.history),
        }

    @app.post("/sessions/{sid}/move")
    def move(sid: str, body: MoveBody):
        session = _session(sid)
        try:
            event = navigator.navigate(session, body.move, body.index)
        except UnknownMoveError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        except IllegalMoveError as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from None
        return _event_doc(session, event)

    @app.get("/audio/{cue_id}.wav")
    def audio(cue_id: str):
        buf = navigator.cached_audio(cue_id)
        if buf is None:
            raise HTTPException(status_code=404, detail="unknown cue id")
        return Response(content=wav_bytes(buf), media_type="audio/wav")

    @app.get("/model")
    def model_doc():
        return _model_document(navigator.model)

    def _walkthrough(audience: str) -> tuple[bytes, str]:
        with walkthrough_lock:
            cached = walkthrough_cache.get(audience)
            if cached is None:
                profile = RenderProfile(audience=audience)
                timeline = plan_walkthrough(navigator.model, catalogue, profile)
                buf, track = render_timeline(
                    timeline, catalogue, profile, navigator.model.name
                )
                cached = (wav_bytes(buf), captions_to_vtt(track))
                walkthrough_cache[audience] = cached
        return cached

    @app.get("/walkthrough.wav")
    def walkthrough_wav(audience: str = "expert"):
        data, _ = _walkthrough(audience)
        return Response(content=data, media_type="audio/wav")

    @app.get("/walkthrough.vtt")
    def walkthrough_vtt(audience: str = "expert"):
        _, vtt = _walkthrough(audience)
        return Response(content=vtt, media_type="text/vtt")

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # Mounted last so the JSON endpoints above keep precedence.
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
