"""HTTP ingestion and query service.

Everything game-rule-shaped runs server-side: clients upload sessions and
scenes, then drive games through the step endpoint and receive masked
state views, so the one rules implementation in :mod:`gecka.game` is the
single source of truth. Storage is the embedded JSON-lines store. Routes
and payloads are documented in ``docs/api.md``.
"""

from __future__ import annotations

import os
import threading
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .assertions import assertion_to_doc, extract_assertions
from .errors import (
    CommandError,
    GameOverError,
    GeckaError,
    InvalidSceneError,
    SessionFormatError,
    UnknownReferenceError,
    ValidationError,
)
from .game import GameState, command_from_doc, start_game, state_view, step
from .jsonutil import content_hash
from .knowledge import KnowledgeBase
from .scene import Scene, load_world
from .session import Session, parse_session_xml, session_from_doc, session_to_doc
from .store import JsonlStore
from .text import normalize_term, render_term

DEFAULT_PORT = 8077
TOKEN_ENV = "GECKA_TOKEN"


# -- POAG statistics ----------------------------------------------------------

@dataclass(frozen=True)
class PoagStat:
    item: str
    action: str
    prerequisites: str  # comma-joined, authoring order
    outcome: str
    goal: str | None
    frequency: int


def _rule_terms(payload: dict, kind: str) -> tuple[str, str, tuple[str, ...], tuple[str, ...], str | None]:
    prereq_key = "prerequisites" if kind == "define-poag" else "ingredients"
    item = normalize_term(payload["item"])
    action = normalize_term(payload["action"])
    prereqs = tuple(
        normalize_term(render_term(p["name"], p.get("state")))
        for p in payload.get(prereq_key, ())
    )
    outcome = tuple(
        normalize_term(render_term(o["name"], o.get("state")))
        for o in payload.get("outcome", ())
    )
    goal = normalize_term(payload["goal"]) if payload.get("goal") else None
    return item, action, prereqs, outcome, goal


def poag_stats(sessions: Iterable[Session], limit: int) -> list[PoagStat]:
    """Most common rules across sessions, grouped by normalized content.

    Prerequisite/outcome grouping is order-insensitive (multisets); the
    rendered row keeps the authoring order of the first occurrence. Sorted
    by frequency descending, then item ascending.
    """
    if limit < 1:
        raise ValidationError("limit must be >= 1")
    counts: Counter = Counter()
    first_seen: dict = {}
    for session in sessions:
        for action in session.actions:
            if action.kind not in ("define-poag", "define-combination"):
                continue
            item, verb, prereqs, outcome, goal = _rule_terms(action.payload, action.kind)
            key = (
                item,
                verb,
                tuple(sorted(Counter(prereqs).items())),
                tuple(sorted(Counter(outcome).items())),
                goal,
            )
            counts[key] += 1
            first_seen.setdefault(key, (prereqs, outcome))
    stats = [
        PoagStat(
            item=key[0],
            action=key[1],
            prerequisites=", ".join(first_seen[key][0]),
            outcome=", ".join(first_seen[key][1]),
            goal=key[4],
            frequency=freq,
        )
        for key, freq in counts.items()
    ]
    stats.sort(key=lambda s: (-s.frequency, s.item, s.action, s.prerequisites))
    return stats[:limit]


def stat_to_doc(stat: PoagStat) -> dict:
    return {
        "item": stat.item,
        "action": stat.action,
        "prerequisites": stat.prerequisites,
        "outcome": stat.outcome,
        "goal": stat.goal,
        "frequency": stat.frequency,
    }


# -- game registry ------------------------------------------------------------

@dataclass
class _GameSlot:
    kb: KnowledgeBase
    scenes: dict[str, Scene]
    state: GameState
    lock: threading.Lock


class _Games:
    """In-memory table of running games; stepping is per-game exclusive."""

    def __init__(self):
        self._slots: dict[str, _GameSlot] = {}
        self._seq = 0
        self._lock = threading.Lock()

    def create(self, kb: KnowledgeBase, scenes: dict[str, Scene], state: GameState) -> str:
        with self._lock:
            self._seq += 1
            game_id = f"g{self._seq}"
            self._slots[game_id] = _GameSlot(kb, scenes, state, threading.Lock())
        return game_id

    def get(self, game_id: str) -> _GameSlot:
        slot = self._slots.get(game_id)
        if slot is None:
            raise UnknownReferenceError(f"unknown game {game_id}")
        return slot


# -- application --------------------------------------------------------------

def create_app(
    data_dir: str | Path,
    token: str | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    store = JsonlStore(data_dir)
    games = _Games()
    token = token if token is not None else os.environ.get(TOKEN_ENV)
    app = FastAPI(title="gecka", docs_url=None, redoc_url=None)
    app.state.store = store

    def check_token(request: Request):
        if not token:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or bad token")

    @app.exception_handler(GeckaError)
    async def on_domain_error(request: Request, exc: GeckaError):
        status = 400
        if isinstance(exc, UnknownReferenceError):
            status = 404
        elif isinstance(exc, GameOverError):
            status = 409
        return JSONResponse(status_code=status, content={"error": str(exc)})

    def stored_sessions() -> list[Session]:
        return [session_from_doc(r["body"]) for r in store.all("sessions")]

    # ---- sessions

    @app.post("/api/sessions")
    async def ingest_session(request: Request):
        check_token(request)
        raw = await request.body()
        content_type = request.headers.get("content-type", "")
        if "xml" in content_type:
            session = parse_session_xml(raw.decode("utf-8"))
        else:
            try:
                doc = await request.json()
            except Exception:
                raise SessionFormatError("body is neither XML nor JSON") from None
            session = session_from_doc(doc)
        body = session_to_doc(session)

        def digest(doc: dict) -> str:
            # identity is (designer, timestamp, content); the id is allowed to differ
            return content_hash({k: v for k, v in doc.items() if k != "id"})

        existing = store.get("sessions", session.id)
        if existing is not None:
            if content_hash(existing["body"]) == content_hash(body):
                return JSONResponse(status_code=200, content={"id": session.id})
            raise HTTPException(
                status_code=409,
                detail=f"session {session.id} already exists with different content",
            )
        for record in store.all("sessions"):
            if digest(record["body"]) == digest(body):
                return JSONResponse(status_code=200, content={"id": record["id"]})
        store.put("sessions", session.id, body)
        for i, assertion in enumerate(extract_assertions(session)):
            store.put("assertions", f"{session.id}:{assertion.provenance[1]}:{i}", assertion_to_doc(assertion))
        return JSONResponse(status_code=201, content={"id": session.id})

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        record = store.get("sessions", session_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return record["body"]

    # ---- scenes

    @app.put("/api/scenes/{scene_id}")
    async def put_scene(scene_id: str, request: Request):
        check_token(request)
        try:
            doc = await request.json()
        except Exception:
            raise ValidationError("scene body must be JSON") from None
        if doc.get("id") != scene_id:
            raise ValidationError(f"scene id {doc.get('id')!r} does not match URL {scene_id!r}")
        from .scene import scene_from_doc

        scene_from_doc(doc)  # structural validation
        existed = store.get("scenes", scene_id) is not None
        store.put("scenes", scene_id, doc)
        return JSONResponse(status_code=200 if existed else 201, content={"id": scene_id})

    @app.get("/api/scenes/{scene_id}")
    def get_scene(scene_id: str):
        record = store.get("scenes", scene_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown scene {scene_id}")
        return record["body"]

    # ---- traces

    @app.post("/api/traces")
    async def post_trace(request: Request):
        check_token(request)
        try:
            doc = await request.json()
        except Exception:
            raise ValidationError("trace body must be JSON") from None
        if "header" not in doc or "events" not in doc:
            raise ValidationError("trace body needs 'header' and 'events'")
        trace_id = f"tr{store.count('traces') + 1}"
        store.put("traces", trace_id, doc)
        return JSONResponse(status_code=201, content={"id": trace_id})

    @app.get("/api/traces/{trace_id}")
    def get_trace(trace_id: str):
        record = store.get("traces", trace_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown trace {trace_id}")
        return record["body"]

    # ---- assertions & stats

    @app.get("/api/assertions")
    def get_assertions(session: str | None = None):
        records = store.all("assertions")
        bodies = [r["body"] for r in records]
        if session is not None:
            bodies = [b for b in bodies if b["session"] == session]
        return bodies

    @app.get("/api/stats/poags")
    def get_poag_stats(limit: int = Query(default=10, ge=1)):
        return [stat_to_doc(s) for s in poag_stats(stored_sessions(), limit)]

    # ---- games

    def _load_world_from_store(scene_id: str) -> tuple[dict[str, Scene], KnowledgeBase]:
        docs = []
        pending = [scene_id]
        seen = set()
        while pending:
            current = pending.pop(0)
            if current in seen:
                continue
            seen.add(current)
            record = store.get("scenes", current)
            if record is None:
                if current == scene_id:
                    raise UnknownReferenceError(f"unknown scene {scene_id}")
                continue  # dangling portal targets surface as portal-error events
            docs.append(record["body"])
            for portal in record["body"].get("portals", ()):
                target = portal.get("target")
                if target:
                    pending.append(target)
        return load_world(docs)

    @app.post("/api/games")
    async def create_game(request: Request):
        check_token(request)
        doc = await request.json()
        scene_id = doc.get("scene")
        if not scene_id:
            raise ValidationError("create body needs 'scene'")
        seed = int(doc.get("seed", 0))
        scenes, kb = _load_world_from_store(str(scene_id))
        state = start_game(scenes[str(scene_id)], kb, seed)
        game_id = games.create(kb, scenes, state)
        slot = games.get(game_id)
        return JSONResponse(
            status_code=201,
            content={"id": game_id, "state": state_view(slot.state, slot.kb, slot.scenes)},
        )

    @app.post("/api/games/{game_id}/step")
    async def step_game(game_id: str, request: Request):
        check_token(request)
        doc = await request.json()
        cmd = command_from_doc(doc.get("command", doc))
        slot = games.get(game_id)
        with slot.lock:
            try:
                new_state, events = step(slot.state, cmd, slot.kb, slot.scenes)
            except CommandError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
            slot.state = new_state
        return {
            "state": state_view(slot.state, slot.kb, slot.scenes),
            "events": [{"turn": e.turn, "kind": e.kind, "payload": e.payload} for e in events],
        }

    @app.get("/api/games/{game_id}")
    def get_game(game_id: str):
        slot = games.get(game_id)
        return {"state": state_view(slot.state, slot.kb, slot.scenes)}

    # ---- static webapp (mounted last so /api wins)

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="webapp")

    return app


def serve(
    data_dir: str | Path,
    port: int = DEFAULT_PORT,
    host: str = "127.0.0.1",
    token: str | None = None,
    static_dir: str | Path | None = None,
):
    """Blocking entry point used by ``gecka serve``."""
    import uvicorn

    app = create_app(data_dir, token=token, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
