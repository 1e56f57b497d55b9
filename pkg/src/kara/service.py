"""HTTP service for the visual editing workflow.

Sessions are in-memory with a TTL: a session holds the visualisation
program, the initial visualisation answer set, and the edit log; the edited
interpretation is always derived by replaying the log, never stored twice.
Each session serializes its own edits and abductions (concurrent requests
to the same session get 409); different sessions proceed in parallel.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .abduction import DEFAULT_INTEGRITY, DomainTerms, PredicateSets, abducible_predicates, abduce
from .edits import EditOp, apply_edits, edit_from_json
from .errors import AffordanceError, EditError, KaraError, ParseError, UnsafeRuleError
from .layout import layout
from .parser import parse_interpretation, parse_program, parse_term_text
from .scene import build_scene, scene_to_json
from .solving import solve
from .svg import render_svg
from .syntax import Interpretation, Program, format_term, term_key
from .vocabulary import VisInterpretation, project_vis

DEFAULT_SESSION_TTL = 3600.0


@dataclass
class Session:
    id: str
    program: Program
    base_vis: VisInterpretation
    input_facts: Interpretation
    seed: int
    edits: list[EditOp] = field(default_factory=list)
    touched: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def current_vis(self) -> VisInterpretation:
        return apply_edits(self.base_vis, self.edits)


class VisualizeRequest(BaseModel):
    program: "str | None" = None
    interpretation: "str | None" = None
    corpus: "str | None" = None
    seed: int = 0


class AbduceRequest(BaseModel):
    integrity: "list[str] | None" = None
    abducibles: "list[str] | None" = None
    domainTerms: "list[str] | None" = None
    all: bool = False


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _pred_key(text: str) -> tuple[str, int]:
    name, _, arity = text.partition("/")
    if not arity.isdigit() or not name:
        raise ValueError(f"predicate must be written name/arity, got {text!r}")
    return (name, int(arity))


def create_app(corpus_dir: "Path | None" = None, frontend_dir: "Path | None" = None,
               session_ttl: float = DEFAULT_SESSION_TTL) -> FastAPI:
    app = FastAPI(title="kara", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    app.state.sessions = sessions

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_request: Request, exc: RequestValidationError):
        return _error(400, f"malformed request body: {exc.errors()[:1]}")

    def get_session(session_id: str) -> "Session | None":
        with registry_lock:
            session = sessions.get(session_id)
            if session is None:
                return None
            if time.monotonic() - session.touched > session_ttl:
                del sessions[session_id]
                return None
            session.touched = time.monotonic()
            return session

    def scene_payload(session: Session) -> dict:
        scene = build_scene(session.current_vis())
        placed = layout(scene, seed=session.seed)
        payload = scene_to_json(scene)
        payload["layout"] = {
            "coords": {
                format_term(ident): [x, y, z]
                for ident, (x, y, z) in sorted(placed.coords.items(),
                                               key=lambda kv: term_key(kv[0]))
            },
            "cells": [
                {"grid": format_term(grid), "row": row, "col": col, "x": x, "y": y}
                for (grid, row, col), (x, y) in sorted(
                    placed.cell_coords.items(),
                    key=lambda kv: (term_key(kv[0][0]), kv[0][1], kv[0][2]))
            ],
        }
        return payload

    @app.get("/api/corpus")
    def list_corpus():
        if corpus_dir is None or not corpus_dir.exists():
            return []
        out = []
        for entry in sorted(corpus_dir.iterdir()):
            if (entry / "program.lp").exists():
                out.append({"name": entry.name, "hasFacts": (entry / "facts.lp").exists()})
        return out

    @app.post("/api/visualize")
    def visualize(request: VisualizeRequest):
        program_text, facts_text = request.program, request.interpretation
        if request.corpus:
            if corpus_dir is None:
                return _error(400, "no corpus directory configured")
            entry = corpus_dir / request.corpus
            if not (entry / "program.lp").exists():
                return _error(404, f"unknown corpus entry {request.corpus!r}")
            program_text = (entry / "program.lp").read_text(encoding="utf-8")
            facts_path = entry / "facts.lp"
            facts_text = facts_path.read_text(encoding="utf-8") if facts_path.exists() else ""
        if program_text is None:
            return _error(400, "either 'program' or 'corpus' is required")
        try:
            program = parse_program(program_text)
            facts = parse_interpretation(facts_text or "")
        except (ParseError, UnsafeRuleError, KaraError) as exc:
            return _error(400, str(exc))
        try:
            models = solve(program, facts, limit=1)
        except KaraError as exc:
            return _error(422, str(exc))
        if not models:
            return _error(422, "the program has no answer set")
        session = Session(
            id=uuid.uuid4().hex,
            program=program,
            base_vis=project_vis(models[0]),
            input_facts=facts,
            seed=request.seed,
        )
        with registry_lock:
            sessions[session.id] = session
        return {"sessionId": session.id, "scene": scene_payload(session),
                "interpretation": facts.to_text()}

    @app.get("/api/session/{session_id}/scene")
    def get_scene(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown or expired session")
        return {"sessionId": session.id, "scene": scene_payload(session),
                "interpretation": session.input_facts.to_text()}

    @app.post("/api/session/{session_id}/edit")
    async def post_edit(session_id: str, request: Request):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown or expired session")
        try:
            body = await request.json()
            op = edit_from_json(body)
        except EditError as exc:
            return _error(400, str(exc))
        except Exception:
            return _error(400, "malformed request body")
        if not session.lock.acquire(blocking=False):
            return _error(409, "session is busy")
        try:
            apply_edits(session.base_vis, session.edits + [op])  # dry run
            session.edits.append(op)
        except AffordanceError as exc:
            return _error(422, str(exc))
        except EditError as exc:
            return _error(422, str(exc))
        finally:
            session.lock.release()
        return {"sessionId": session.id, "scene": scene_payload(session)}

    @app.post("/api/session/{session_id}/abduce")
    def post_abduce(session_id: str, request: AbduceRequest):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown or expired session")
        try:
            abducible = frozenset(abducible_predicates(session.program))
            if request.abducibles:
                abducible |= {_pred_key(p) for p in request.abducibles}
            integrity = DEFAULT_INTEGRITY
            if request.integrity:
                integrity = frozenset(_pred_key(p) for p in request.integrity)
            sets = PredicateSets(abducible, integrity)
            extra = DomainTerms(frozenset(
                parse_term_text(t) for t in (request.domainTerms or ())))
        except (ValueError, ParseError) as exc:
            return _error(400, str(exc))
        if not session.lock.acquire(blocking=False):
            return _error(409, "session is busy")
        try:
            # Preferring the session's input keeps unconstrained atoms as they
            # were, so the recovered interpretation is a minimal change.
            result = abduce(session.current_vis(), session.program, sets=sets,
                            extra_domain=extra, all_models=request.all,
                            prefer=session.input_facts)
        except KaraError as exc:
            return _error(422, str(exc))
        finally:
            session.lock.release()
        if result.status == "unsat":
            return {"result": "unsat"}
        answers = [
            {"atoms": [str(a) for a in interp], "text": interp.to_text()}
            for interp in result.interpretations
        ]
        return {
            "result": "ok",
            "interpretation": answers[0]["text"],
            "atoms": answers[0]["atoms"],
            "answers": answers,
        }

    @app.get("/api/session/{session_id}/svg")
    def get_svg(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown or expired session")
        scene = build_scene(session.current_vis())
        placed = layout(scene, seed=session.seed)
        return Response(content=render_svg(scene, placed), media_type="image/svg+xml")

    if frontend_dir is not None and frontend_dir.exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app
