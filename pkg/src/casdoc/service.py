"""HTTP service: document hosting, conversion API, and event ingestion.

The service plays the role of the study website: it serves converted
documents from a directory, keeps the participant/session/format cookies,
and writes the server-origin events itself (page visits, consents,
session starts, document opens, format changes). Client-origin events
arrive in batches on POST /events.

Conversion and linting are also exposed as JSON endpoints so the CLI and
other tooling can stay thin clients.
"""

from __future__ import annotations

import secrets
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse, HTMLResponse, JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .apiref import ApiRefIndex
from .convert import convert_source, lint_source
from .database import AnnotationDb
from .errors import (
    AnnotationSyntaxError,
    CasdocError,
    Diagnostic,
    GraphError,
    IngestError,
)
from .graph import graph_to_json
from .parser import SourceFile
from .render import FORMAT_BASELINE, FORMAT_CASDOC, RenderOptions
from .telemetry import EventLog, InteractionEvent

FORMATS = (FORMAT_CASDOC, FORMAT_BASELINE)


class DiagnosticModel(BaseModel):
    severity: str
    code: str
    message: str
    line: int | None = None

    @staticmethod
    def wrap(d: Diagnostic) -> "DiagnosticModel":
        return DiagnosticModel(severity=d.severity, code=d.code, message=d.message, line=d.line)


class ConvertRequest(BaseModel):
    source: str
    path: str = "Example.java"
    document_id: str = Field(pattern=r"^[A-Za-z0-9][A-Za-z0-9_-]*$")
    title: str | None = None
    embed_assets: bool = True
    telemetry_url: str | None = None
    include_graph: bool = False


class ConvertResponse(BaseModel):
    html: str
    baseline: str
    graph: str | None = None
    diagnostics: list[DiagnosticModel]


class LintRequest(BaseModel):
    source: str
    path: str = "Example.java"


class LintResponse(BaseModel):
    diagnostics: list[DiagnosticModel]
    clean: bool


def _now() -> datetime:
    return datetime.now(timezone.utc)


def create_app(
    docs_dir: str | Path | None = None,
    log: EventLog | None = None,
    db: AnnotationDb | None = None,
    index: ApiRefIndex | None = None,
    clock=None,
) -> FastAPI:
    docs = Path(docs_dir) if docs_dir is not None else None
    clock = clock or _now

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        if log is not None:
            log.close()

    app = FastAPI(title="casdoc", lifespan=lifespan)

    def record(events: list[InteractionEvent]) -> None:
        if log is not None and events:
            log.append(events)

    # --- conversion API ----------------------------------------------------

    @app.post("/api/convert")
    def api_convert(req: ConvertRequest):
        src = SourceFile(path=req.path, text=req.source)
        options = RenderOptions(
            document_id=req.document_id,
            title=req.title,
            embed_assets=req.embed_assets,
            telemetry_url=req.telemetry_url,
        )
        try:
            result = convert_source(src, options, db=db, index=index)
        except GraphError as exc:
            return JSONResponse(
                status_code=422,
                content={"diagnostics": [DiagnosticModel.wrap(d).model_dump() for d in exc.diagnostics]},
            )
        except AnnotationSyntaxError as exc:
            d = Diagnostic("error", "syntax", str(exc), line=exc.line)
            return JSONResponse(status_code=422, content={"diagnostics": [DiagnosticModel.wrap(d).model_dump()]})
        except CasdocError as exc:
            d = Diagnostic("error", "invalid-input", str(exc))
            return JSONResponse(status_code=422, content={"diagnostics": [DiagnosticModel.wrap(d).model_dump()]})
        return ConvertResponse(
            html=result.html,
            baseline=result.baseline,
            graph=graph_to_json(result.graph) if req.include_graph else None,
            diagnostics=[DiagnosticModel.wrap(d) for d in result.diagnostics],
        )

    @app.post("/api/lint")
    def api_lint(req: LintRequest):
        diagnostics = lint_source(SourceFile(path=req.path, text=req.source), db=db, index=index)
        return LintResponse(
            diagnostics=[DiagnosticModel.wrap(d) for d in diagnostics],
            clean=not any(d.severity == "error" for d in diagnostics),
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    # --- event ingestion ---------------------------------------------------

    @app.post("/events")
    async def ingest(request: Request):
        if log is None:
            return JSONResponse(status_code=503, content={"detail": "no event log configured"})
        body = await request.body()
        try:
            count = log.ingest_batch(body.decode("utf-8", errors="strict") if body else "[]")
        except (IngestError, UnicodeDecodeError) as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        return Response(status_code=204, headers={"X-Accepted-Count": str(count)})

    # --- study-site cookies and pages ---------------------------------------

    def _session(request: Request, response: Response) -> tuple[str | None, str, list[InteractionEvent]]:
        """Resolve pid/sid cookies, starting a session when sid is absent."""
        pid = request.cookies.get("pid")
        sid = request.cookies.get("sid")
        events: list[InteractionEvent] = []
        if sid is None:
            sid = secrets.token_hex(8)
            response.set_cookie("sid", sid, httponly=True, samesite="lax")
            if pid is not None:
                events.append(InteractionEvent(t=clock(), type="session_start", pid=pid, sid=sid))
        return pid, sid, events

    @app.post("/consent")
    def consent(request: Request):
        pid = request.cookies.get("pid")
        sid = request.cookies.get("sid")
        events: list[InteractionEvent] = []
        new_sid = sid is None
        if new_sid:
            sid = secrets.token_hex(8)
        if pid is None:
            pid = str(secrets.randbits(64))
            events.append(InteractionEvent(t=clock(), type="consent", pid=pid, sid=sid))
        elif new_sid:
            events.append(InteractionEvent(t=clock(), type="session_start", pid=pid, sid=sid))
        response = JSONResponse(content={"pid": pid})
        if new_sid:
            response.set_cookie("sid", sid, httponly=True, samesite="lax")
        response.set_cookie("pid", pid, max_age=365 * 24 * 3600, httponly=True, samesite="lax")
        record(events)
        return response

    @app.post("/withdraw")
    def withdraw(request: Request):
        pid = request.cookies.get("pid")
        if pid is None:
            return JSONResponse(status_code=400, content={"detail": "no participant cookie"})
        record([InteractionEvent(t=clock(), type="withdraw", pid=pid)])
        response = JSONResponse(content={"withdrawn": True})
        response.delete_cookie("pid")
        return response

    @app.get("/doc/{did}")
    def serve_document(did: str, request: Request):
        if docs is None:
            return JSONResponse(status_code=404, content={"detail": "no document directory configured"})
        requested = request.query_params.get("format")
        if requested is not None and requested not in FORMATS:
            return JSONResponse(status_code=400, content={"detail": f"unknown format {requested!r}"})
        cookie_format = request.cookies.get("format")
        if cookie_format not in FORMATS:
            cookie_format = None
        fmt = requested or cookie_format or FORMAT_CASDOC

        path = docs / (f"{did}.html" if fmt == FORMAT_CASDOC else f"{did}.baseline.java")
        if not path.is_file():
            return JSONResponse(status_code=404, content={"detail": f"unknown document {did!r}"})
        body = path.read_text(encoding="utf-8")
        response = (
            HTMLResponse(content=body) if fmt == FORMAT_CASDOC else PlainTextResponse(content=body)
        )

        pid, sid, events = _session(request, response)
        events.append(InteractionEvent(t=clock(), type="visit_page", did=did))
        if pid is not None:
            changed = requested is not None and cookie_format is not None and requested != cookie_format
            etype = "change_format" if changed else "open_example"
            events.append(
                InteractionEvent(t=clock(), type=etype, pid=pid, sid=sid, did=did, detail={"format": fmt})
            )
        if fmt != cookie_format:
            response.set_cookie("format", fmt, max_age=365 * 24 * 3600, samesite="lax")
        record(events)
        return response

    @app.get("/")
    def home(request: Request):
        response = HTMLResponse(content=_index_page(docs))
        pid, sid, events = _session(request, response)
        events.append(InteractionEvent(t=clock(), type="visit_page", did="home"))
        record(events)
        return response

    @app.get("/{filename:path}")
    def static_file(filename: str):
        if docs is None:
            return JSONResponse(status_code=404, content={"detail": "no document directory configured"})
        path = (docs / filename).resolve()
        if not path.is_file() or docs.resolve() not in path.parents:
            return JSONResponse(status_code=404, content={"detail": "not found"})
        media = {
            ".html": "text/html",
            ".css": "text/css",
            ".js": "text/javascript",
            ".java": "text/plain",
            ".json": "application/json",
        }.get(path.suffix, "application/octet-stream")
        return FileResponse(path, media_type=media)

    return app


def _index_page(docs: Path | None) -> str:
    items = ""
    if docs is not None:
        names = sorted(p.stem for p in docs.glob("*.html"))
        items = "\n".join(f'<li><a href="/doc/{n}">{n}</a></li>' for n in names)
    return (
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Code examples</title></head>"
        f"<body><h1>Code examples</h1><ul>{items}</ul></body></html>\n"
    )
