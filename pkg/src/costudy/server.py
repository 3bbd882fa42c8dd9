"""HTTP host: session lifecycle, perceive-event ingress, SSE event stream,
and atomic JSONL log persistence.

Each session funnels through one asyncio lock (single logical writer); stream
fan-out is read-only. Subscribers that fall behind a bounded queue are
disconnected and recover through the stream's resume-from-seq parameter.
"""

from __future__ import annotations

import asyncio
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, Response, StreamingResponse
from pydantic import BaseModel

from .assets import validate_manifest
from .config import SessionConfig, config_from_dict
from .engine import CoStudyEngine
from .errors import CoStudyError, ConfigError, PayloadError, TranscriptParseError, UnknownFeatureError
from .events import PROTOCOL_VERSION, SessionEvent

_SUBSCRIBER_QUEUE_LIMIT = 1000
_CLOSE = object()


@dataclass
class ServerConfig:
    session_config: SessionConfig
    transcript_text: str
    log_dir: Path
    manifest: dict | None = None
    assets_root: Path | None = None
    heartbeat_s: float = 15.0
    tick_ms: int = 250  # 0 disables the real-time ticker (clock driven by ingress)

    def validate(self) -> None:
        self.session_config.validate()
        if self.manifest is not None:
            validate_manifest(self.manifest, self.session_config.personas)


@dataclass
class _Runtime:
    engine: CoStudyEngine
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    subscribers: list[asyncio.Queue] = field(default_factory=list)
    published_seq: int = 0
    started_monotonic: float = field(default_factory=time.monotonic)
    ticker: asyncio.Task | None = None

    def clock_now_ms(self) -> int:
        return int((time.monotonic() - self.started_monotonic) * 1000)


class CreateSessionBody(BaseModel):
    session_id: str | None = None
    mode: str | None = None
    seed: int | None = None
    transcript: str | None = None
    config: dict | None = None


class IngestBody(BaseModel):
    kind: str
    data: dict
    at_ms: int | None = None


class UsageBody(BaseModel):
    feature: str


def _frame(event: SessionEvent) -> dict:
    wire = event.to_wire()
    wire["protocol_version"] = PROTOCOL_VERSION
    return wire


def _sse(payload: dict) -> str:
    return f"data: {json.dumps(payload, ensure_ascii=False, separators=(',', ':'))}\n\n"


def build_app(server_config: ServerConfig) -> FastAPI:
    server_config.validate()
    app = FastAPI(title="costudy", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.config = server_config
    app.state.sessions = {}
    server_config.log_dir.mkdir(parents=True, exist_ok=True)

    def runtime_or_404(session_id: str) -> _Runtime:
        runtime = app.state.sessions.get(session_id)
        if runtime is None:
            raise HTTPException(status_code=404, detail="unknown or closed session")
        return runtime

    def publish(runtime: _Runtime) -> None:
        log = runtime.engine.session.event_log
        fresh = log[runtime.published_seq:]
        if not fresh:
            return
        runtime.published_seq = len(log)
        for queue in list(runtime.subscribers):
            try:
                for event in fresh:
                    queue.put_nowait(_frame(event))
            except asyncio.QueueFull:
                # slow subscriber: disconnect rather than buffer unboundedly
                # (resume-from-seq recovers); drop one frame so the close
                # sentinel always lands
                runtime.subscribers.remove(queue)
                try:
                    queue.get_nowait()
                except asyncio.QueueEmpty:
                    pass
                try:
                    queue.put_nowait(_CLOSE)
                except asyncio.QueueFull:
                    pass

    def persist(runtime: _Runtime) -> Path:
        path = server_config.log_dir / f"{runtime.engine.session.session_id}.jsonl"
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(runtime.engine.export_log_bytes())
        os.replace(tmp, path)
        return path

    async def ticker(runtime: _Runtime) -> None:
        while True:
            await asyncio.sleep(server_config.tick_ms / 1000)
            async with runtime.lock:
                before = len(runtime.engine.session.event_log)
                runtime.engine.advance_to(
                    max(runtime.clock_now_ms(), runtime.engine.session.clock_ms)
                )
                publish(runtime)
                if len(runtime.engine.session.event_log) != before:
                    persist(runtime)

    @app.exception_handler(PayloadError)
    async def payload_error(_request: Request, exc: PayloadError):
        return JSONResponse(status_code=400, content={"detail": {"field": exc.field, "message": str(exc)}})

    @app.post("/sessions", status_code=201)
    async def create_session(body: CreateSessionBody | None = None):
        body = body or CreateSessionBody()
        config = server_config.session_config
        if body.config is not None:
            try:
                config = config_from_dict(body.config)
            except ConfigError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        config = config.with_overrides(mode=body.mode, seed=body.seed, session_id=body.session_id)
        transcript_text = body.transcript or server_config.transcript_text
        try:
            engine = CoStudyEngine.create(config, transcript_text)
        except (ConfigError, TranscriptParseError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if engine.session.session_id in app.state.sessions:
            raise HTTPException(status_code=409, detail="session id already in use")
        runtime = _Runtime(engine)
        app.state.sessions[engine.session.session_id] = runtime
        if server_config.tick_ms > 0:
            runtime.ticker = asyncio.get_running_loop().create_task(ticker(runtime))
        return {
            "session_id": engine.session.session_id,
            "protocol_version": PROTOCOL_VERSION,
            "mode": engine.session.mode,
            "roster": [
                {"agent_id": aid, "name": engine.agents[aid].persona.name}
                for aid in engine.session.roster
            ],
        }

    @app.get("/sessions/{session_id}")
    async def snapshot(session_id: str):
        runtime = runtime_or_404(session_id)
        async with runtime.lock:
            return runtime.engine.snapshot()

    @app.post("/sessions/{session_id}/events")
    async def ingest(session_id: str, body: IngestBody):
        runtime = runtime_or_404(session_id)
        async with runtime.lock:
            at_ms = body.at_ms if body.at_ms is not None else runtime.clock_now_ms()
            at_ms = max(at_ms, runtime.engine.session.clock_ms)
            try:
                event = runtime.engine.ingest({"kind": body.kind, "data": body.data}, at_ms)
            except CoStudyError as exc:
                if isinstance(exc, PayloadError):
                    raise
                raise HTTPException(status_code=400, detail=str(exc))
            publish(runtime)
            persist(runtime)
            return {"seq": event.seq}

    @app.post("/sessions/{session_id}/usage")
    async def usage(session_id: str, body: UsageBody):
        runtime = runtime_or_404(session_id)
        async with runtime.lock:
            try:
                counters = runtime.engine.record_usage(body.feature)
            except UnknownFeatureError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            publish(runtime)
            persist(runtime)
            return counters.as_dict()

    @app.get("/sessions/{session_id}/log")
    async def export(session_id: str):
        runtime = app.state.sessions.get(session_id)
        if runtime is not None:
            async with runtime.lock:
                payload = runtime.engine.export_log_bytes()
        else:
            path = server_config.log_dir / f"{session_id}.jsonl"
            if not path.exists():
                raise HTTPException(status_code=404, detail="unknown session")
            payload = path.read_bytes()
        return Response(content=payload, media_type="application/x-ndjson")

    @app.get("/sessions/{session_id}/stream")
    async def stream(session_id: str, from_seq: int = 0):
        runtime = runtime_or_404(session_id)
        queue: asyncio.Queue = asyncio.Queue(maxsize=_SUBSCRIBER_QUEUE_LIMIT)
        async with runtime.lock:
            backlog = [
                _frame(e) for e in runtime.engine.session.event_log if e.seq > from_seq
            ]
            runtime.subscribers.append(queue)

        async def generate():
            try:
                for frame in backlog:
                    yield _sse(frame)
                while True:
                    try:
                        item = await asyncio.wait_for(queue.get(), timeout=server_config.heartbeat_s)
                    except asyncio.TimeoutError:
                        yield _sse({"kind": "hb", "protocol_version": PROTOCOL_VERSION})
                        continue
                    if item is _CLOSE:
                        break
                    yield _sse(item)
            finally:
                if queue in runtime.subscribers:
                    runtime.subscribers.remove(queue)

        return StreamingResponse(generate(), media_type="text/event-stream")

    @app.delete("/sessions/{session_id}", status_code=204)
    async def close_session(session_id: str):
        runtime = runtime_or_404(session_id)
        async with runtime.lock:
            persist(runtime)
            if runtime.ticker is not None:
                runtime.ticker.cancel()
            for queue in runtime.subscribers:
                try:
                    queue.put_nowait(_CLOSE)
                except asyncio.QueueFull:
                    pass
            del app.state.sessions[session_id]
        return Response(status_code=204)

    @app.get("/manifest")
    async def manifest():
        if server_config.manifest is None:
            raise HTTPException(status_code=404, detail="no asset manifest configured")
        return server_config.manifest

    @app.get("/assets/{asset_path:path}")
    async def asset(asset_path: str):
        root = server_config.assets_root
        if root is None:
            raise HTTPException(status_code=404, detail="no assets directory configured")
        full = (root / asset_path).resolve()
        if not full.is_relative_to(root.resolve()) or not full.is_file():
            raise HTTPException(status_code=404, detail="asset not found")
        return FileResponse(full)

    return app
