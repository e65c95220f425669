"""HTTP surface: health, checklist, matching, annotation capture, export.

The server is read-mostly: checkpoint, index, and corpus are immutable
once loaded, and match responses are pure functions of them. Only the
annotation store writes, serialized by a lock, and each event is durable
on disk before its response leaves.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from ..corpus import load_corpus_bundle
from ..encoder import load_checkpoint
from ..errors import UsageError
from ..matcher import load_index
from .config import ServiceConfig
from .responses import match_response, requirements_response
from .store import AnnotationStore, export_supervised, make_event


@dataclass
class ServiceState:
    checkpoint: object
    index: object
    corpus: object
    store: AnnotationStore
    default_k: int = 5
    write_lock: threading.Lock = field(default_factory=threading.Lock)


def load_state(config: ServiceConfig) -> ServiceState:
    """Load everything the endpoints need from the configured paths."""
    return ServiceState(
        checkpoint=load_checkpoint(config.checkpoint_dir),
        index=load_index(config.index_dir),
        corpus=load_corpus_bundle(config.corpus_dir),
        store=AnnotationStore(config.store_path),
        default_k=config.default_k,
    )


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="reqmatch", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "checkpoint": state.checkpoint.describe() if state.checkpoint else None,
            "index_items": len(state.index.entries) if state.index else 0,
            "annotation_events": len(state.store) if state.store else 0,
        }

    @app.get("/requirements")
    def requirements():
        return requirements_response(state.corpus, state.store)

    @app.post("/match")
    def match(body: dict = Body(...)):
        if state.index is None or state.checkpoint is None:
            raise HTTPException(status_code=503, detail="no index loaded")
        text = body.get("text")
        direction = body.get("direction", "requirements")
        k = body.get("k", state.default_k)
        try:
            return match_response(text, direction, k, state.checkpoint, state.index)
        except UsageError as e:
            raise HTTPException(status_code=400, detail=str(e))

    @app.post("/annotations")
    def annotate(body: dict = Body(...)):
        pid = body.get("paragraph_id")
        rid = body.get("requirement_id")
        verdict = body.get("verdict")
        source = body.get("source", "ui")
        if pid not in state.corpus.paragraph_by_id:
            raise HTTPException(status_code=422, detail=f"unknown paragraph id {pid!r}")
        if rid not in state.corpus.requirement_by_id:
            raise HTTPException(status_code=422, detail=f"unknown requirement id {rid!r}")
        try:
            event = make_event(pid, rid, verdict, source=source)
        except ValueError as e:
            raise HTTPException(status_code=422, detail=str(e))
        with state.write_lock:
            stored = state.store.append(event)
        return {"accepted": True, "stored": stored}

    @app.get("/annotations/export")
    def export():
        return PlainTextResponse(export_supervised(state.store))

    return app
