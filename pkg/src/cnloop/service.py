"""HTTP JSON API in front of the orchestrator, plus the standalone
author-server app used to serve a mock author over the wire protocol."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional, Union

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .metrics.report import report_to_dict
from .orchestrator import (
    LeaseError,
    Orchestrator,
    OrchestratorError,
    Strategy,
)
from .records import RecordInvariantError, ReviewDecision, Status, TargetLabel
from .store import (
    FrozenVersionError,
    QuotaNotMetError,
    StoreError,
    UnknownVersionError,
    VersionExistsError,
)
from .tokens import ExportFormat


class StrategyBody(BaseModel):
    kind: str
    condition_pool: Optional[str] = None
    label_mapping: Optional[Union[str, Dict[str, str]]] = None
    per_target_quota: Optional[Dict[str, int]] = None


class LoopBody(BaseModel):
    name: str
    strategy: StrategyBody
    quota: int = 500
    chunk_admit_limit: Optional[int] = None
    base: Optional[str] = None


class GenerateBody(BaseModel):
    n_chunks: int = Field(default=1, ge=1)
    max_tokens: Optional[int] = None


class ReviewBody(BaseModel):
    verdict: str
    annotator: str
    hs_edited: Optional[str] = None
    cn_edited: Optional[str] = None
    target: Optional[str] = None
    elapsed_seconds: float = 0.0


class AuthorGenerateBody(BaseModel):
    condition: str
    n_chunks: int = Field(default=1, ge=1)
    max_tokens: Optional[int] = None


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, UnknownVersionError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, (VersionExistsError, QuotaNotMetError, LeaseError, FrozenVersionError)):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, RecordInvariantError):
        return HTTPException(status_code=422, detail=str(exc))
    if isinstance(exc, (OrchestratorError, StoreError, ValueError)):
        return HTTPException(status_code=400, detail=str(exc))
    raise exc


def create_app(
    orchestrator: Orchestrator, ui_dir: Union[str, Path, None] = None
) -> FastAPI:
    app = FastAPI(title="cnloop")

    @app.post("/loops")
    def start_loop(body: LoopBody):
        try:
            quota = None
            if body.strategy.per_target_quota:
                quota = {
                    TargetLabel.parse(k): v
                    for k, v in body.strategy.per_target_quota.items()
                }
            strategy = Strategy.build(
                body.strategy.kind,
                pool_path=body.strategy.condition_pool,
                label_mapping=body.strategy.label_mapping,
                per_target_quota=quota,
            )
            state = orchestrator.start_loop(
                body.name,
                strategy,
                quota=body.quota,
                chunk_admit_limit=body.chunk_admit_limit,
                base=body.base,
            )
        except Exception as exc:  # noqa: BLE001 - mapped to HTTP codes
            raise _http_error(exc)
        return {
            "name": state.name,
            "base": state.base,
            "quota": state.quota,
            "chunk_admit_limit": state.chunk_admit_limit,
            "strategy": state.strategy.kind.value,
        }

    @app.post("/loops/{name}/generate")
    def generate(name: str, body: GenerateBody):
        try:
            chunks = orchestrator.request_generation(
                name, n_chunks=body.n_chunks, max_tokens=body.max_tokens
            )
        except Exception as exc:
            raise _http_error(exc)
        return {
            "chunks": [
                {
                    "id": c.id,
                    "condition": c.condition,
                    "condition_target": c.condition_target.value
                    if c.condition_target
                    else None,
                    "parsed": c.parsed_count,
                    "admitted": c.admitted_count,
                    "failed": c.failed,
                    "diagnostics": list(c.diagnostics),
                }
                for c in chunks
            ]
        }

    @app.get("/loops/{name}/dashboard")
    def dashboard(name: str):
        try:
            return orchestrator.dashboard(name)
        except Exception as exc:
            raise _http_error(exc)

    @app.get("/review/next")
    def review_next(annotator: str):
        try:
            record = orchestrator.next_for_review(annotator)
        except Exception as exc:
            raise _http_error(exc)
        if record is None:
            return Response(status_code=204)
        return record.to_json_dict()

    @app.post("/review/{pair_id}")
    def review_submit(pair_id: str, body: ReviewBody):
        try:
            decision = ReviewDecision(
                pair_id=pair_id,
                verdict=Status(body.verdict),
                annotator=body.annotator,
                hs_edited=body.hs_edited,
                cn_edited=body.cn_edited,
                target=TargetLabel.parse(body.target) if body.target else None,
                elapsed_seconds=body.elapsed_seconds,
            )
            record = orchestrator.submit_review(decision)
        except Exception as exc:
            raise _http_error(exc)
        return record.to_json_dict()

    @app.post("/loops/{name}/close")
    def close_loop(name: str):
        try:
            _, report = orchestrator.close_loop(name)
        except Exception as exc:
            raise _http_error(exc)
        return {"version": name, "report": report_to_dict(report)}

    @app.get("/versions")
    def versions():
        out = []
        for name in orchestrator.store.version_names():
            version = orchestrator.store.get_version(name)
            out.append(
                {
                    "name": version.name,
                    "frozen": version.frozen,
                    "quota": version.quota,
                    "records": len(version.pair_ids),
                    "predecessors": list(version.predecessors),
                }
            )
        return out

    @app.get("/versions/{name}/report")
    def version_report(name: str):
        try:
            return orchestrator.report_dict(name)
        except Exception as exc:
            raise _http_error(exc)

    @app.get("/versions/{name}/export")
    def version_export(name: str, format: str = "plain"):
        try:
            fmt = ExportFormat(format.upper())
            text = orchestrator.store.export_training(name, fmt)
        except Exception as exc:
            raise _http_error(exc)
        return PlainTextResponse(text)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def create_author_app(author) -> FastAPI:
    """Wire-protocol server around any object with ``generate()``."""
    app = FastAPI(title="cnloop author")

    @app.post("/generate")
    def generate(body: AuthorGenerateBody):
        try:
            chunks = author.generate(
                body.condition, n_chunks=body.n_chunks, max_tokens=body.max_tokens
            )
        except Exception as exc:  # noqa: BLE001
            raise HTTPException(status_code=503, detail=str(exc))
        return {"chunks": list(chunks)}

    return app
