"""Wire-protocol server: POST /generate with {condition, n_chunks,
max_tokens} returning {chunks: [string]}.

One generation runs at a time per model instance; concurrent requests queue
on a lock. A failing model load surfaces as 503 with a diagnostic body.
"""

from __future__ import annotations

import argparse
import threading
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .config import AdapterConfig
from .echo import EchoAuthor
from .model import ModelAuthor, ModelLoadError


class GenerateBody(BaseModel):
    condition: str
    n_chunks: int = Field(default=1, ge=1)
    max_tokens: Optional[int] = None


def create_app(config: AdapterConfig, echo: bool = False) -> FastAPI:
    """App with a lazily constructed author; echo mode needs no model."""
    app = FastAPI(title="cnloop author adapter")
    state = {"author": EchoAuthor(config) if echo else None, "error": None}
    lock = threading.Lock()

    def author():
        if state["author"] is None and state["error"] is None:
            try:
                state["author"] = ModelAuthor(config)
            except ModelLoadError as exc:
                state["error"] = str(exc)
        if state["error"] is not None:
            raise HTTPException(status_code=503, detail=state["error"])
        return state["author"]

    @app.post("/generate")
    def generate(body: GenerateBody):
        instance = author()
        with lock:
            try:
                chunks: List[str] = instance.generate(
                    body.condition, n_chunks=body.n_chunks, max_tokens=body.max_tokens
                )
            except HTTPException:
                raise
            except Exception as exc:  # noqa: BLE001 - generation failure
                raise HTTPException(status_code=503, detail=str(exc))
        return {"chunks": chunks}

    @app.get("/healthz")
    def healthz():
        return {"mode": "echo" if echo else "model", "model": config.model}

    return app


def serve(config: AdapterConfig, addr: str = "127.0.0.1:8001", echo: bool = False) -> None:
    import uvicorn

    host, _, port = addr.partition(":")
    app = create_app(config, echo=echo)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8001), log_level="info")


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="cnloop-author")
    parser.add_argument("--config", help="adapter config JSON")
    parser.add_argument("--addr", default="127.0.0.1:8001")
    parser.add_argument("--echo", action="store_true",
                        help="serve canned grammar-valid chunks without a model")
    args = parser.parse_args(argv)
    config = AdapterConfig.from_file(args.config) if args.config else AdapterConfig()
    serve(config, addr=args.addr, echo=args.echo)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
