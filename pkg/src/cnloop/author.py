"""Client side of the author wire protocol.

An author is anything with ``generate(condition, n_chunks, max_tokens) ->
list[str]``; this module provides the HTTP implementation speaking
``POST /generate`` with ``{condition, n_chunks, max_tokens}`` ->
``{chunks: [string]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import httpx


class AuthorError(Exception):
    """The author adapter could not produce chunks."""


#: JSON schemas of the wire protocol, shared with adapter conformance tests.
GENERATE_REQUEST_SCHEMA = {
    "type": "object",
    "properties": {
        "condition": {"type": "string"},
        "n_chunks": {"type": "integer", "minimum": 1},
        "max_tokens": {"type": ["integer", "null"], "minimum": 1},
    },
    "required": ["condition", "n_chunks"],
    "additionalProperties": False,
}

GENERATE_RESPONSE_SCHEMA = {
    "type": "object",
    "properties": {
        "chunks": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["chunks"],
    "additionalProperties": False,
}


@dataclass
class AuthorConfig:
    base_url: str
    timeout_seconds: float = 30.0
    retries: int = 2
    max_tokens: int = 256

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "AuthorConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            base_url=data["base_url"],
            timeout_seconds=float(data.get("timeout_seconds", 30.0)),
            retries=int(data.get("retries", 2)),
            max_tokens=int(data.get("max_tokens", 256)),
        )


class HttpAuthor:
    """HTTP client for a wire-protocol author server, with retries."""

    def __init__(self, config: AuthorConfig):
        self.config = config
        self._client = httpx.Client(
            base_url=config.base_url, timeout=config.timeout_seconds
        )

    def generate(
        self, condition: str, n_chunks: int = 1, max_tokens: Optional[int] = None
    ) -> List[str]:
        payload = {
            "condition": condition,
            "n_chunks": n_chunks,
            "max_tokens": max_tokens if max_tokens is not None else self.config.max_tokens,
        }
        last_error: Optional[Exception] = None
        for _ in range(self.config.retries + 1):
            try:
                response = self._client.post("/generate", json=payload)
                response.raise_for_status()
                data = response.json()
                chunks = data.get("chunks")
                if not isinstance(chunks, list) or not all(
                    isinstance(c, str) for c in chunks
                ):
                    raise AuthorError(f"malformed author response: {data!r}")
                return chunks
            except AuthorError:
                raise
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
        raise AuthorError(f"author request failed: {last_error}") from last_error

    def close(self) -> None:
        self._client.close()
