"""Echo mode: canned grammar-valid chunks, no model required.

Used for integration tests of the orchestrator pipeline and for protocol
conformance checks.
"""

from __future__ import annotations

from typing import List, Optional

from .config import AdapterConfig
from .grammar import END_CN, END_HS, OPEN_CN, condition_parts

_CANNED_CN = [
    "that claim does not survive contact with the facts",
    "generalizing a whole group from one story is unfair",
    "the evidence points the other way",
    "people deserve to be judged as individuals",
]


class EchoAuthor:
    """Deterministic canned author honoring the condition byte-for-byte."""

    def __init__(self, config: Optional[AdapterConfig] = None):
        self.config = config or AdapterConfig()
        self._counter = 0

    def generate(
        self, condition: str, n_chunks: int = 1, max_tokens: Optional[int] = None
    ) -> List[str]:
        open_tag, prefix = condition_parts(condition)
        chunks = []
        for _ in range(n_chunks):
            self._counter += 1
            if prefix.endswith(END_HS):
                # gold-HS condition already carries the complete hate speech
                hs = prefix[: -len(END_HS)].strip()
            else:
                hs = f"{prefix} echo claim {self._counter}".strip()
            cn = _CANNED_CN[self._counter % len(_CANNED_CN)]
            chunks.append(
                f"{open_tag} {hs} {END_HS} {OPEN_CN} {cn} {END_CN}"
            )
        return chunks
