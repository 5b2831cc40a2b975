"""Extraction of HS/CN candidates from raw author output.

The scanner never fails on arbitrary input: every occurrence of the opening
tag starts one fragment attempt, and an attempt either yields a candidate or
a diagnostic before scanning resynchronizes at the next opening tag, so
candidates + diagnostics account for every opening-tag occurrence.

Captured texts keep their raw bytes except that the single framing space the
training format puts around them is removed, which makes parsing the exact
inverse of the training export.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .records import TargetLabel
from .tokens import END_CN, END_HS, OPEN_CN, OPEN_HS, OPEN_HS_PREFIX, ExportFormat

_PLAIN_OPEN_RE = re.compile(re.escape(OPEN_HS))
_LABELED_OPEN_RE = re.compile(r"<\|startofhs:\s*([^|<>]*?)\s*\|>")
# Any special token, labeled open first so it wins over a partial plain match.
_SPECIAL_RE = re.compile(
    r"<\|startofhs:\s*[^|<>]*?\s*\|>|"
    + "|".join(re.escape(t) for t in (OPEN_HS, END_HS, OPEN_CN, END_CN))
    + r"|<\|startofhs"
)


@dataclass(frozen=True)
class Candidate:
    hs: str
    cn: str
    label: Optional[TargetLabel] = None
    offset: int = 0


@dataclass(frozen=True)
class Diagnostic:
    offset: int
    reason: str


@dataclass
class ParseResult:
    candidates: List[Candidate] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)
    open_tag_count: int = 0


def _strip_frame(raw: str) -> str:
    """Remove the single leading/trailing space the export format adds."""
    if raw.startswith(" "):
        raw = raw[1:]
    if raw.endswith(" "):
        raw = raw[:-1]
    return raw


def _next_special(raw: str, pos: int) -> Optional[re.Match]:
    return _SPECIAL_RE.search(raw, pos)


def parse_generation(raw_text: str, fmt: ExportFormat) -> ParseResult:
    """Scan ``raw_text`` for the pair grammar.

    Malformed or truncated fragments are skipped with a diagnostic and
    scanning resumes at the next opening tag. In LABELED format the opening
    tag must carry a known target label; unknown or missing labels reject
    the fragment.
    """
    result = ParseResult()
    pos = 0
    n = len(raw_text)
    while pos < n:
        start = raw_text.find(OPEN_HS_PREFIX, pos)
        if start == -1:
            break
        result.open_tag_count += 1
        pos = start + len(OPEN_HS_PREFIX)  # fallback resync past this tag

        label: Optional[TargetLabel] = None
        plain = _PLAIN_OPEN_RE.match(raw_text, start)
        labeled = _LABELED_OPEN_RE.match(raw_text, start)
        if fmt is ExportFormat.PLAIN:
            if plain is None:
                reason = (
                    "labeled opening tag in PLAIN format"
                    if labeled is not None
                    else "malformed opening tag"
                )
                result.diagnostics.append(Diagnostic(start, reason))
                continue
            tag_end = plain.end()
        else:
            if labeled is None:
                reason = (
                    "missing label in LABELED format"
                    if plain is not None
                    else "malformed opening tag"
                )
                result.diagnostics.append(Diagnostic(start, reason))
                continue
            tag_end = labeled.end()
            try:
                label = TargetLabel.parse(labeled.group(1))
            except ValueError:
                result.diagnostics.append(
                    Diagnostic(start, f"unknown label: {labeled.group(1)!r}")
                )
                pos = tag_end
                continue
        pos = tag_end

        hs, end = _capture_until(raw_text, tag_end, END_HS)
        if hs is None:
            result.diagnostics.append(
                Diagnostic(start, "fragment not terminated by " + END_HS)
            )
            continue

        cn_open = _expect_token(raw_text, end, OPEN_CN)
        if cn_open is None:
            result.diagnostics.append(
                Diagnostic(start, "expected " + OPEN_CN + " after " + END_HS)
            )
            pos = end
            continue

        cn, end = _capture_until(raw_text, cn_open, END_CN)
        if cn is None:
            result.diagnostics.append(
                Diagnostic(start, "fragment not terminated by " + END_CN)
            )
            pos = cn_open
            continue

        result.candidates.append(
            Candidate(hs=_strip_frame(hs), cn=_strip_frame(cn), label=label, offset=start)
        )
        pos = end
    return result


def _capture_until(raw: str, pos: int, closing: str) -> Tuple[Optional[str], int]:
    """Text from ``pos`` to the next special token, which must be
    ``closing``. Returns (None, pos) when interrupted by any other token or
    by end of input."""
    match = _next_special(raw, pos)
    if match is None or match.group(0) != closing:
        return None, pos
    return raw[pos : match.start()], match.end()


def _expect_token(raw: str, pos: int, token: str) -> Optional[int]:
    """Position after ``token`` if only whitespace separates it from
    ``pos``; None otherwise."""
    while pos < len(raw) and raw[pos].isspace():
        pos += 1
    if raw.startswith(token, pos):
        return pos + len(token)
    return None
