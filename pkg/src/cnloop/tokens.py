"""Exact byte forms of the pair-grammar special tokens and line formats."""

from __future__ import annotations

from enum import Enum

from .records import TargetLabel

OPEN_HS = "<|startofhs|>"
END_HS = "<|endofhs|>"
OPEN_CN = "<|startofcn|>"
END_CN = "<|endofcn|>"

#: Prefix shared by the plain and labeled opening tags.
OPEN_HS_PREFIX = "<|startofhs"


class ExportFormat(str, Enum):
    """PLAIN uses the bare opening tag; LABELED carries the hate target in
    the opening tag."""

    PLAIN = "PLAIN"
    LABELED = "LABELED"


def labeled_open_tag(target: TargetLabel) -> str:
    """Opening tag with the target label: canonical spelling, one space
    after the colon."""
    return f"<|startofhs: {target.value}|>"


def format_pair(hs: str, cn: str, fmt: ExportFormat, target: TargetLabel | None = None) -> str:
    """One training line: single ASCII spaces between tokens and text."""
    if fmt is ExportFormat.LABELED:
        if target is None:
            raise ValueError("LABELED format requires a target label")
        open_tag = labeled_open_tag(target)
    else:
        open_tag = OPEN_HS
    return f"{open_tag} {hs} {END_HS} {OPEN_CN} {cn} {END_CN}"
