"""Pair-grammar byte forms shared by echo and model generation."""

from __future__ import annotations

OPEN_HS = "<|startofhs|>"
END_HS = "<|endofhs|>"
OPEN_CN = "<|startofcn|>"
END_CN = "<|endofcn|>"

SPECIAL_TOKENS = (OPEN_HS, END_HS, OPEN_CN, END_CN)


def condition_parts(condition: str) -> tuple[str, str]:
    """(opening tag, trailing text) of a condition string."""
    if condition.startswith("<|startofhs:"):
        end = condition.find("|>")
        if end != -1:
            return condition[: end + 2], condition[end + 2 :].strip()
    if condition.startswith(OPEN_HS):
        return OPEN_HS, condition[len(OPEN_HS) :].strip()
    return OPEN_HS, condition.strip()


def first_complete_pair(text: str) -> str:
    """Truncate at the first complete pair grammar; full text otherwise."""
    end = text.find(END_CN)
    if end == -1:
        return text
    return text[: end + len(END_CN)]
