"""Canonical tokenizer shared by every text metric.

One tokenization rule for all metrics prevents cross-metric drift: maximal
runs of letters/digits/apostrophes form tokens, every other non-space
character is a token of its own, and the result is lowercased.
"""

from __future__ import annotations

import re
from enum import Enum
from typing import List, Sequence

# A token is a run of Unicode letters/digits/apostrophes; any other
# non-whitespace character stands alone. [^\W_] = alphanumerics without '_'.
_TOKEN_RE = re.compile(r"(?:[^\W_]|')+|[^\s]", re.UNICODE)


def tokenize(text: str) -> List[str]:
    """Split ``text`` into lowercased tokens. Empty text gives an empty list."""
    return _TOKEN_RE.findall(text.lower())


def words(text: str) -> List[str]:
    """Like :func:`tokenize` but with punctuation-only tokens dropped."""
    return [t for t in tokenize(text) if any(c.isalnum() for c in t)]


class UnitSelector(str, Enum):
    """Which side of a pair a metric operates on.

    PAIR concatenates the HS and CN token sequences at a single token
    boundary (no separator token is inserted).
    """

    HS = "HS"
    CN = "CN"
    PAIR = "PAIR"


def unit_text(hs: str, cn: str, unit: UnitSelector) -> Sequence[str]:
    """Token sequence of the selected unit for one pair of texts."""
    if unit is UnitSelector.HS:
        return tokenize(hs)
    if unit is UnitSelector.CN:
        return tokenize(cn)
    return tokenize(hs) + tokenize(cn)
