"""Repetition rate: share of repeated n-gram types in fixed-size windows.

Windowing keeps the statistic comparable across corpora of different sizes:
the token stream is cut into non-overlapping 1000-token windows (the whole
corpus if shorter; a trailing partial window is kept when it has at least
100 tokens), n-gram type counts are pooled over windows, and the rate is the
geometric mean over n = 1..4 of the pooled non-singleton type share.
"""

from __future__ import annotations

from collections import Counter
from typing import List, Sequence

WINDOW_SIZE = 1000
MIN_TRAILING_WINDOW = 100
MAX_N = 4


def _windows(tokens: Sequence[str]) -> List[Sequence[str]]:
    if len(tokens) <= WINDOW_SIZE:
        return [tokens]
    out = []
    for start in range(0, len(tokens), WINDOW_SIZE):
        win = tokens[start : start + WINDOW_SIZE]
        if len(win) == WINDOW_SIZE or len(win) >= MIN_TRAILING_WINDOW:
            out.append(win)
    return out


def repetition_rate(units: Sequence[Sequence[str]]) -> float:
    """Repetition rate as a percentage in [0, 100].

    ``units`` are token sequences; they are concatenated in order into one
    stream before windowing. Requires at least 4 tokens overall.
    """
    stream: List[str] = []
    for u in units:
        stream.extend(u)
    if len(stream) < MAX_N:
        raise ValueError("repetition rate needs a corpus of at least 4 tokens")
    windows = _windows(stream)
    product = 1.0
    for n in range(1, MAX_N + 1):
        repeated = 0
        total = 0
        for win in windows:
            counts = Counter(tuple(win[i : i + n]) for i in range(len(win) - n + 1))
            total += len(counts)
            repeated += sum(1 for c in counts.values() if c > 1)
        if total == 0:
            raise ValueError(f"no {n}-grams in any window")
        product *= repeated / total
    return 100.0 * product ** (1.0 / MAX_N)
