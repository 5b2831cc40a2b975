"""Corpus novelty: one minus the best Jaccard match against a reference."""

from __future__ import annotations

from typing import FrozenSet, List, Sequence


def jaccard(a: FrozenSet[str], b: FrozenSet[str]) -> float:
    if not a and not b:
        return 1.0
    inter = len(a & b)
    union = len(a) + len(b) - inter
    return inter / union


def novelty(
    candidates: Sequence[Sequence[str]], reference: Sequence[Sequence[str]]
) -> float:
    """Mean over candidate units of 1 - max Jaccard similarity to any
    reference unit, over unigram token sets.

    Monotone: enlarging the reference never increases the result.
    """
    if not candidates:
        raise ValueError("novelty needs a non-empty candidate corpus")
    if not reference:
        raise ValueError("novelty needs a non-empty reference corpus")
    ref_sets: List[FrozenSet[str]] = [frozenset(u) for u in reference]
    total = 0.0
    for unit in candidates:
        s = frozenset(unit)
        best = 0.0
        for r in ref_sets:
            sim = jaccard(s, r)
            if sim > best:
                best = sim
                if best == 1.0:
                    break
        total += 1.0 - best
    return total / len(candidates)
