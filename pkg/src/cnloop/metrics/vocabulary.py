"""Vocabulary expansion: who injected each word of a version, and from where.

For every target, each distinct word of the version's final (post-edited)
texts is attributed to the author when it already occurred in that target's
generated texts of the same version, otherwise to the reviewer. Author words
are then split into novel / seen-for-this-target / seen-only-for-other-
targets against the previous versions' vocabulary; reviewer words into
novel / not novel. The five buckets partition each target's word set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..records import MAIN_TARGETS, TargetLabel
from .tokenizer import words
from .view import VersionView

BUCKETS = (
    "author_novel",
    "author_same_target",
    "author_other_target",
    "reviewer_novel",
    "reviewer_not_novel",
)


@dataclass
class VocabularyExpansion:
    #: Bucket percentages per target (only targets with accepted pairs).
    per_target: Dict[TargetLabel, Dict[str, float]] = field(default_factory=dict)
    #: Macro average/std per bucket over the main targets present.
    macro_avg: Optional[Dict[str, float]] = None
    macro_std: Optional[Dict[str, float]] = None


def _pair_words(hs: str, cn: str) -> Set[str]:
    return set(words(hs)) | set(words(cn))


def _history_vocab(
    history: Sequence[VersionView],
) -> Tuple[Set[str], Dict[TargetLabel, Set[str]]]:
    overall: Set[str] = set()
    by_target: Dict[TargetLabel, Set[str]] = {}
    for view in history:
        for rec in view.accepted():
            ws = _pair_words(rec.hs_final, rec.cn_final)
            overall |= ws
            if rec.target is not None:
                by_target.setdefault(rec.target, set()).update(ws)
    return overall, by_target


def vocabulary_expansion(
    view: VersionView, history: Sequence[VersionView]
) -> VocabularyExpansion:
    """Bucket percentages per target plus macro statistics over main targets.

    Targets without accepted pairs are excluded; macros are None when no
    main target contributes.
    """
    hist_all, hist_by_target = _history_vocab(history)

    by_target: Dict[TargetLabel, List] = {}
    for rec in view.accepted():
        if rec.target is not None:
            by_target.setdefault(rec.target, []).append(rec)

    result = VocabularyExpansion()
    for target, recs in by_target.items():
        generated: Set[str] = set()
        final: Set[str] = set()
        for rec in recs:
            generated |= _pair_words(rec.hs_original, rec.cn_original)
            final |= _pair_words(rec.hs_final, rec.cn_final)
        if not final:
            continue
        counts = dict.fromkeys(BUCKETS, 0)
        same_hist = hist_by_target.get(target, set())
        for w in final:
            if w in generated:
                if w in hist_all:
                    if w in same_hist:
                        counts["author_same_target"] += 1
                    else:
                        counts["author_other_target"] += 1
                else:
                    counts["author_novel"] += 1
            else:
                if w in hist_all:
                    counts["reviewer_not_novel"] += 1
                else:
                    counts["reviewer_novel"] += 1
        result.per_target[target] = {
            b: 100.0 * counts[b] / len(final) for b in BUCKETS
        }

    main_present = [t for t in MAIN_TARGETS if t in result.per_target]
    if main_present:
        avg: Dict[str, float] = {}
        std: Dict[str, float] = {}
        for b in BUCKETS:
            vals = [result.per_target[t][b] for t in main_present]
            mean = sum(vals) / len(vals)
            avg[b] = mean
            std[b] = (sum((v - mean) ** 2 for v in vals) / len(vals)) ** 0.5
        result.macro_avg = avg
        result.macro_std = std
    return result
