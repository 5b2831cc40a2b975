"""Per-loop metric aggregation into the LoopReport.

Macro statistics run over the 7 main targets and carry an explicit
undefined state (None, rendered as NaN) whenever a contributing target has
no pairs or per-target denominators are unavailable; undefined is never
silently 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..records import MAIN_TARGETS, PairRecord, Status, TargetLabel
from .distribution import BalanceMode, BalanceResult, distribution_balance
from .imbalance import imbalance_degree
from .novelty import novelty
from .repetition import repetition_rate
from .ter import ter
from .tokenizer import UnitSelector, tokenize, unit_text
from .view import VersionView
from .vocabulary import VocabularyExpansion, vocabulary_expansion


class HterScope(str, Enum):
    ALL = "ALL"
    MODIFIED = "MODIFIED"


@dataclass(frozen=True)
class AggregateStat:
    """Micro value plus macro average/std over the main targets; any part
    may be None (undefined)."""

    micro: Optional[float] = None
    macro_avg: Optional[float] = None
    macro_std: Optional[float] = None


@dataclass
class AcceptanceRates:
    untouched_pct: float
    modified_pct: float
    discarded_pct: float
    untouched_macro_avg: Optional[float] = None
    untouched_macro_std: Optional[float] = None
    modified_macro_avg: Optional[float] = None
    modified_macro_std: Optional[float] = None
    per_target: Dict[TargetLabel, Dict[str, float]] = field(default_factory=dict)


@dataclass
class LengthStats:
    cn_or_annotated: Optional[float] = None
    cn_ed_annotated: Optional[float] = None
    cn_or_untouched: Optional[float] = None
    cn_or_discarded: Optional[float] = None
    hs_or_untouched: Optional[float] = None


@dataclass
class UnitMetrics:
    hter_all: AggregateStat = AggregateStat()
    hter_modified: AggregateStat = AggregateStat()
    novelty_cumulative: AggregateStat = AggregateStat()
    novelty_vs_first: AggregateStat = AggregateStat()
    novelty_vs_previous: AggregateStat = AggregateStat()
    repetition_rate: AggregateStat = AggregateStat()


@dataclass
class BalanceTable:
    abs_7: Optional[BalanceResult] = None
    perc_7: Optional[BalanceResult] = None
    abs_6: Optional[BalanceResult] = None
    perc_6: Optional[BalanceResult] = None
    six_cat_dropped: Optional[TargetLabel] = None


@dataclass
class LoopReport:
    """Every per-loop statistic of the comparison table, for all three text
    units, plus raw counts."""

    version: str
    administered: int
    accepted: int
    untouched: int
    modified: int
    discarded: int
    target_counts: Dict[TargetLabel, int]
    imbalance: Optional[float]
    balance: BalanceTable
    acceptance: AcceptanceRates
    lengths: LengthStats
    units: Dict[UnitSelector, UnitMetrics]
    vocabulary: Optional[VocabularyExpansion]


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _pstd(values: Sequence[float]) -> float:
    mean = _mean(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def _macro(per_target_values: Dict[TargetLabel, float]) -> Tuple[Optional[float], Optional[float]]:
    """Average/std over the main targets present; undefined when none
    contributes. Targets without pairs are excluded, not counted as 0."""
    vals = [per_target_values[t] for t in MAIN_TARGETS if t in per_target_values]
    if not vals:
        return None, None
    return _mean(vals), _pstd(vals)


def acceptance_rates(view: VersionView) -> AcceptanceRates:
    """Untouched/modified/discarded percentages over administered records.

    The three micro percentages sum to 100. Macro statistics need a target
    attribution (reviewer label or chunk condition target) for every
    administered record and at least one record per main target; otherwise
    they are undefined.
    """
    administered = view.administered()
    if not administered:
        raise ValueError(f"version {view.name} has no administered records")
    n = len(administered)
    untouched = sum(1 for r in administered if r.status is Status.UNTOUCHED)
    modified = sum(1 for r in administered if r.status is Status.MODIFIED)
    discarded = n - untouched - modified
    result = AcceptanceRates(
        untouched_pct=100.0 * untouched / n,
        modified_pct=100.0 * modified / n,
        discarded_pct=100.0 * discarded / n,
    )

    # Per-target denominators need an attribution for every administered
    # record; unlabeled discards under unconditioned strategies make the
    # macro rows undefined.
    attributions = [view.attributed_target(r) for r in administered]
    if any(a is None for a in attributions):
        return result
    per: Dict[TargetLabel, Dict[str, int]] = {}
    for rec, target in zip(administered, attributions):
        bucket = per.setdefault(target, {"untouched": 0, "modified": 0, "total": 0})
        bucket["total"] += 1
        if rec.status is Status.UNTOUCHED:
            bucket["untouched"] += 1
        elif rec.status is Status.MODIFIED:
            bucket["modified"] += 1
    present = [t for t in MAIN_TARGETS if t in per]
    untouched_rates = {t: 100.0 * per[t]["untouched"] / per[t]["total"] for t in present}
    modified_rates = {t: 100.0 * per[t]["modified"] / per[t]["total"] for t in present}
    result.untouched_macro_avg, result.untouched_macro_std = _macro(untouched_rates)
    result.modified_macro_avg, result.modified_macro_std = _macro(modified_rates)
    result.per_target = {
        t: {
            "untouched_pct": untouched_rates[t],
            "modified_pct": modified_rates[t],
            "discarded_pct": 100.0 - untouched_rates[t] - modified_rates[t],
        }
        for t in present
    }
    return result


def _unit_ter_values(
    view: VersionView, unit: UnitSelector
) -> List[Tuple[PairRecord, float]]:
    """Per accepted pair: TER between the original generation and the final
    text of the selected unit. Untouched pairs contribute 0."""
    out: List[Tuple[PairRecord, float]] = []
    for rec in view.accepted():
        if rec.status is Status.UNTOUCHED:
            out.append((rec, 0.0))
            continue
        hyp = unit_text(rec.hs_original, rec.cn_original, unit)
        ref = unit_text(rec.hs_final, rec.cn_final, unit)
        out.append((rec, ter(hyp, ref)))
    return out


def hter_aggregate(
    view: VersionView,
    scope: HterScope = HterScope.ALL,
    unit: UnitSelector = UnitSelector.PAIR,
    _values: Optional[List[Tuple[PairRecord, float]]] = None,
) -> AggregateStat:
    """Post-editing effort over accepted pairs (hypothesis = generation,
    reference = final text). Undefined when the scope selects no pairs."""
    values = _values if _values is not None else _unit_ter_values(view, unit)
    if scope is HterScope.MODIFIED:
        values = [(r, v) for r, v in values if r.status is Status.MODIFIED]
    if not values:
        return AggregateStat()
    micro = _mean([v for _, v in values])
    per_target: Dict[TargetLabel, List[float]] = {}
    for rec, v in values:
        if rec.target in MAIN_TARGETS:
            per_target.setdefault(rec.target, []).append(v)
    macro_avg, macro_std = _macro({t: _mean(vs) for t, vs in per_target.items()})
    return AggregateStat(micro=micro, macro_avg=macro_avg, macro_std=macro_std)


def length_stats(view: VersionView) -> LengthStats:
    """Mean token counts over the annotated/untouched/discarded subsets;
    None for empty subsets."""

    def mean_len(texts: List[str]) -> Optional[float]:
        if not texts:
            return None
        return _mean([float(len(tokenize(t))) for t in texts])

    modified = view.modified()
    untouched = [r for r in view.records if r.status is Status.UNTOUCHED]
    discarded = [r for r in view.records if r.status is Status.DISCARDED]
    return LengthStats(
        cn_or_annotated=mean_len([r.cn_original for r in modified]),
        cn_ed_annotated=mean_len([r.cn_edited for r in modified]),
        cn_or_untouched=mean_len([r.cn_original for r in untouched]),
        cn_or_discarded=mean_len([r.cn_original for r in discarded]),
        hs_or_untouched=mean_len([r.hs_original for r in untouched]),
    )


def _accepted_units(
    views: Sequence[VersionView], unit: UnitSelector
) -> List[Tuple[Optional[TargetLabel], Sequence[str]]]:
    out = []
    for view in views:
        for rec in view.accepted():
            out.append((rec.target, unit_text(rec.hs_final, rec.cn_final, unit)))
    return out


def _novelty_stat(
    candidates: List[Tuple[Optional[TargetLabel], Sequence[str]]],
    reference: List[Tuple[Optional[TargetLabel], Sequence[str]]],
) -> AggregateStat:
    if not candidates or not reference:
        return AggregateStat()
    ref_units = [u for _, u in reference]
    micro = novelty([u for _, u in candidates], ref_units)
    per_target: Dict[TargetLabel, List[Sequence[str]]] = {}
    for target, u in candidates:
        if target in MAIN_TARGETS:
            per_target.setdefault(target, []).append(u)
    macro_avg, macro_std = _macro(
        {t: novelty(units, ref_units) for t, units in per_target.items()}
    )
    return AggregateStat(micro=micro, macro_avg=macro_avg, macro_std=macro_std)


def _rr_stat(candidates: List[Tuple[Optional[TargetLabel], Sequence[str]]]) -> AggregateStat:
    units = [u for _, u in candidates]
    if sum(len(u) for u in units) < 4:
        return AggregateStat()
    micro = repetition_rate(units)
    per_target: Dict[TargetLabel, List[Sequence[str]]] = {}
    for target, u in candidates:
        if target in MAIN_TARGETS:
            per_target.setdefault(target, []).append(u)
    # a target needs at least 4 tokens for its own rate
    per_target = {
        t: units for t, units in per_target.items() if sum(len(u) for u in units) >= 4
    }
    macro_avg, macro_std = _macro(
        {t: repetition_rate(units) for t, units in per_target.items()}
    )
    return AggregateStat(micro=micro, macro_avg=macro_avg, macro_std=macro_std)


def loop_report(
    view: VersionView,
    history: Sequence[VersionView],
    six_cat_drop: TargetLabel = TargetLabel.DISABLED,
) -> LoopReport:
    """Assemble the full metric table for one frozen version.

    ``history`` is the ordered predecessor chain (seed first). Novelty and
    vocabulary expansion are undefined for a version without history.
    ``six_cat_drop`` selects which main target the 6-category balance
    columns leave out.
    """
    records = view.records
    accepted = view.accepted()
    untouched = sum(1 for r in records if r.status is Status.UNTOUCHED)
    modified = sum(1 for r in records if r.status is Status.MODIFIED)
    discarded = sum(1 for r in records if r.status is Status.DISCARDED)

    target_counts: Dict[TargetLabel, int] = {}
    for rec in accepted:
        if rec.target is not None:
            target_counts[rec.target] = target_counts.get(rec.target, 0) + 1
    main_counts = [target_counts.get(t, 0) for t in MAIN_TARGETS]

    imbalance = imbalance_degree(main_counts) if sum(main_counts) > 0 else None

    balance = BalanceTable(six_cat_dropped=six_cat_drop)
    if sum(main_counts) > 0:
        balance.abs_7 = distribution_balance(target_counts, BalanceMode.ABS)
        balance.perc_7 = distribution_balance(target_counts, BalanceMode.PERC)
        six = tuple(t for t in MAIN_TARGETS if t is not six_cat_drop)
        if sum(target_counts.get(t, 0) for t in six) > 0:
            balance.abs_6 = distribution_balance(target_counts, BalanceMode.ABS, six)
            balance.perc_6 = distribution_balance(target_counts, BalanceMode.PERC, six)

    units: Dict[UnitSelector, UnitMetrics] = {}
    for unit in (UnitSelector.PAIR, UnitSelector.HS, UnitSelector.CN):
        ter_values = _unit_ter_values(view, unit)
        candidates = _accepted_units([view], unit)
        cumulative = _accepted_units(history, unit)
        vs_first = _accepted_units(history[:1], unit)
        vs_previous = _accepted_units(history[-1:], unit)
        units[unit] = UnitMetrics(
            hter_all=hter_aggregate(view, HterScope.ALL, unit, _values=ter_values),
            hter_modified=hter_aggregate(view, HterScope.MODIFIED, unit, _values=ter_values),
            novelty_cumulative=_novelty_stat(candidates, cumulative),
            novelty_vs_first=_novelty_stat(candidates, vs_first),
            novelty_vs_previous=_novelty_stat(candidates, vs_previous),
            repetition_rate=_rr_stat(candidates),
        )

    vocabulary = vocabulary_expansion(view, history) if history else None

    return LoopReport(
        version=view.name,
        administered=len(view.administered()),
        accepted=len(accepted),
        untouched=untouched,
        modified=modified,
        discarded=discarded,
        target_counts=target_counts,
        imbalance=imbalance,
        balance=balance,
        acceptance=acceptance_rates(view),
        lengths=length_stats(view),
        units=units,
        vocabulary=vocabulary,
    )


def report_to_dict(report: LoopReport) -> Dict[str, Any]:
    """Canonical JSON-serializable form with a fixed field order.

    Undefined values serialize as null.
    """

    def balance_entry(b: Optional[BalanceResult]) -> Optional[Dict[str, float]]:
        if b is None:
            return None
        return {"rmse": b.rmse, "mse": b.mse}

    def agg(a: AggregateStat) -> Dict[str, Optional[float]]:
        return {"micro": a.micro, "macro_avg": a.macro_avg, "macro_std": a.macro_std}

    out: Dict[str, Any] = {
        "version": report.version,
        "counts": {
            "administered": report.administered,
            "accepted": report.accepted,
            "untouched": report.untouched,
            "modified": report.modified,
            "discarded": report.discarded,
            "per_target": {
                t.value: report.target_counts.get(t, 0) for t in TargetLabel
            },
        },
        "imbalance_degree": report.imbalance,
        "balance": {
            "abs_7": balance_entry(report.balance.abs_7),
            "perc_7": balance_entry(report.balance.perc_7),
            "abs_6": balance_entry(report.balance.abs_6),
            "perc_6": balance_entry(report.balance.perc_6),
            "six_cat_dropped": (
                report.balance.six_cat_dropped.value
                if report.balance.six_cat_dropped
                else None
            ),
        },
        "acceptance": {
            "untouched_pct": report.acceptance.untouched_pct,
            "modified_pct": report.acceptance.modified_pct,
            "discarded_pct": report.acceptance.discarded_pct,
            "untouched_macro_avg": report.acceptance.untouched_macro_avg,
            "untouched_macro_std": report.acceptance.untouched_macro_std,
            "modified_macro_avg": report.acceptance.modified_macro_avg,
            "modified_macro_std": report.acceptance.modified_macro_std,
            "per_target": {
                t.value: dict(v) for t, v in report.acceptance.per_target.items()
            },
        },
        "lengths": {
            "cn_or_annotated": report.lengths.cn_or_annotated,
            "cn_ed_annotated": report.lengths.cn_ed_annotated,
            "cn_or_untouched": report.lengths.cn_or_untouched,
            "cn_or_discarded": report.lengths.cn_or_discarded,
            "hs_or_untouched": report.lengths.hs_or_untouched,
        },
        "units": {
            unit.value.lower(): {
                "hter_all": agg(m.hter_all),
                "hter_modified": agg(m.hter_modified),
                "novelty_cumulative": agg(m.novelty_cumulative),
                "novelty_vs_first": agg(m.novelty_vs_first),
                "novelty_vs_previous": agg(m.novelty_vs_previous),
                "repetition_rate": agg(m.repetition_rate),
            }
            for unit, m in report.units.items()
        },
        "vocabulary": None,
    }
    if report.vocabulary is not None:
        out["vocabulary"] = {
            "macro_avg": report.vocabulary.macro_avg,
            "macro_std": report.vocabulary.macro_std,
            "per_target": {
                t.value: dict(v) for t, v in report.vocabulary.per_target.items()
            },
        }
    return out
