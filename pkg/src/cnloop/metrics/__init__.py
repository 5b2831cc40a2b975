"""Pure, deterministic per-loop metric computations."""

from .distribution import BalanceMode, BalanceResult, distribution_balance
from .imbalance import DistanceKind, imbalance_degree
from .novelty import jaccard, novelty
from .repetition import repetition_rate
from .report import (
    AcceptanceRates,
    AggregateStat,
    HterScope,
    LengthStats,
    LoopReport,
    UnitMetrics,
    acceptance_rates,
    hter_aggregate,
    length_stats,
    loop_report,
    report_to_dict,
)
from .ter import edit_distance, ter, ter_edits
from .tokenizer import UnitSelector, tokenize, unit_text, words
from .view import VersionView
from .vocabulary import BUCKETS, VocabularyExpansion, vocabulary_expansion

__all__ = [
    "AcceptanceRates",
    "AggregateStat",
    "BalanceMode",
    "BalanceResult",
    "BUCKETS",
    "DistanceKind",
    "HterScope",
    "LengthStats",
    "LoopReport",
    "UnitMetrics",
    "UnitSelector",
    "VersionView",
    "VocabularyExpansion",
    "acceptance_rates",
    "distribution_balance",
    "edit_distance",
    "hter_aggregate",
    "imbalance_degree",
    "jaccard",
    "length_stats",
    "loop_report",
    "novelty",
    "repetition_rate",
    "report_to_dict",
    "ter",
    "ter_edits",
    "tokenize",
    "unit_text",
    "vocabulary_expansion",
    "words",
]
