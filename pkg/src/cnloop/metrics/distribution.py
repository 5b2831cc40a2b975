"""RMSE/MSE of a label distribution against the balanced one."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from ..records import MAIN_TARGETS, TargetLabel


class BalanceMode(str, Enum):
    """ABS compares absolute frequencies to N/K, PERC compares percentage
    frequencies to 100/K."""

    ABS = "ABS"
    PERC = "PERC"


@dataclass(frozen=True)
class BalanceResult:
    rmse: float
    mse: float


def distribution_balance(
    counts: Mapping[TargetLabel, int],
    mode: BalanceMode,
    categories: Optional[Sequence[TargetLabel]] = None,
) -> BalanceResult:
    """Deviation of per-category counts from a perfectly balanced split.

    ``categories`` defaults to the 7 main targets; categories missing from
    ``counts`` contribute 0. ``mse`` is ``rmse ** 2`` by construction, and
    ``rmse(ABS) == (N / 100) * rmse(PERC)``.
    """
    cats = tuple(categories) if categories is not None else MAIN_TARGETS
    if len(cats) < 2:
        raise ValueError("need at least 2 categories")
    if len(set(cats)) != len(cats):
        raise ValueError("duplicate categories")
    values = [int(counts.get(c, 0)) for c in cats]
    if any(v < 0 for v in values):
        raise ValueError("counts must be non-negative")
    total = sum(values)
    if total == 0:
        raise ValueError("no pairs in the selected categories")
    k = len(cats)
    if mode is BalanceMode.ABS:
        expected = total / k
        observed = [float(v) for v in values]
    else:
        expected = 100.0 / k
        observed = [100.0 * v / total for v in values]
    mean_sq = sum((o - expected) ** 2 for o in observed) / k
    rmse = math.sqrt(mean_sq)
    return BalanceResult(rmse=rmse, mse=rmse * rmse)
