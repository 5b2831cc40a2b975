"""Imbalance degree: multi-class skew of a label distribution.

Compares the empirical class distribution against the balanced one and
normalizes by the most extreme distribution having the same number of
minority classes, then adds (m - 1) so the integer part counts minority
classes.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Sequence


class DistanceKind(str, Enum):
    """Distance between distributions. Euclidean is the only one shipped;
    the enum leaves room for additional kernels."""

    EUCLIDEAN = "EUCLIDEAN"


def imbalance_degree(
    counts: Sequence[int], distance: DistanceKind = DistanceKind.EUCLIDEAN
) -> float:
    """Imbalance degree of per-class counts.

    0.0 for a perfectly balanced distribution; otherwise
    ``d(p, e) / d(iota_m, e) + (m - 1)`` where ``e`` is uniform, ``m`` is the
    number of classes below 1/K and ``iota_m`` is the distance-maximizing
    distribution with exactly m minority classes. For Euclidean distance
    ``d(iota_m, e) = sqrt(m * (m + 1)) / K``.

    Scale-invariant: multiplying all counts by a positive integer leaves the
    result unchanged.
    """
    if distance is not DistanceKind.EUCLIDEAN:
        raise ValueError(f"unsupported distance: {distance}")
    k = len(counts)
    if k < 2:
        raise ValueError("imbalance degree needs at least 2 classes")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    total = sum(counts)
    if total == 0:
        raise ValueError("imbalance degree needs a non-empty distribution")
    # Minority test in exact integer arithmetic: c/total < 1/k  <=>  c*k < total.
    m = sum(1 for c in counts if c * k < total)
    if m == 0:
        return 0.0
    dist = math.sqrt(sum((c / total - 1.0 / k) ** 2 for c in counts))
    dist_max = math.sqrt(m * (m + 1)) / k
    return dist / dist_max + (m - 1)
