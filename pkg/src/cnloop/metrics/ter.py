"""Translation edit rate over token sequences, with block shifts.

Edits are word-level insertions, deletions and substitutions at unit cost,
plus shifts that move one contiguous token block (length <= 10) anywhere for
unit cost. Short inputs are solved exactly by a branch-and-bound search over
shift sequences; longer inputs use the greedy shift loop (repeatedly apply
the candidate shift that most reduces the remaining edit distance, capped at
50 shifts) with alignment-pruned candidates to keep runtime bounded.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterator, List, Optional, Sequence, Tuple

MAX_BLOCK = 10
MAX_SHIFTS = 50
#: Inputs whose hypothesis and reference both fit in this many tokens are
#: solved exactly instead of greedily.
EXACT_MAX_LEN = 10


def edit_distance(a: Sequence[str], b: Sequence[str], bound: Optional[int] = None) -> int:
    """Unit-cost word edit distance.

    With ``bound`` set, computation is restricted to a diagonal band and any
    distance exceeding the bound is reported as ``bound + 1``.
    """
    n, m = len(a), len(b)
    if n > m:
        a, b, n, m = b, a, m, n
    if bound is not None and m - n > bound:
        return bound + 1
    if n == 0:
        return m
    if bound is None:
        bound = m
    big = bound + 1
    prev = [j if j <= bound else big for j in range(m + 1)]
    for i in range(1, n + 1):
        lo = max(1, i - bound)
        hi = min(m, i + bound)
        cur = [big] * (m + 1)
        if lo == 1:
            cur[0] = i if i <= bound else big
        ai = a[i - 1]
        row_min = big
        for j in range(lo, hi + 1):
            v = prev[j - 1] + (ai != b[j - 1])
            up = prev[j] + 1
            if up < v:
                v = up
            left = cur[j - 1] + 1
            if left < v:
                v = left
            cur[j] = v
            if v < row_min:
                row_min = v
        if row_min >= big:
            return big
        prev = cur
    return prev[m] if prev[m] < big else big


def _iter_all_shifts(seq: Tuple[str, ...], max_block: int) -> Iterator[Tuple[str, ...]]:
    """Every distinct sequence reachable by moving one contiguous block."""
    n = len(seq)
    seen = set()
    for i in range(n):
        for length in range(1, min(max_block, n - i) + 1):
            block = seq[i : i + length]
            rest = seq[:i] + seq[i + length :]
            for j in range(len(rest) + 1):
                if j == i:
                    continue
                cand = rest[:j] + block + rest[j:]
                if cand != seq and cand not in seen:
                    seen.add(cand)
                    yield cand


def _alignment_error_positions(hyp: Sequence[str], ref: Sequence[str]) -> set:
    """Hypothesis indices involved in edits under one optimal alignment.

    Insertion gaps mark the neighboring hypothesis token so blocks adjacent
    to a gap remain shift candidates.
    """
    n, m = len(hyp), len(ref)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        hi = hyp[i - 1]
        row = dp[i]
        prev = dp[i - 1]
        for j in range(1, m + 1):
            row[j] = min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + (hi != ref[j - 1]))
    errs: set = set()
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and hyp[i - 1] == ref[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + 1:
            errs.add(i - 1)
            i -= 1
            j -= 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            errs.add(i - 1)
            i -= 1
        else:
            if n > 0:
                errs.add(max(i - 1, 0))
            j -= 1
    return errs


def _iter_pruned_shifts(
    hyp: Tuple[str, ...], ref: Tuple[str, ...], max_block: int
) -> Iterator[Tuple[str, ...]]:
    """Candidate shifts for long inputs: the block must contain an alignment
    error, occur verbatim in the reference, and land next to one of its
    reference occurrences."""
    errs = _alignment_error_positions(hyp, ref)
    if not errs:
        return
    n, m = len(hyp), len(ref)
    seen = set()
    for i in range(n):
        for length in range(1, min(max_block, n - i) + 1):
            if not any((i + k) in errs for k in range(length)):
                continue
            block = hyp[i : i + length]
            occurrences = [p for p in range(m - length + 1) if ref[p : p + length] == block]
            if not occurrences:
                continue
            rest = hyp[:i] + hyp[i + length :]
            for p in occurrences:
                for j in (p - 1, p, p + 1):
                    if j < 0 or j > len(rest) or j == i:
                        continue
                    cand = rest[:j] + block + rest[j:]
                    if cand != hyp and cand not in seen:
                        seen.add(cand)
                        yield cand


def _greedy_edits(
    hyp: Tuple[str, ...],
    ref: Tuple[str, ...],
    max_block: int,
    max_shifts: int,
    pruned: bool,
) -> int:
    """Greedy shift loop: apply the shift that most reduces the edit
    distance until none helps. Returns shifts + final edit distance."""
    cur = hyp
    shifts = 0
    e = edit_distance(cur, ref)
    while shifts < max_shifts and e > 0:
        best_e = e
        best: Optional[Tuple[str, ...]] = None
        candidates = (
            _iter_pruned_shifts(cur, ref, max_block)
            if pruned
            else _iter_all_shifts(cur, max_block)
        )
        for cand in candidates:
            ce = edit_distance(cand, ref, bound=best_e - 1)
            if ce < best_e:
                best_e = ce
                best = cand
        if best is None:
            break
        cur = best
        e = best_e
        shifts += 1
    return shifts + e


def _multiset_lower_bound(hyp: Sequence[str], ref: Sequence[str]) -> int:
    """Edit distance lower bound invariant under shifts (shifts permute the
    hypothesis but never change its token multiset)."""
    ch, cr = Counter(hyp), Counter(ref)
    ins = sum((cr - ch).values())
    dele = sum((ch - cr).values())
    return max(ins, dele)


def _exact_edits(hyp: Tuple[str, ...], ref: Tuple[str, ...], max_block: int) -> int:
    """Exact minimum of shifts + edit distance over all shift sequences."""
    best = _greedy_edits(hyp, ref, max_block, MAX_SHIFTS, pruned=False)
    lb = _multiset_lower_bound(hyp, ref)
    if best <= lb:
        return best
    seen = {hyp}
    frontier: List[Tuple[str, ...]] = [hyp]
    depth = 0
    while frontier and depth + 1 + lb < best:
        depth += 1
        nxt: List[Tuple[str, ...]] = []
        for state in frontier:
            for cand in _iter_all_shifts(state, max_block):
                if cand in seen:
                    continue
                seen.add(cand)
                total = depth + edit_distance(cand, ref, bound=best - depth - 1)
                if total < best:
                    best = total
                nxt.append(cand)
        frontier = nxt
    return best


def ter_edits(
    hyp: Sequence[str],
    ref: Sequence[str],
    max_block: int = MAX_BLOCK,
    max_shifts: int = MAX_SHIFTS,
    exact_max_len: int = EXACT_MAX_LEN,
) -> int:
    """Number of edits (shifts + insertions + deletions + substitutions)
    turning ``hyp`` into ``ref``."""
    h = tuple(hyp)
    r = tuple(ref)
    if h == r:
        return 0
    if len(h) <= exact_max_len and len(r) <= exact_max_len:
        return _exact_edits(h, r, max_block)
    return _greedy_edits(h, r, max_block, max_shifts, pruned=True)


def ter(
    hyp: Sequence[str],
    ref: Sequence[str],
    max_block: int = MAX_BLOCK,
    max_shifts: int = MAX_SHIFTS,
    exact_max_len: int = EXACT_MAX_LEN,
) -> float:
    """Translation edit rate: edits normalized by reference length.

    0.0 iff the sequences are equal; may exceed 1. The reference must be
    non-empty.
    """
    if len(ref) == 0:
        raise ValueError("TER needs a non-empty reference")
    return ter_edits(hyp, ref, max_block, max_shifts, exact_max_len) / len(ref)
