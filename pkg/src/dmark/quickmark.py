"""Minimal-cardinality marking in linear time by selection-style recursion.

Instead of sorting, the strategy partitions the active index range around a
pivot value into strictly-greater, equal and strictly-smaller blocks, then
either recurses into the greater block (it already covers the goal), stops
inside the equal block (the pivot block closes the gap, and the cut position
follows from one division), or recurses into the smaller block with the goal
reduced by the mass it skips.  With a median pivot each step halves the range,
giving worst-case linear total cost; the returned set has provably minimal
cardinality for every valid input.

Three pivot policies are provided: the deterministic (lower) median, a seeded
random pivot (fast on average, quadratic in the worst case), and a fixed
``q``-quantile whose cost scales with ``1 / min(q, 1 - q)``.

The algorithm never reorders the indicator values; it permutes an index array
only.  For a cache-friendly variant that destructively reorders a scratch
copy of the values and returns just the threshold, see :func:`xstar_kernel`
together with :func:`set_from_threshold`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._selection import partition_synced, select_rank_value, xstar_counted
from .core import (
    EPS,
    AdmissibilityError,
    IndicatorInput,
    InvalidIndicatorsError,
    MarkingOutcome,
    OpCounter,
    ParameterError,
    ThresholdMismatchError,
    as_indicators,
    check_theta,
    criterion_tolerance,
    goal_value,
    pairwise_sum,
)

__all__ = [
    "MedianPivot",
    "RandomPivot",
    "QuantilePivot",
    "PivotStrategy",
    "SelectionState",
    "PartitionOutcome",
    "QuickMarkResult",
    "quickmark",
    "partition",
    "pivot_median",
    "xstar_kernel",
    "set_from_threshold",
]


@dataclass(frozen=True)
class MedianPivot:
    """Deterministic lower-median pivot; worst-case linear overall cost."""


@dataclass(frozen=True)
class RandomPivot:
    """Uniformly random pivot from a seeded generator (PCG64).

    Fast on average; an adversarial input can drive the recursion to
    quadratic cost, so the median pivot is the safe default.
    """

    seed: int = 0


@dataclass(frozen=True)
class QuantilePivot:
    """Pivot at a fixed quantile ``q`` of the active range, 0 < q < 1."""

    q: float

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise ParameterError(f"quantile must lie strictly in (0, 1), got {self.q!r}")


PivotStrategy = Union[MedianPivot, RandomPivot, QuantilePivot]


@dataclass(eq=False)
class SelectionState:
    """State of the selection recursion: permutation, active range, residual goal.

    ``lower``/``upper`` bound the active range as a half-open 0-based
    interval.  A state is admissible when the permutation is partially ordered
    around the range (everything before ``lower`` strictly exceeds everything
    from ``lower`` on, everything from ``upper`` on is strictly below
    everything before it) and the residual goal is positive, consistent with
    the already-fixed prefix, and reachable within the range.
    """

    perm: np.ndarray
    lower: int
    upper: int
    residual_goal: float

    def __post_init__(self) -> None:
        perm = np.asarray(self.perm, dtype=np.int64)
        n = perm.size
        counts = np.bincount(perm, minlength=n) if n else np.zeros(0, dtype=np.int64)
        if counts.size != n or not np.all(counts == 1):
            raise ParameterError("perm must be a permutation of 0..N-1")
        if not (0 <= self.lower < self.upper <= n):
            raise ParameterError(
                f"invalid range [{self.lower}, {self.upper}) for N={n}"
            )
        if not self.residual_goal > 0.0:
            raise ParameterError("residual goal must be positive")
        self.perm = perm

    def check_admissible(self, x: IndicatorInput, theta: float) -> None:
        """Raise :class:`AdmissibilityError` if the state violates its invariants."""
        iv = as_indicators(x)
        _verify_admissible(
            iv.values,
            self.perm,
            self.lower,
            self.upper,
            self.residual_goal,
            theta,
            criterion_tolerance(iv),
        )


@dataclass(frozen=True, eq=False)
class PartitionOutcome:
    """Result of a three-way partition of the active range.

    In the new permutation, positions ``[lower, greater_end)`` hold values
    strictly greater than the pivot, ``[greater_end, smaller_start)`` values
    equal to it (at least the pivot itself), and ``[smaller_start, upper)``
    strictly smaller values.  Outside the range the permutation is unchanged.
    """

    perm: np.ndarray
    greater_end: int
    smaller_start: int
    pivot_value: float


@dataclass(frozen=True, eq=False)
class QuickMarkResult:
    """Final permutation, cut position and threshold of a selection run.

    The marked set is ``perm[:n]``; ``x_star`` is the smallest marked value.
    ``x_star`` is a property of the instance alone, independent of the pivot
    policy, even though the marked set itself need not be unique.
    """

    perm: np.ndarray
    n: int
    x_star: float

    def marked_indices(self) -> np.ndarray:
        return self.perm[: self.n].copy()

    def to_outcome(self, x: IndicatorInput) -> MarkingOutcome:
        return MarkingOutcome.from_marked(x, self.perm[: self.n])


def _verify_admissible(values, perm, lo, hi, v, theta, tol) -> None:
    n = values.size
    if lo > 0:
        if not float(values[perm[:lo]].min()) > float(values[perm[lo:]].max()):
            raise AdmissibilityError("prefix not strictly above active range")
    if hi < n:
        if not float(values[perm[:hi]].min()) > float(values[perm[hi:]].max()):
            raise AdmissibilityError("suffix not strictly below active range")
    if not v > 0.0:
        raise AdmissibilityError(f"residual goal not positive: {v!r}")
    prefix_sum = pairwise_sum(values[perm[:lo]]) if lo else 0.0
    expected = theta * pairwise_sum(values) - prefix_sum
    if abs(v - expected) > tol:
        raise AdmissibilityError(
            f"residual goal {v!r} inconsistent with prefix (expected {expected!r})"
        )
    if v > pairwise_sum(values[perm[lo:hi]]) + tol:
        raise AdmissibilityError("residual goal exceeds the active range mass")


def _verify_partition(values, perm, lo, hi, greater_end, smaller_start, pv) -> None:
    if not (lo <= greater_end < smaller_start <= hi):
        raise AdmissibilityError("partition block boundaries out of order")
    seg = values[perm[lo:hi]]
    g = greater_end - lo
    s = smaller_start - lo
    if g and not np.all(seg[:g] > pv):
        raise AdmissibilityError("greater block contains non-greater value")
    if not np.all(seg[g:s] == pv):
        raise AdmissibilityError("pivot block contains non-pivot value")
    if s < hi - lo and not np.all(seg[s:] < pv):
        raise AdmissibilityError("smaller block contains non-smaller value")


def _ceil_count(residual: float, pivot_value: float, max_count: int) -> int:
    """Smallest integer m with m * pivot_value >= residual, robust near ties.

    When the division lands within a few ulps of an integer, the quotient is
    re-derived by direct multiplication so rounding cannot shift the cut by
    one.
    """
    q = residual / pivot_value
    m = math.ceil(q)
    nearest = round(q)
    if abs(q - nearest) <= 4.0 * EPS * max(1.0, abs(q)):
        m = int(nearest)
        while m * pivot_value < residual:
            m += 1
        while m > 1 and (m - 1) * pivot_value >= residual:
            m -= 1
    if m < 1:
        m = 1
    if m > max_count:
        m = max_count
    return m


def partition(
    x: IndicatorInput,
    state: SelectionState,
    p: int,
    counter: OpCounter | None = None,
) -> PartitionOutcome:
    """Three-way partition of the state's active range around position ``p``.

    Pure: returns a new permutation, the input state is untouched.  Each block
    keeps the previous relative order of its members, so the result is
    deterministic.
    """
    iv = as_indicators(x)
    lo, hi = state.lower, state.upper
    if not (lo <= p < hi):
        raise IndexError(f"pivot position {p} outside [{lo}, {hi})")
    perm_new = state.perm.copy()
    seg_idx = perm_new[lo:hi]
    seg = iv.values[seg_idx]
    pv = float(iv.values[perm_new[p]])
    gt = seg > pv
    lt = seg < pv
    eq = ~(gt | lt)
    if counter is not None:
        counter.add(2 * (hi - lo))
    perm_new[lo:hi] = np.concatenate((seg_idx[gt], seg_idx[eq], seg_idx[lt]))
    greater_end = lo + int(np.count_nonzero(gt))
    smaller_start = greater_end + int(np.count_nonzero(eq))
    return PartitionOutcome(
        perm=perm_new,
        greater_end=greater_end,
        smaller_start=smaller_start,
        pivot_value=pv,
    )


def pivot_median(
    x: IndicatorInput,
    perm: np.ndarray,
    lo: int,
    hi: int,
    counter: OpCounter | None = None,
) -> int:
    """Position of a median element of ``x`` over ``perm[lo:hi]``.

    The returned position holds the lower median value, so at most half the
    range is strictly smaller and at most half strictly greater.  With a
    counter the rank is found by median-of-medians selection (linear worst
    case); otherwise numpy's introselect does the work.  Deterministic: among
    equals, the first position in the range wins.
    """
    iv = as_indicators(x)
    perm = np.asarray(perm, dtype=np.int64)
    if not (0 <= lo < hi <= perm.size):
        raise IndexError(f"invalid range [{lo}, {hi})")
    seg = iv.values[perm[lo:hi]]
    k = (hi - lo - 1) // 2
    if counter is None:
        pv = np.partition(seg, k)[k]
        return lo + int(np.flatnonzero(seg == pv)[0])
    box = [0]
    pv = select_rank_value(seg.tolist(), k, box)
    pos = lo
    for val in seg.tolist():
        box[0] += 1
        if val == pv:
            break
        pos += 1
    counter.add(box[0])
    return pos


def quickmark(
    x: IndicatorInput,
    theta: float,
    pivot: PivotStrategy = MedianPivot(),
    *,
    counter: OpCounter | None = None,
    check_invariants: bool = False,
) -> QuickMarkResult:
    """Minimal-cardinality marking by pivot-partition recursion.

    Without a counter the partitions and rank selections run vectorized;
    with one, a faithful pure-Python path counts every element comparison.
    ``check_invariants`` re-verifies the partial ordering, goal consistency
    and partition block structure at every step (debug mode; raises
    :class:`AdmissibilityError` on any violation, which would indicate a bug).
    """
    iv = as_indicators(x)
    check_theta(theta)
    if counter is None:
        return _quickmark_fast(iv, theta, pivot, check_invariants)
    return _quickmark_counted(iv, theta, pivot, counter, check_invariants)


def _quickmark_fast(
    iv, theta: float, pivot: PivotStrategy, check: bool
) -> QuickMarkResult:
    values = iv.values
    n_total = iv.n
    v = goal_value(iv, theta)
    perm = np.arange(n_total, dtype=np.int64)
    lo, hi = 0, n_total
    tol = criterion_tolerance(iv) if check else 0.0
    rng = np.random.default_rng(pivot.seed) if isinstance(pivot, RandomPivot) else None

    while True:
        if check:
            _verify_admissible(values, perm, lo, hi, v, theta, tol)
        m = hi - lo
        seg_idx = perm[lo:hi]
        seg = values[seg_idx]

        if isinstance(pivot, MedianPivot):
            k = (m - 1) // 2
            pv = float(np.partition(seg, k)[k])
        elif isinstance(pivot, RandomPivot):
            pv = float(seg[rng.integers(m)])
        else:
            k = min(int(pivot.q * m), m - 1)
            pv = float(np.partition(seg, k)[k])

        gt = seg > pv
        lt = seg < pv
        eq = ~(gt | lt)
        perm[lo:hi] = np.concatenate((seg_idx[gt], seg_idx[eq], seg_idx[lt]))
        greater_end = lo + int(np.count_nonzero(gt))
        smaller_start = greater_end + int(np.count_nonzero(eq))
        sigma = pairwise_sum(seg[gt]) if greater_end > lo else 0.0
        if check:
            _verify_partition(values, perm, lo, hi, greater_end, smaller_start, pv)

        if sigma >= v:
            hi = greater_end
            continue
        covered = sigma + (smaller_start - greater_end) * pv
        if covered >= v:
            n = greater_end + _ceil_count(v - sigma, pv, smaller_start - greater_end)
            if check:
                _verify_termination(values, perm, n, pv, v, lo, sigma, tol)
            return QuickMarkResult(perm=perm, n=n, x_star=pv)
        v -= covered
        lo = smaller_start


def _verify_termination(values, perm, n, pv, v, lo, sigma, tol) -> None:
    marked_vals = values[perm[:n]]
    x_min = float(marked_vals.min())
    if x_min != pv:
        raise AdmissibilityError("terminating pivot is not the smallest marked value")
    local = pairwise_sum(values[perm[lo:n]])
    if local + tol < v:
        raise AdmissibilityError("marked range does not reach the residual goal")
    if local - pv >= v + tol:
        raise AdmissibilityError("marked range is not minimal (one value removable)")


def _quickmark_counted(
    iv, theta: float, pivot: PivotStrategy, counter: OpCounter, check: bool
) -> QuickMarkResult:
    values = iv.values
    n_total = iv.n
    v = goal_value(iv, theta)
    perm = list(range(n_total))
    xp = values.tolist()
    lo, hi = 0, n_total
    box = [0]
    tol = criterion_tolerance(iv) if check else 0.0
    rng = np.random.default_rng(pivot.seed) if isinstance(pivot, RandomPivot) else None

    while True:
        if check:
            _verify_admissible(
                values, np.asarray(perm, dtype=np.int64), lo, hi, v, theta, tol
            )
        m = hi - lo
        if isinstance(pivot, RandomPivot):
            pv = xp[lo + int(rng.integers(m))]
        else:
            k = (m - 1) // 2 if isinstance(pivot, MedianPivot) else min(int(pivot.q * m), m - 1)
            pv = select_rank_value(xp[lo:hi], k, box)

        greater_end, smaller_start = partition_synced(perm, xp, lo, hi, pv, box)
        sigma = 0.0
        for j in range(lo, greater_end):
            sigma += xp[j]
        if check:
            _verify_partition(
                values,
                np.asarray(perm, dtype=np.int64),
                lo,
                hi,
                greater_end,
                smaller_start,
                pv,
            )

        box[0] += 1
        if sigma >= v:
            hi = greater_end
            continue
        covered = sigma + (smaller_start - greater_end) * pv
        box[0] += 1
        if covered >= v:
            n = greater_end + _ceil_count(v - sigma, pv, smaller_start - greater_end)
            counter.add(box[0])
            perm_arr = np.asarray(perm, dtype=np.int64)
            if check:
                _verify_termination(values, perm_arr, n, pv, v, lo, sigma, tol)
            return QuickMarkResult(perm=perm_arr, n=n, x_star=pv)
        v -= covered
        lo = smaller_start


def xstar_kernel(x_copy: np.ndarray, theta: float, counter: OpCounter | None = None) -> float:
    """Threshold of the minimal marking, computed on a destructive scratch copy.

    ``x_copy`` must be a caller-owned scratch array; it is reordered in place
    (contiguous accesses, no permutation indirection).  Returns the smallest
    value contained in any minimal marked set; combine with
    :func:`set_from_threshold` to materialize the index set.
    """
    check_theta(theta)
    a = np.asarray(x_copy, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise InvalidIndicatorsError("scratch must be a nonempty 1-d float64 array")
    if not np.all(np.isfinite(a)):
        raise InvalidIndicatorsError("indicators must be finite")
    if np.any(a < 0.0):
        raise InvalidIndicatorsError("indicators must be nonnegative")
    if not np.any(a > 0.0):
        raise InvalidIndicatorsError("at least one indicator must be positive")

    v = theta * pairwise_sum(a)
    if counter is not None:
        box = [0]
        result = xstar_counted(a.tolist(), v, box)
        counter.add(box[0])
        return float(result)

    lo, hi = 0, int(a.size)
    while hi - lo > 1:
        k = (lo + hi) // 2
        a[lo:hi].partition(k - lo)
        pv = float(a[k])
        upper_sum = float(a[k + 1 : hi].sum())
        if upper_sum >= v:
            lo = k + 1
        elif upper_sum + pv >= v:
            return pv
        else:
            v -= upper_sum + pv
            hi = k
    return float(a[lo])


def set_from_threshold(
    x: IndicatorInput, theta: float, x_star: float
) -> MarkingOutcome:
    """Materialize the minimal marked set from its threshold value.

    Takes every index with value strictly above ``x_star`` plus the smallest
    number of indices with value exactly ``x_star`` (lowest original indices
    first) needed to reach the goal.  Raises
    :class:`ThresholdMismatchError` when ``x_star`` cannot have come from the
    same instance and parameter.
    """
    iv = as_indicators(x)
    check_theta(theta)
    v = goal_value(iv, theta)
    if not x_star > 0.0:
        raise ThresholdMismatchError(f"threshold must be positive, got {x_star!r}")
    above = np.flatnonzero(iv.values > x_star)
    at = np.flatnonzero(iv.values == x_star)
    sum_above = pairwise_sum(iv.values[above]) if above.size else 0.0
    if sum_above >= v:
        raise ThresholdMismatchError(
            "values above the threshold already cover the goal; threshold too small"
        )
    if sum_above + at.size * x_star < v:
        raise ThresholdMismatchError(
            "values at and above the threshold fall short of the goal"
        )
    need = _ceil_count(v - sum_above, x_star, int(at.size))
    marked = np.concatenate((above, at[:need]))
    return MarkingOutcome.from_marked(iv, marked)
