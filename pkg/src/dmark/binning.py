"""Quasi-minimal linear-cost marking by geometric binning.

Indicators are grouped by their ratio to the maximum into geometrically
shrinking ranges ``nu**(k+1) < x/max <= nu**k`` for ``k = 0, ..., K``, with a
tail bin collecting the rest.  Concatenating the bins approximates a
descending sort well enough that cutting the concatenation at the goal value
yields a set of cardinality at most ``ceil(N_min / nu)`` at cost O(N + K).

Bin boundaries are compared on the exact powers of ``nu`` (computed by
repeated multiplication, never through logarithms), so boundary values land
deterministically: a ratio equal to ``nu**k`` belongs to bin ``k``, one equal
to ``nu**(k+1)`` to bin ``k+1``.  Within a bin, indices stay in ascending
original order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    IndicatorInput,
    MarkingOutcome,
    OpCounter,
    as_indicators,
    check_nu,
    check_theta,
    goal_value,
)

__all__ = ["BinLayout", "binning_depth", "bin_layout", "binning_mark"]


@dataclass(frozen=True, eq=False)
class BinLayout:
    """Partition of the index set into geometric bins plus a tail.

    ``bins[k]`` for ``k <= depth`` holds the indices with ratio in
    ``(nu**(k+1), nu**k]``; ``bins[depth + 1]`` is the tail.
    """

    depth: int
    bins: tuple[np.ndarray, ...]
    max_value: float


def binning_depth(x: IndicatorInput, theta: float, nu: float) -> int:
    """Smallest K with ``nu**(K+1) * max(x) <= (1 - theta) * sum(x) / N``."""
    iv = as_indicators(x)
    check_theta(theta)
    check_nu(nu)
    bound = (1.0 - theta) * iv.total() / iv.n
    m_max = iv.max_value()
    depth = 0
    power = nu
    while power * m_max > bound:
        depth += 1
        power *= nu
    return depth


def bin_layout(
    x: IndicatorInput, theta: float, nu: float, counter: OpCounter | None = None
) -> BinLayout:
    iv = as_indicators(x)
    depth = binning_depth(iv, theta, nu)
    if counter is not None:
        counter.add(depth + 1)

    m_max = iv.max_value()
    ratios = iv.values / m_max
    # ascending boundary list nu**(depth+1), ..., nu**1; built by repeated
    # multiplication so bin membership uses the exact power values
    powers = [1.0]
    for _ in range(depth + 1):
        powers.append(powers[-1] * nu)
    ascending = np.asarray(powers[1:][::-1], dtype=np.float64)

    if counter is None:
        position = np.searchsorted(ascending, ratios, side="left")
        bin_of = (depth + 1) - position
    else:
        bin_of = np.empty(iv.n, dtype=np.int64)
        comparisons = 0
        asc = ascending.tolist()
        for j, r in enumerate(ratios.tolist()):
            lo, hi = 0, len(asc)
            while lo < hi:
                mid = (lo + hi) // 2
                comparisons += 1
                if asc[mid] < r:
                    lo = mid + 1
                else:
                    hi = mid
            bin_of[j] = (depth + 1) - lo
        counter.add(comparisons)

    # stable integer sort groups indices by bin while keeping ascending
    # original order inside each bin
    order = np.argsort(bin_of, kind="stable")
    counts = np.bincount(bin_of, minlength=depth + 2)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    bins = tuple(
        order[offsets[k] : offsets[k + 1]] for k in range(depth + 2)
    )
    return BinLayout(depth=depth, bins=bins, max_value=m_max)


def binning_mark(
    x: IndicatorInput, theta: float, nu: float, counter: OpCounter | None = None
) -> MarkingOutcome:
    """Mark by cutting the bin concatenation at the goal value.

    The result satisfies the criterion with cardinality at most
    ``ceil(N_min / nu)``.
    """
    iv = as_indicators(x)
    layout = bin_layout(iv, theta, nu, counter)
    concatenated = np.concatenate(layout.bins)
    prefix = np.cumsum(iv.values[concatenated])
    v = goal_value(iv, theta)
    cut = int(np.searchsorted(prefix, v, side="left"))
    n = min(cut, iv.n - 1) + 1
    if counter is not None:
        counter.add(n)
    return MarkingOutcome.from_marked(iv, concatenated[:n])
