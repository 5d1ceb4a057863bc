"""Independent verification machinery.

Provides the minimal-cardinality oracle, a brute-force subset-enumeration
oracle for small instances, the local-minimal-set membership predicate used
by the selection recursion's analysis, and a generator for the witness family
on which threshold-decrement marking exceeds any fixed multiple of the
minimal cardinality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import (
    IndicatorInput,
    IndicatorVector,
    InstanceTooLargeError,
    MarkingError,
    ParameterError,
    as_indicators,
    check_nu,
    check_theta,
    criterion_tolerance,
    goal_value,
    pairwise_sum,
)
from .sort_mark import sort_mark

__all__ = [
    "EXHAUSTIVE_MAX_N",
    "nmin_oracle",
    "nmin_exhaustive",
    "is_valid_minimal_set",
    "CounterexampleSpec",
    "gen_counterexample",
]

# 2**20 subset sums stay comfortably below a second
EXHAUSTIVE_MAX_N = 20


def nmin_oracle(x: IndicatorInput, theta: float) -> int:
    """Minimal cardinality of a criterion-satisfying set (via sorted prefixes)."""
    return sort_mark(x, theta).cardinality


def nmin_exhaustive(x: IndicatorInput, theta: float) -> int:
    """Minimal cardinality by enumerating all subsets; N <= 20 only.

    Independent of any sorting: subset sums are built by doubling over the
    elements in original order.  Used to validate the sorted-prefix oracle
    itself.
    """
    iv = as_indicators(x)
    check_theta(theta)
    if iv.n > EXHAUSTIVE_MAX_N:
        raise InstanceTooLargeError(
            f"exhaustive search is capped at N={EXHAUSTIVE_MAX_N}, got N={iv.n}"
        )
    v = goal_value(iv, theta)
    sums = np.zeros(1, dtype=np.float64)
    sizes = np.zeros(1, dtype=np.int64)
    for xi in iv.values:
        sums = np.concatenate((sums, sums + xi))
        sizes = np.concatenate((sizes, sizes + 1))
    feasible = sums >= v
    if not feasible.any():
        # reachable only through last-ulp shortfall of the full-set sum
        return iv.n
    return int(sizes[feasible].min())


def is_valid_minimal_set(
    x: IndicatorInput,
    perm: np.ndarray,
    lo: int,
    hi: int,
    v: float,
    candidate: Iterable[int],
    tol: float | None = None,
) -> bool:
    """Membership test for the family of locally minimal sets on [lo, hi).

    ``candidate`` contains positions into ``perm`` (not original indices).
    True iff every member dominates every non-member of the range and the
    member sum reaches ``v`` while dropping any single member falls below it.
    Comparisons of sums use the criterion tolerance.
    """
    iv = as_indicators(x)
    perm = np.asarray(perm, dtype=np.int64)
    if not (0 <= lo < hi <= perm.size):
        raise IndexError(f"invalid range [{lo}, {hi})")
    cand = sorted(set(int(j) for j in candidate))
    if not cand:
        return False
    if cand[0] < lo or cand[-1] >= hi:
        raise IndexError("candidate position outside the range")
    if tol is None:
        tol = criterion_tolerance(iv)

    cand_arr = np.asarray(cand, dtype=np.int64)
    member_vals = iv.values[perm[cand_arr]]
    mask = np.zeros(hi - lo, dtype=bool)
    mask[cand_arr - lo] = True
    rest_vals = iv.values[perm[lo:hi][~mask]]

    if rest_vals.size and member_vals.min() < rest_vals.max():
        return False
    total = pairwise_sum(member_vals)
    if total < v - tol:
        return False
    if total - float(member_vals.min()) >= v + tol:
        return False
    return True


@dataclass(frozen=True)
class CounterexampleSpec:
    """Parameters of one witness instance, derived in exact rational arithmetic.

    The vector is ``(1, eps, ..., eps, delta, ..., delta)`` with ``C*R`` eps
    entries and ``R - 1`` delta entries; ``delta`` and ``eps`` are exact unit
    fractions so the strict inequalities of the construction survive the
    conversion to floats.
    """

    C: int
    theta: float
    nu: float
    delta: Fraction
    epsilon: Fraction
    R: int
    N: int

    def chain_holds(self) -> bool:
        """Exact check of 0 < eps < delta <= 1 - nu * (ceil(1/nu) - 1)."""
        nv = Fraction(self.nu)
        upper = 1 - nv * (math.ceil(1 / nv) - 1)
        return 0 < self.epsilon < self.delta <= upper


def gen_counterexample(
    C: int, theta: float, nu: float
) -> tuple[IndicatorVector, CounterexampleSpec]:
    """Witness family: decrement marking yields more than ``C * N_min`` indices.

    One dominant entry, a long run of tiny entries and a short run of
    mid-sized entries are sized so that no entry but the first passes any
    threshold before the final sweep; the final sweep then drags in the whole
    tiny run before the goal is reached, while the minimal set needs only the
    dominant entry plus the mid-sized run.
    """
    if not (isinstance(C, int) and C >= 1):
        raise ParameterError(f"C must be a positive integer, got {C!r}")
    check_theta(theta)
    check_nu(nu)

    th = Fraction(theta)
    nv = Fraction(nu)
    inner = 1 - nv * (math.ceil(1 / nv) - 1)
    delta = Fraction(1, math.ceil(1 / inner))
    q = math.ceil((2 - th) / th)
    R = q * int(1 / delta) + 1
    N = (C + 1) * R
    epsilon = Fraction(1, C * R) * min(Fraction(1), (1 - th) * (1 + q) / th)

    spec = CounterexampleSpec(
        C=C, theta=theta, nu=nu, delta=delta, epsilon=epsilon, R=R, N=N
    )
    if not spec.chain_holds():
        raise MarkingError(
            "internal error: derived counterexample parameters violate their ordering"
        )
    values = [1.0] + [float(epsilon)] * (C * R) + [float(delta)] * (R - 1)
    return IndicatorVector(values), spec
