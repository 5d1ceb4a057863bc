"""Shared domain types and the bulk-marking criterion.

The library works on a vector of nonnegative refinement indicators and an
adaptivity parameter ``theta``.  A set of indices ``M`` satisfies the Dörfler
criterion when the marked entries carry at least a ``theta`` fraction of the
total indicator mass::

    theta * sum(x) <= sum(x[j] for j in M)

Every marking strategy in this package returns such a set; they differ in
cardinality guarantees and cost.  All indices are 0-based.

Whole-vector sums are computed with numpy's pairwise summation; incremental
running sums inside the algorithms use Neumaier compensation where boundary
behaviour matters.  The verification predicate :func:`satisfies_doerfler` is
the only place where a floating-point slack is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

EPS = float(np.finfo(np.float64).eps)

__all__ = [
    "EPS",
    "MarkingError",
    "InvalidIndicatorsError",
    "ParameterError",
    "AdmissibilityError",
    "ThresholdMismatchError",
    "InstanceTooLargeError",
    "ParseError",
    "OpCounter",
    "IndicatorVector",
    "MarkingParams",
    "MarkingOutcome",
    "as_indicators",
    "check_theta",
    "check_nu",
    "criterion_tolerance",
    "goal_value",
    "satisfies_doerfler",
    "mark_theta_one",
    "pairwise_sum",
]


class MarkingError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIndicatorsError(MarkingError):
    """The indicator vector violates its invariants (negative, all-zero, ...)."""


class ParameterError(MarkingError):
    """A parameter such as theta, nu or a quantile is out of range."""


class AdmissibilityError(MarkingError):
    """An internal invariant of the selection recursion failed.

    This signals an implementation bug, not bad user input.
    """


class ThresholdMismatchError(MarkingError):
    """A supplied threshold value is inconsistent with the given instance."""


class InstanceTooLargeError(MarkingError):
    """The instance exceeds the size limit of an exhaustive routine."""


class ParseError(MarkingError):
    """An indicator file could not be parsed."""


@dataclass
class OpCounter:
    """Accumulates element-comparison counts in instrumented runs."""

    comparisons: int = 0

    def add(self, n: int) -> None:
        self.comparisons += n


def pairwise_sum(values: np.ndarray) -> float:
    """Sum of a float64 array using numpy's pairwise accumulation."""
    return float(np.sum(values))


def check_theta(theta: float, *, allow_one: bool = False) -> None:
    hi_ok = theta <= 1.0 if allow_one else theta < 1.0
    if not (0.0 < theta and hi_ok):
        bound = "(0, 1]" if allow_one else "(0, 1)"
        raise ParameterError(f"theta must lie in {bound}, got {theta!r}")


def check_nu(nu: float) -> None:
    if not (0.0 < nu < 1.0):
        raise ParameterError(f"nu must lie in (0, 1), got {nu!r}")


class IndicatorVector:
    """A nonnegative, not-all-zero vector of refinement indicators.

    The entries are the summands of the marking criterion.  Callers that work
    with squared estimator contributions must square before constructing the
    vector; the library never squares on its own.
    The stored array is an immutable float64 copy of the input.
    """

    __slots__ = ("values",)

    def __init__(self, values: Union[Sequence[float], np.ndarray]):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 1:
            raise InvalidIndicatorsError(
                f"indicators must be one-dimensional, got shape {arr.shape}"
            )
        if arr.size == 0:
            raise InvalidIndicatorsError("indicator vector must not be empty")
        if not np.all(np.isfinite(arr)):
            raise InvalidIndicatorsError("indicators must be finite")
        if np.any(arr < 0.0):
            raise InvalidIndicatorsError("indicators must be nonnegative")
        if not np.any(arr > 0.0):
            raise InvalidIndicatorsError("at least one indicator must be positive")
        arr.setflags(write=False)
        self.values = arr

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def total(self) -> float:
        return pairwise_sum(self.values)

    def max_value(self) -> float:
        return float(self.values.max())

    def scratch_copy(self) -> np.ndarray:
        """A mutable copy for destructive kernels; the vector itself stays intact."""
        return self.values.copy()

    def __repr__(self) -> str:
        return f"IndicatorVector(n={self.n})"


IndicatorInput = Union[IndicatorVector, Sequence[float], np.ndarray]


def as_indicators(x: IndicatorInput) -> IndicatorVector:
    """Coerce array-likes into a validated :class:`IndicatorVector`."""
    if isinstance(x, IndicatorVector):
        return x
    return IndicatorVector(x)


@dataclass(frozen=True)
class MarkingParams:
    """Validated marking parameters.

    ``theta`` in (0, 1]; ``theta == 1`` is served by the dedicated
    positive-support path.  ``nu`` in (0, 1) is used only by the decrement and
    binning strategies.
    """

    theta: float
    nu: float = 0.5

    def __post_init__(self) -> None:
        check_theta(self.theta, allow_one=True)
        check_nu(self.nu)

    @property
    def full_marking(self) -> bool:
        return self.theta == 1.0


@dataclass(frozen=True)
class MarkingOutcome:
    """A marked index set together with its achieved sum and cardinality."""

    marked: tuple[int, ...]
    achieved_sum: float
    cardinality: int

    @classmethod
    def from_marked(cls, x: IndicatorInput, indices: Iterable[int]) -> "MarkingOutcome":
        iv = as_indicators(x)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= iv.n:
                raise IndexError("marked index out of range")
            if np.unique(idx).size != idx.size:
                raise MarkingError("marked indices must be distinct")
        achieved = pairwise_sum(iv.values[idx]) if idx.size else 0.0
        return cls(tuple(int(i) for i in idx), achieved, int(idx.size))

    @property
    def marked_set(self) -> frozenset[int]:
        return frozenset(self.marked)


def criterion_tolerance(x: IndicatorInput) -> float:
    """Absolute slack used by the verification predicate: 4 * N * eps * max(x)."""
    iv = as_indicators(x)
    return 4.0 * iv.n * EPS * iv.max_value()


def goal_value(x: IndicatorInput, theta: float) -> float:
    """The goal value ``theta * sum(x)``, computed with pairwise summation."""
    iv = as_indicators(x)
    check_theta(theta, allow_one=True)
    return theta * iv.total()


def satisfies_doerfler(x: IndicatorInput, theta: float, marked: Iterable[int]) -> bool:
    """Whether the marked set carries at least the goal value.

    The comparison allows the absolute slack :func:`criterion_tolerance`; this
    predicate is meant for verification, the marking algorithms themselves
    compare without slack.
    """
    iv = as_indicators(x)
    check_theta(theta, allow_one=True)
    idx = np.asarray(sorted(set(int(i) for i in marked)), dtype=np.int64)
    if idx.size:
        if idx[0] < 0 or idx[-1] >= iv.n:
            raise IndexError("marked index out of range")
        marked_sum = pairwise_sum(iv.values[idx])
    else:
        marked_sum = 0.0
    return marked_sum >= goal_value(iv, theta) - criterion_tolerance(iv)


def mark_theta_one(x: IndicatorInput) -> MarkingOutcome:
    """The unique minimal marking for ``theta == 1``: all strictly positive entries."""
    iv = as_indicators(x)
    support = np.flatnonzero(iv.values > 0.0)
    return MarkingOutcome.from_marked(iv, support)


class NeumaierSum:
    """Compensated running sum; ``value`` is the corrected accumulation."""

    __slots__ = ("_s", "_c")

    def __init__(self) -> None:
        self._s = 0.0
        self._c = 0.0

    def add(self, value: float) -> None:
        s = self._s
        t = s + value
        if abs(s) >= abs(value):
            self._c += (s - t) + value
        else:
            self._c += (value - t) + s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c
