"""Shared instance generators for the test suite.

Cross-algorithm equality assertions use either seeded uniform vectors (where
sums sit far from decision boundaries) or dyadic values (where all float
arithmetic is exact), so the tests are deterministic by construction.
"""

from __future__ import annotations

import numpy as np
import pytest

DYADIC_VALUES = np.array([0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0])

KINDS = ("uniform", "ties", "sparse", "integers")


def instance(rng: np.random.Generator, n: int, kind: str) -> np.ndarray:
    """One nonnegative, not-all-zero vector of the requested flavour."""
    if kind == "uniform":
        vals = rng.random(n)
    elif kind == "ties":
        vals = rng.choice(DYADIC_VALUES, size=n)
    elif kind == "sparse":
        vals = np.where(rng.random(n) < 0.85, 0.0, rng.random(n))
    elif kind == "integers":
        vals = rng.integers(0, 6, n).astype(np.float64)
    else:
        raise ValueError(kind)
    if not np.any(vals > 0):
        vals[int(rng.integers(n))] = 1.0
    return vals


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
