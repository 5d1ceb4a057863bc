"""Selection-based minimal marking: recursion, partition, pivots, kernel."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmark import (
    AdmissibilityError,
    IndicatorVector,
    MedianPivot,
    OpCounter,
    ParameterError,
    QuantilePivot,
    RandomPivot,
    SelectionState,
    ThresholdMismatchError,
    goal_value,
    is_valid_minimal_set,
    partition,
    pivot_median,
    quickmark,
    satisfies_doerfler,
    set_from_threshold,
    sort_mark,
    xstar_kernel,
)

dyadic_lists = st.lists(
    st.integers(0, 1024).map(lambda k: k / 256.0), min_size=1, max_size=30
).filter(lambda xs: any(v > 0 for v in xs))
dyadic_thetas = st.integers(1, 63).map(lambda k: k / 64.0)

ALL_PIVOTS = (MedianPivot(), RandomPivot(1), RandomPivot(99), QuantilePivot(0.3))


class TestQuickmarkExamples:
    def test_basic(self):
        r = quickmark([4, 1, 2, 3], 0.5)
        assert r.n == 2
        assert set(r.marked_indices().tolist()) == {0, 3}
        assert r.x_star == 3.0

    def test_all_equal(self):
        r = quickmark([2, 2, 2, 2], 0.5)
        assert r.n == 2
        assert r.x_star == 2.0

    def test_single_positive(self):
        r = quickmark([1.0] + [0.0] * 9, 0.7)
        assert r.n == 1
        assert r.x_star == 1.0

    def test_theta_bounds(self):
        with pytest.raises(ParameterError):
            quickmark([1.0], 1.0)
        with pytest.raises(ParameterError):
            quickmark([1.0], 0.0)

    def test_outcome_conversion(self):
        x = [4, 1, 2, 3]
        out = quickmark(x, 0.5).to_outcome(x)
        assert out.cardinality == 2
        assert out.achieved_sum == 7.0


class TestPartition:
    def _state(self, values, lo, hi, v):
        return SelectionState(
            perm=np.arange(len(values)), lower=lo, upper=hi, residual_goal=v
        )

    def test_equal_heavy_segment(self):
        # (3, 5, 5, 1) around pivot value 5: no strictly greater, two equal slots
        x = [3.0, 5.0, 5.0, 1.0]
        out = partition(x, self._state(x, 0, 4, 5.0), p=1)
        assert out.greater_end == 0
        assert out.smaller_start == 2
        assert out.pivot_value == 5.0
        vals = np.asarray(x)[out.perm]
        assert vals[0] == vals[1] == 5.0

    def test_all_equal_segment(self):
        x = [7.0, 7.0, 7.0]
        out = partition(x, self._state(x, 0, 3, 1.0), p=2)
        assert out.greater_end == 0
        assert out.smaller_start == 3

    def test_decreasing_with_max_pivot(self):
        x = [9.0, 7.0, 5.0, 3.0]
        out = partition(x, self._state(x, 0, 4, 1.0), p=0)
        assert out.greater_end == 0
        assert out.smaller_start == 1

    def test_pivot_block_never_empty(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 40))
            vals = rng.choice([0.5, 1.0, 2.0, 4.0], size=n)
            state = self._state(vals, 0, n, 0.1)
            p = int(rng.integers(n))
            out = partition(vals, state, p)
            assert out.smaller_start > out.greater_end

    def test_classes_and_outside_untouched(self, rng):
        vals = rng.choice([0.25, 0.5, 1.0, 2.0], size=20)
        vals[0] = 4.0  # strictly largest prefix
        vals[19] = 0.125  # strictly smallest suffix
        perm = np.arange(20)
        state = SelectionState(perm=perm, lower=1, upper=19, residual_goal=1.0)
        out = partition(vals, state, p=5)
        pv = out.pivot_value
        seg = vals[out.perm[1:19]]
        g, s = out.greater_end - 1, out.smaller_start - 1
        assert np.all(seg[:g] > pv)
        assert np.all(seg[g:s] == pv)
        assert np.all(seg[s:] < pv)
        assert out.perm[0] == 0 and out.perm[19] == 19
        assert np.array_equal(perm, np.arange(20))  # input state untouched

    def test_pivot_out_of_range(self):
        x = [1.0, 2.0, 3.0]
        state = self._state(x, 0, 2, 1.0)
        with pytest.raises(IndexError):
            partition(x, state, p=2)


class TestPivotMedian:
    def test_small_segment(self):
        # (7, 1, 4): one smaller and one greater than 4
        p = pivot_median([7.0, 1.0, 4.0], np.arange(3), 0, 3)
        assert p == 2

    def test_all_equal(self):
        vals = [5.0, 5.0, 5.0, 5.0]
        p = pivot_median(vals, np.arange(4), 0, 4)
        assert vals[p] == 5.0

    def test_rank_conditions_on_distinct_values(self, rng):
        vals = rng.permutation(25).astype(np.float64) + 1.0
        perm = np.arange(25)
        p = pivot_median(vals, perm, 0, 25)
        pv = vals[perm[p]]
        smaller = int(np.count_nonzero(vals < pv))
        greater = int(np.count_nonzero(vals > pv))
        assert smaller <= 25 / 2
        assert greater <= 25 / 2

    def test_rank_conditions_on_subrange(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 60))
            vals = rng.random(n)
            perm = rng.permutation(n)
            lo = int(rng.integers(0, n - 1))
            hi = int(rng.integers(lo + 1, n + 1))
            p = pivot_median(vals, perm, lo, hi)
            assert lo <= p < hi
            seg = vals[perm[lo:hi]]
            pv = vals[perm[p]]
            m = hi - lo
            assert int(np.count_nonzero(seg < pv)) <= m / 2
            assert int(np.count_nonzero(seg > pv)) <= m / 2

    def test_counted_variant_same_value(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 80))
            vals = rng.choice([0.25, 0.5, 1.0, 2.0], size=n)
            perm = np.arange(n)
            counter = OpCounter()
            p_fast = pivot_median(vals, perm, 0, n)
            p_counted = pivot_median(vals, perm, 0, n, counter)
            assert vals[p_fast] == vals[p_counted]
            assert counter.comparisons > 0


class TestSelectionState:
    def test_rejects_non_permutation(self):
        with pytest.raises(ParameterError):
            SelectionState(perm=np.array([0, 0, 2]), lower=0, upper=3, residual_goal=1.0)

    def test_rejects_bad_bounds(self):
        with pytest.raises(ParameterError):
            SelectionState(perm=np.arange(3), lower=2, upper=2, residual_goal=1.0)

    def test_rejects_nonpositive_goal(self):
        with pytest.raises(ParameterError):
            SelectionState(perm=np.arange(3), lower=0, upper=3, residual_goal=0.0)

    def test_check_admissible_accepts_initial_call(self):
        x = [4.0, 1.0, 2.0, 3.0]
        state = SelectionState(
            perm=np.arange(4), lower=0, upper=4, residual_goal=goal_value(x, 0.5)
        )
        state.check_admissible(x, 0.5)

    def test_check_admissible_rejects_unordered_prefix(self):
        x = [1.0, 4.0, 2.0, 3.0]
        state = SelectionState(
            perm=np.arange(4), lower=1, upper=4, residual_goal=1.0
        )
        with pytest.raises(AdmissibilityError):
            state.check_admissible(x, 0.5)

    def test_check_admissible_rejects_wrong_goal(self):
        x = [4.0, 1.0, 2.0, 3.0]
        state = SelectionState(perm=np.arange(4), lower=0, upper=4, residual_goal=1.0)
        with pytest.raises(AdmissibilityError):
            state.check_admissible(x, 0.5)


class TestEquivalenceWithSort:
    def test_seeded_sweep(self, rng):
        # 1000 instances, N in [10, 200], theta in {0.1, ..., 0.9}
        thetas = np.linspace(0.1, 0.9, 9)
        for trial in range(1000):
            n = int(rng.integers(10, 201))
            vals = rng.random(n)
            theta = float(thetas[trial % 9])
            assert quickmark(vals, theta).n == sort_mark(vals, theta).cardinality

    @given(dyadic_lists, dyadic_thetas)
    @settings(max_examples=150, deadline=None)
    def test_dyadic_exact_equivalence(self, xs, theta):
        r = quickmark(xs, theta, check_invariants=True)
        assert r.n == sort_mark(xs, theta).cardinality
        assert satisfies_doerfler(xs, theta, r.marked_indices())

    @given(dyadic_lists, dyadic_thetas)
    @settings(max_examples=100, deadline=None)
    def test_output_is_locally_minimal(self, xs, theta):
        r = quickmark(xs, theta)
        n_total = len(xs)
        v = goal_value(xs, theta)
        assert is_valid_minimal_set(xs, r.perm, 0, n_total, v, range(r.n))


class TestThresholdInvariance:
    def test_across_pivots_and_kernel(self, rng):
        for trial in range(300):
            n = int(rng.integers(1, 250))
            kind = trial % 3
            if kind == 0:
                vals = rng.random(n)
            elif kind == 1:
                vals = rng.choice([0.0, 0.25, 0.5, 1.0, 2.0], size=n)
                if not vals.any():
                    vals[0] = 1.0
            else:
                vals = np.where(rng.random(n) < 0.8, 0.0, rng.random(n))
                if not vals.any():
                    vals[0] = 0.5
            theta = float(rng.uniform(0.05, 0.95))
            iv = IndicatorVector(vals)
            stars = [quickmark(iv, theta, p).x_star for p in ALL_PIVOTS]
            stars.append(xstar_kernel(iv.scratch_copy(), theta))
            assert len(set(stars)) == 1, (trial, stars)

    def test_x_star_is_min_marked_value(self, rng):
        for _ in range(200):
            vals = rng.random(int(rng.integers(1, 150)))
            if not vals.any():
                vals[0] = 1.0
            theta = float(rng.uniform(0.05, 0.95))
            r = quickmark(vals, theta)
            assert r.x_star == float(vals[r.marked_indices()].min())

    def test_random_pivot_deterministic_per_seed(self, rng):
        vals = rng.random(200)
        a = quickmark(vals, 0.5, RandomPivot(seed=5))
        b = quickmark(vals, 0.5, RandomPivot(seed=5))
        assert a.n == b.n and a.x_star == b.x_star
        assert np.array_equal(a.perm, b.perm)


class TestInstrumentedPath:
    def test_matches_fast(self, rng):
        for trial in range(200):
            n = int(rng.integers(1, 200))
            vals = rng.random(n) if trial % 2 else rng.choice(
                [0.25, 0.5, 1.0, 2.0], size=n
            )
            theta = float(rng.uniform(0.05, 0.95))
            for piv in ALL_PIVOTS:
                counter = OpCounter()
                counted = quickmark(vals, theta, piv, counter=counter, check_invariants=True)
                fast = quickmark(vals, theta, piv)
                assert counted.n == fast.n
                assert counted.x_star == fast.x_star
                assert counter.comparisons > 0

    def test_quantile_cost_scales_with_min_q(self, rng):
        # counted cost of quantile(q) stays within the median-pivot budget
        # scaled by 1 / min(q, 1 - q)
        n = 3000
        median_max = 0.0
        instances = [rng.random(n) for _ in range(5)]
        for vals in instances:
            counter = OpCounter()
            quickmark(vals, 0.5, MedianPivot(), counter=counter)
            median_max = max(median_max, counter.comparisons / n)
        for q in (0.3, 0.7):
            factor = 1.0 / min(q, 1.0 - q)
            for vals in instances:
                counter = OpCounter()
                quickmark(vals, 0.5, QuantilePivot(q), counter=counter)
                assert counter.comparisons <= median_max * n * factor

    def test_partition_cost_linear(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 300))
            vals = rng.random(n)
            if not vals.any():
                vals[0] = 1.0
            state = SelectionState(
                perm=np.arange(n), lower=0, upper=n, residual_goal=0.1
            )
            counter = OpCounter()
            partition(vals, state, int(rng.integers(n)), counter)
            assert counter.comparisons <= 4 * n


class TestXStarKernel:
    def test_example(self):
        assert xstar_kernel(np.array([4.0, 1.0, 2.0, 3.0]), 0.5) == 3.0

    def test_all_equal(self):
        n = 5
        theta = (n - 1) / n
        assert xstar_kernel(np.full(n, 3.0), theta) == 3.0

    def test_reorders_scratch_only(self):
        iv = IndicatorVector([4.0, 1.0, 2.0, 3.0])
        scratch = iv.scratch_copy()
        xstar_kernel(scratch, 0.5)
        assert np.array_equal(iv.values, [4.0, 1.0, 2.0, 3.0])

    def test_matches_quickmark(self, rng):
        for _ in range(500):
            vals = rng.random(int(rng.integers(1, 200)))
            if not vals.any():
                vals[0] = 1.0
            theta = float(rng.uniform(0.05, 0.95))
            assert xstar_kernel(vals.copy(), theta) == quickmark(vals, theta).x_star

    def test_counted_matches_fast(self, rng):
        for _ in range(100):
            vals = rng.random(int(rng.integers(1, 150)))
            if not vals.any():
                vals[0] = 1.0
            counter = OpCounter()
            counted = xstar_kernel(vals.copy(), 0.4, counter)
            assert counted == xstar_kernel(vals.copy(), 0.4)
            if len(vals) >= 2:
                assert counter.comparisons > 0

    def test_validation(self):
        with pytest.raises(ParameterError):
            xstar_kernel(np.array([1.0]), 1.0)
        from dmark import InvalidIndicatorsError

        with pytest.raises(InvalidIndicatorsError):
            xstar_kernel(np.array([-1.0, 2.0]), 0.5)
        with pytest.raises(InvalidIndicatorsError):
            xstar_kernel(np.zeros(4), 0.5)


class TestSetFromThreshold:
    def test_examples(self):
        assert set_from_threshold([4, 1, 2, 3], 0.5, 3.0).marked_set == {0, 3}
        assert set_from_threshold([2, 2, 2, 2], 0.5, 2.0).marked == (0, 1)
        assert set_from_threshold([9, 1], 0.5, 9.0).marked == (0,)

    def test_threshold_too_small(self):
        with pytest.raises(ThresholdMismatchError):
            set_from_threshold([4, 1, 2, 3], 0.5, 1.0)

    def test_threshold_falls_short(self):
        with pytest.raises(ThresholdMismatchError):
            set_from_threshold([4, 1, 2, 3], 0.5, 10.0)
        with pytest.raises(ThresholdMismatchError):
            set_from_threshold([4, 1, 2, 3], 0.5, 4.0)

    def test_cardinality_matches_oracle(self, rng):
        for _ in range(300):
            vals = rng.random(int(rng.integers(1, 200)))
            if not vals.any():
                vals[0] = 1.0
            theta = float(rng.uniform(0.05, 0.95))
            star = xstar_kernel(vals.copy(), theta)
            out = set_from_threshold(vals, theta, star)
            assert out.cardinality == sort_mark(vals, theta).cardinality
            assert satisfies_doerfler(vals, theta, out.marked)
