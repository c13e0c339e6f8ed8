import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jtdsim import auc, auc_star, confusion_rates, d_kc, roc_curve

from helpers import pair_count_auc

sample_lists = st.lists(
    st.integers(min_value=-1000, max_value=1000), min_size=1, max_size=60
)


class TestRocCurve:
    def test_perfect_separation(self):
        assert auc([1, 2], [3, 4]) == 1.0

    def test_distribution_vs_itself_is_half(self):
        samples = [3.0, 1.0, 4.0, 1.0, 5.0]
        assert auc(samples, samples) == 0.5

    def test_interleaved(self):
        # pair-count oracle: 3 of 4 cross pairs ordered correctly
        assert pair_count_auc([1, 3], [2, 4]) == 0.75
        assert auc([1, 3], [2, 4]) == 0.75

    def test_single_point_tie(self):
        assert auc([5], [5]) == 0.5

    def test_single_point_ordered(self):
        assert auc([0], [1]) == 1.0

    def test_cross_class_tie_gets_half_weight(self):
        assert auc([1, 2], [2, 3]) == pair_count_auc([1, 2], [2, 3]) == 0.875

    def test_curve_endpoints_and_monotonicity(self):
        rng = np.random.default_rng(4)
        roc = roc_curve(rng.normal(0, 1, 50), rng.normal(1, 1, 60))
        points = roc.points
        assert points[0].tolist() == [0.0, 0.0]
        assert points[-1].tolist() == [1.0, 1.0]
        assert np.all(np.diff(points[:, 0]) >= 0)
        assert np.all(np.diff(points[:, 1]) >= 0)
        assert roc.n0 == 50 and roc.n1 == 60

    def test_trapezoid_over_points_equals_reported_auc(self):
        # the staircase with deduplicated thresholds carries the same area
        rng = np.random.default_rng(5)
        p0 = rng.integers(0, 20, 40)
        p1 = rng.integers(5, 25, 30)
        roc = roc_curve(p0, p1)
        area = np.trapezoid(roc.points[:, 1], roc.points[:, 0])
        assert area == pytest.approx(roc.auc, abs=1e-12)

    def test_matches_pair_count_oracle_small_random(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            n0 = int(rng.integers(1, 30))
            n1 = int(rng.integers(1, 30))
            p0 = rng.integers(0, 12, n0)
            p1 = rng.integers(0, 12, n1)
            assert abs(auc(p0, p1) - pair_count_auc(p0, p1)) <= 1e-12

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            auc([], [1.0])
        with pytest.raises(ValueError):
            auc([1.0], [])

    @settings(max_examples=200, deadline=None)
    @given(a=sample_lists, b=sample_lists)
    def test_complement_symmetry_without_ties(self, a, b):
        # disjoint supports by construction: evens vs odds
        p0 = [2 * x for x in a]
        p1 = [2 * x + 1 for x in b]
        assert auc(p0, p1) + auc(p1, p0) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(a=sample_lists, b=sample_lists)
    def test_invariant_under_increasing_transform(self, a, b):
        # exact integer transforms preserve order and tie structure
        before = auc(a, b)
        after = auc([3 * x + 7 for x in a], [3 * x + 7 for x in b])
        assert before == after

    @settings(max_examples=200, deadline=None)
    @given(a=sample_lists, b=sample_lists)
    def test_matches_pair_count_oracle(self, a, b):
        assert abs(auc(a, b) - pair_count_auc(a, b)) <= 1e-12

    def test_auc_star_orientation(self):
        assert auc_star([3, 4], [1, 2]) == 1.0
        assert auc([3, 4], [1, 2]) == 0.0


class TestDkc:
    def test_identical_sets_are_zero(self):
        assert d_kc([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_zero_variance_distinct_means_is_inf(self):
        assert d_kc([0.0, 0.0], [1.0, 1.0]) == math.inf

    def test_zero_over_zero_rejected(self):
        with pytest.raises(ValueError):
            d_kc([2.0, 2.0], [2.0, 2.0])

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            d_kc([1.0], [1.0, 2.0])

    def test_unit_separation_gaussians(self):
        # closed form: means 0 and 1, variances 1 -> d_kc = 1
        rng = np.random.default_rng(7)
        p0 = rng.normal(0.0, 1.0, 40_000)
        p1 = rng.normal(1.0, 1.0, 40_000)
        assert d_kc(p0, p1) == pytest.approx(1.0, abs=0.1)

    @settings(max_examples=100, deadline=None)
    @given(
        a=st.lists(
            st.integers(min_value=-100_000, max_value=100_000),
            min_size=2,
            max_size=30,
        ),
        b=st.lists(
            st.integers(min_value=-100_000, max_value=100_000),
            min_size=2,
            max_size=30,
        ),
        shift=st.floats(min_value=-50, max_value=50),
        scale=st.floats(min_value=0.01, max_value=100),
    )
    def test_shift_and_scale_invariance(self, a, b, shift, scale):
        # quantized samples: the spread either vanishes or is >= 1e-3, so it
        # survives the float shift instead of being absorbed into its ulp
        base0 = 1e-3 * np.asarray(a, dtype=float)
        base1 = 1e-3 * np.asarray(b, dtype=float)
        if base0.var(ddof=1) + base1.var(ddof=1) == 0.0:
            return
        reference = d_kc(base0, base1)
        transformed = d_kc(scale * base0 + shift, scale * base1 + shift)
        assert transformed == pytest.approx(reference, rel=1e-9, abs=1e-12)


class TestConfusionRates:
    def test_threshold_below_everything(self):
        rates = confusion_rates([1, 2], [3, 4], 0.0)
        assert rates == (1.0, 1.0, 0.0, 0.0)

    def test_threshold_above_everything(self):
        rates = confusion_rates([1, 2], [3, 4], 10.0)
        assert rates == (0.0, 0.0, 1.0, 1.0)

    def test_direct_count(self):
        rates = confusion_rates([1, 2, 3, 4], [1, 2, 3, 4], 2.5)
        assert rates.fp == 0.5

    def test_consistent_with_roc_curve(self):
        rng = np.random.default_rng(8)
        p0 = rng.normal(0.0, 1.0, 37)
        p1 = rng.normal(0.5, 1.0, 53)
        theta = float(p1[10])
        rates = confusion_rates(p0, p1, theta)
        roc = roc_curve(p0, p1)
        match = roc.points[
            (np.abs(roc.points[:, 0] - rates.fp) < 1e-12)
            & (np.abs(roc.points[:, 1] - rates.tp) < 1e-12)
        ]
        assert len(match) >= 1
        assert rates.tp + rates.fn == pytest.approx(1.0)
        assert rates.fp + rates.tn == pytest.approx(1.0)
