import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.stats import norm

from luckmeter.corrstats import (
    ConfidenceInterval,
    ConfusionCounts,
    CorrelationEstimate,
    RegressionEstimate,
    binary_rank_ceiling,
    fisher_ci,
    indicator_vectors,
    midranks,
    norm_ppf,
    pearson,
    phi_from_counts,
    r_from_rates,
    r_from_regression,
    spearman,
    with_ci,
    z_critical,
)
from luckmeter.errors import (
    DegenerateMarginError,
    DegenerateRError,
    InsufficientSampleError,
    InvalidCountsError,
    InvalidInputError,
    LengthMismatchError,
    NonPositiveRangeError,
    ZeroVarianceError,
)
from oracles import exact_pearson, indicator_pair, naive_midranks, naive_spearman

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def nonconstant(xs):
    return len(set(xs)) > 1


class TestPearson:
    def test_perfect_positive(self):
        assert pearson([1, 2, 3], [2, 4, 6]).r == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [3, 2, 1]).r == pytest.approx(-1.0)

    def test_hand_computed(self):
        # deviations (-1.5,-.5,.5,1.5) . (-1.5,.5,-.5,1.5) = 4, each variance sum 5
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]).r == pytest.approx(0.8, abs=1e-15)

    def test_metadata(self):
        est = pearson([1, 2, 3, 4], [1, 3, 2, 4])
        assert est.method == "pearson"
        assert est.n == 4

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            pearson([1, 2, 3], [1, 2])

    @pytest.mark.parametrize("x,y", [([1, 1, 1], [1, 2, 3]), ([1, 2, 3], [0.1, 0.1, 0.1])])
    def test_constant_input_is_an_error(self, x, y):
        with pytest.raises(ZeroVarianceError):
            pearson(x, y)

    def test_too_short(self):
        with pytest.raises(InvalidInputError):
            pearson([1], [2])

    def test_non_finite(self):
        with pytest.raises(InvalidInputError):
            pearson([1, float("nan"), 3], [1, 2, 3])

    @given(st.lists(st.tuples(finite, finite), min_size=2, max_size=40))
    def test_matches_exact_oracle_and_is_symmetric(self, pairs):
        x = [a for a, _ in pairs]
        y = [b for _, b in pairs]
        assume(nonconstant(x) and nonconstant(y))
        r = pearson(x, y).r
        assert r == pytest.approx(exact_pearson(x, y), abs=1e-9)
        assert r == pytest.approx(pearson(y, x).r, abs=1e-12)

    @given(
        st.lists(st.integers(-1000, 1000), min_size=3, max_size=30),
        st.lists(st.integers(-1000, 1000), min_size=3, max_size=30),
        st.floats(0.01, 100), st.floats(-100, 100),
    )
    def test_affine_invariance_and_negation(self, x, y, a, b):
        n = min(len(x), len(y))
        x, y = x[:n], y[:n]
        assume(nonconstant(x) and nonconstant(y))
        r = pearson(x, y).r
        xa = [a * v + b for v in x]
        assert pearson(xa, y).r == pytest.approx(r, abs=1e-12)
        assert pearson([-a * v + b for v in x], y).r == pytest.approx(-r, abs=1e-12)


class TestMidranks:
    def test_no_ties(self):
        assert midranks([10, 20, 30]).tolist() == [1, 2, 3]

    def test_pair_tie(self):
        assert midranks([5, 5, 7]).tolist() == [1.5, 1.5, 3]

    def test_three_way_tie(self):
        assert midranks([3, 1, 3, 3]).tolist() == [3, 1, 3, 3]

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            midranks([1.0, float("inf")])

    def test_rejects_empty(self):
        with pytest.raises(InvalidInputError):
            midranks([])

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=60))
    def test_matches_naive_and_sums(self, x):
        r = midranks(x)
        assert r.tolist() == naive_midranks(x)
        n = len(x)
        assert r.sum() == n * (n + 1) / 2

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=60), st.randoms(use_true_random=False))
    def test_permutation_equivariance(self, x, rnd):
        perm = list(range(len(x)))
        rnd.shuffle(perm)
        r = midranks(x)
        rp = midranks([x[i] for i in perm])
        assert rp.tolist() == [r[i] for i in perm]


class TestSpearman:
    def test_identical_orders(self):
        assert spearman([1, 2, 3, 4, 5], [10, 20, 35, 40, 100]).r == pytest.approx(1.0)

    def test_hand_computed(self):
        assert spearman([1, 2, 3], [6, 4, 5]).r == pytest.approx(-0.5)

    def test_binary_ties(self):
        # Pearson of [1,2,3,4] vs [3.5,3.5,1.5,1.5] = -4 / sqrt(5 * 4)
        assert spearman([1, 2, 3, 4], [1, 1, 0, 0]).r == pytest.approx(-2 / math.sqrt(5), abs=1e-12)
        assert spearman([1, 2, 3, 4], [1, 1, 0, 0]).r == pytest.approx(-0.8944, abs=1e-4)

    def test_all_tied_is_error(self):
        with pytest.raises(ZeroVarianceError):
            spearman([1, 2, 3], [7, 7, 7])

    @given(st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=2, max_size=40))
    def test_matches_naive(self, pairs):
        x = [a for a, _ in pairs]
        y = [b for _, b in pairs]
        assume(nonconstant(x) and nonconstant(y))
        assert spearman(x, y).r == pytest.approx(naive_spearman(x, y), abs=1e-12)

    @given(st.lists(st.tuples(st.floats(1e-6, 1e9), st.integers(0, 20)), min_size=2, max_size=40))
    def test_log_transform_leaves_spearman_unchanged(self, pairs):
        x = [a for a, _ in pairs]
        y = [b for _, b in pairs]
        assume(nonconstant(x) and nonconstant(y))
        # log is strictly increasing, but may merge nearly-equal floats
        assume(len(set(np.log(x))) == len(set(x)))
        assert spearman(np.log(x), y).r == spearman(x, y).r


class TestConfusionCounts:
    def test_rates(self):
        c = ConfusionCounts(tp=3, fp=8, fn=22, tn=2882)
        assert c.n_pos == 25 and c.n_neg == 2890 and c.total == 2915
        assert c.precision == pytest.approx(3 / 11)
        assert c.tpr == pytest.approx(3 / 25)

    @pytest.mark.parametrize("bad", [-1, 1.5, True, "3"])
    def test_rejects_non_counts(self, bad):
        with pytest.raises(InvalidCountsError):
            ConfusionCounts(bad, 1, 1, 1)

    def test_empty_sieve_precision(self):
        with pytest.raises(DegenerateMarginError):
            ConfusionCounts(0, 0, 3, 3).precision


class TestPhi:
    def test_perfect_agreement(self):
        assert phi_from_counts(ConfusionCounts(1, 0, 0, 1)).r == 1.0

    def test_perfect_disagreement(self):
        assert phi_from_counts(ConfusionCounts(0, 1, 1, 0)).r == -1.0

    def test_full_recall_nobel_sieve(self):
        # 25 laureates and 734 others in the sieve; published r ~ 0.16
        r = phi_from_counts(ConfusionCounts(25, 734, 0, 2156)).r
        assert r == pytest.approx(0.157, abs=5e-4)
        assert abs(r - 0.16) <= 0.01

    @pytest.mark.parametrize("cells", [(0, 0, 3, 4), (3, 4, 0, 0), (0, 3, 0, 4), (3, 0, 4, 0)])
    def test_zero_margin(self, cells):
        with pytest.raises(DegenerateMarginError):
            phi_from_counts(ConfusionCounts(*cells))

    @given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
    def test_equals_pearson_on_indicators(self, tp, fp, fn, tn):
        c = ConfusionCounts(tp, fp, fn, tn)
        assume(min(c.margins()) > 0)
        a, b = indicator_pair(tp, fp, fn, tn)
        assert phi_from_counts(c).r == pytest.approx(exact_pearson(a, b), abs=1e-12)
        s, lab = indicator_vectors(c)
        assert pearson(s, lab).r == pytest.approx(exact_pearson(a, b), abs=1e-12)


class TestRFromRates:
    def test_full_recall(self):
        r = r_from_rates(1.0, 734 / 2890, 25, 2890).r
        assert r == pytest.approx(0.157, abs=5e-4)
        assert round(r, 2) == 0.16

    def test_hypothetical_small_negative_class(self):
        assert r_from_rates(1.0, 0.25, 25, 28).r == pytest.approx(0.77, abs=0.005)

    @pytest.mark.parametrize("n", [(1, 1), (7, 300), (25, 2890)])
    def test_equal_rates_give_zero(self, n):
        assert r_from_rates(0.5, 0.5, *n).r == 0.0

    def test_best_threshold(self):
        assert r_from_rates(10 / 25, 41 / 2890, 25, 2890).r == pytest.approx(0.27, abs=0.005)

    def test_method_tag(self):
        assert r_from_rates(0.4, 0.1, 10, 10).method == "eq1"

    @pytest.mark.parametrize("args", [(0, 0, 5, 5), (1, 1, 5, 5)])
    def test_degenerate(self, args):
        with pytest.raises(DegenerateMarginError):
            r_from_rates(*args)

    @pytest.mark.parametrize("args", [(1.2, 0.1, 5, 5), (0.5, -0.1, 5, 5), (0.5, 0.5, 0, 5)])
    def test_invalid(self, args):
        with pytest.raises(InvalidInputError):
            r_from_rates(*args)

    @given(st.floats(0.001, 0.999), st.floats(0.001, 0.999), st.integers(1, 10**6), st.integers(1, 10**6))
    def test_swapping_rates_and_classes_negates(self, tpr, fpr, nN, nO):
        r = r_from_rates(tpr, fpr, nN, nO).r
        assert r_from_rates(fpr, tpr, nO, nN).r == pytest.approx(-r, abs=1e-12)
        assert math.copysign(1, r) == math.copysign(1, tpr - fpr) or r == 0

    def test_swapping_rates_alone_is_not_antisymmetric_when_imbalanced(self):
        r = r_from_rates(1.0, 0.25, 25, 2890).r
        s = r_from_rates(0.25, 1.0, 25, 2890).r
        assert s < 0 < r and abs(s) != pytest.approx(r, abs=1e-3)

    @given(st.floats(0.001, 0.999), st.floats(0.001, 0.999), st.integers(1, 10**6))
    def test_swap_rates_negates_for_balanced_classes(self, tpr, fpr, n):
        assert r_from_rates(fpr, tpr, n, n).r == pytest.approx(-r_from_rates(tpr, fpr, n, n).r, abs=1e-12)

    @given(st.integers(1, 10**6), st.integers(1, 10**6), st.data())
    def test_agrees_with_phi_on_integer_counts(self, nN, nO, data):
        tp = data.draw(st.integers(0, nN))
        fp = data.draw(st.integers(0, nO))
        c = ConfusionCounts(tp, fp, nN - tp, nO - fp)
        assume(min(c.margins()) > 0)
        assert r_from_rates(tp / nN, fp / nO, nN, nO).r == pytest.approx(phi_from_counts(c).r, abs=1e-12)


class TestNormalQuantile:
    @pytest.mark.parametrize("p", [1e-12, 1e-6, 0.001, 0.02, 0.02425, 0.1, 0.5, 0.7, 0.975, 0.995, 0.99999])
    def test_against_scipy(self, p):
        assert norm_ppf(p) == pytest.approx(norm.ppf(p), rel=1e-8, abs=1e-10)

    @given(st.floats(1e-10, 1 - 1e-10))
    def test_against_scipy_random(self, p):
        assert norm_ppf(p) == pytest.approx(norm.ppf(p), rel=1e-8, abs=1e-10)

    def test_common_levels(self):
        assert z_critical(0.95) == pytest.approx(1.959963984540054, abs=1e-12)
        assert z_critical(0.99) == pytest.approx(2.5758293035489004, abs=1e-12)

    @pytest.mark.parametrize("p", [0, 1, -0.1, 1.5])
    def test_domain(self, p):
        with pytest.raises(InvalidInputError):
            norm_ppf(p)


class TestFisherCI:
    def test_published_95(self):
        lo, hi = fisher_ci(-0.71, 13, 0.95)
        assert abs(hi - (-0.27)) <= 0.01
        assert hi == pytest.approx(-0.2612, abs=1e-4)
        assert lo < -0.71 < hi

    def test_published_99(self):
        _, hi = fisher_ci(-0.71, 13, 0.99)
        assert abs(hi - (-0.080)) <= 0.01

    @pytest.mark.parametrize("n,level", [(4, 0.5), (13, 0.95), (1000, 0.999)])
    def test_symmetric_at_zero(self, n, level):
        lo, hi = fisher_ci(0.0, n, level)
        assert lo == pytest.approx(-hi, abs=1e-15)

    def test_against_scipy_quantile(self):
        lo, hi = fisher_ci(0.3, 50, 0.9)
        h = norm.ppf(0.95) / math.sqrt(47)
        assert (lo, hi) == pytest.approx((math.tanh(math.atanh(0.3) - h), math.tanh(math.atanh(0.3) + h)), abs=1e-12)

    @given(st.floats(-0.95, 0.95), st.integers(4, 10_000), st.floats(0.05, 0.90), st.floats(0.01, 0.09))
    def test_width_monotone(self, r, n, level, dl):
        def width(n, level):
            lo, hi = fisher_ci(r, n, level)
            return hi - lo

        assert width(n, level + dl) > width(n, level)
        assert width(n + 1, level) < width(n, level)

    def test_errors(self):
        with pytest.raises(InsufficientSampleError):
            fisher_ci(0.2, 3, 0.95)
        with pytest.raises(DegenerateRError):
            fisher_ci(1.0, 30, 0.95)
        with pytest.raises(InvalidInputError):
            fisher_ci(0.2, 30, 1.0)

    def test_with_ci_attaches_interval(self):
        est = with_ci(spearman([1, 2, 3, 4, 5, 6], [2, 1, 4, 3, 6, 5]), 0.95)
        assert est.ci.level == 0.95
        assert est.ci.lower < est.r < est.ci.upper


class TestRegressionConversion:
    def test_wine(self):
        est = r_from_regression(RegressionEstimate(-0.04, 3.0, math.log(150 / 1.65)))
        assert est.r == pytest.approx(-0.027, abs=0.001)
        assert est.method == "regression-range"
        assert not est.clamped

    def test_zero_slope(self):
        assert r_from_regression(RegressionEstimate(0.0, 2.0, 7.0)).r == 0.0

    def test_identity(self):
        assert r_from_regression(RegressionEstimate(1.0, 3.0, 3.0)).r == 1.0

    def test_clamped(self):
        est = r_from_regression(RegressionEstimate(-2.0, 3.0, 3.0))
        assert est.r == -1.0 and est.clamped

    @pytest.mark.parametrize("num,den", [(0, 1), (1, 0), (-1, 2)])
    def test_non_positive_range(self, num, den):
        with pytest.raises(NonPositiveRangeError):
            r_from_regression(RegressionEstimate(0.1, num, den))


class TestBinaryRankCeiling:
    def test_two_elements(self):
        assert binary_rank_ceiling(1, 2).r == pytest.approx(1.0)

    def test_hand_computed(self):
        assert binary_rank_ceiling(2, 4).r == pytest.approx(2 / math.sqrt(5), abs=1e-12)

    def test_nobel_size(self):
        # exact oracle on the extremal vector, not the closed form
        n, k = 2915, 25
        labels = [1] * k + [0] * (n - k)
        expected = -exact_pearson(list(range(1, n + 1)), labels)
        assert expected == pytest.approx(0.1597, abs=1e-4)
        assert binary_rank_ceiling(k, n).r == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("args", [(0, 5), (5, 5), (6, 5)])
    def test_invalid(self, args):
        with pytest.raises(InvalidCountsError):
            binary_rank_ceiling(*args)

    @pytest.mark.parametrize("n", [2, 3, 10, 37, 120, 200])
    def test_dominates_random_placements(self, n):
        rng = np.random.default_rng(n)
        ranks = np.arange(1, n + 1)
        for k in sorted({1, n // 3 or 1, n - 1}):
            ceiling = binary_rank_ceiling(k, n).r
            for _ in range(1000):
                lab = np.zeros(n)
                lab[rng.choice(n, k, replace=False)] = 1
                assert abs(spearman(ranks, lab).r) <= ceiling + 1e-12


class TestCorrelationEstimate:
    def test_range(self):
        with pytest.raises(InvalidInputError):
            CorrelationEstimate(1.5, "pearson")

    def test_interval_must_contain_r(self):
        with pytest.raises(InvalidInputError):
            CorrelationEstimate(0.5, "pearson", 10, ConfidenceInterval(0.95, 0.6, 0.9))

    def test_level_range(self):
        with pytest.raises(InvalidInputError):
            CorrelationEstimate(0.5, "pearson", 10, ConfidenceInterval(1.0, 0.1, 0.9))

    def test_unknown_method(self):
        with pytest.raises(InvalidInputError):
            CorrelationEstimate(0.5, "kendall")


class TestPearsonScale:
    @pytest.mark.parametrize("scale", [1e-300, 1e-150, 1e-80, 1.0, 1e150, 1e300])
    def test_scale_free(self, scale):
        x = [0.0, 1.0, 3.0, 2.0]
        y = [1.0, 0.0, 4.0, 2.0]
        expected = exact_pearson(x, y)
        assert pearson([v * scale for v in x], y).r == pytest.approx(expected, abs=1e-12)
        assert pearson(x, [v * scale for v in y]).r == pytest.approx(expected, abs=1e-12)

    def test_tiny_two_point(self):
        assert pearson([0.0, 9.931531513931596e-83], [9.931531513931596e-83, 0.0]).r == pytest.approx(-1.0)
        assert pearson([0.0, 1.0], [0.0, 1.2605144098291879e-236]).r == pytest.approx(1.0)
