import numpy as np
import pytest
from hypothesis import given, strategies as st

from varextropy import (
    c_weights,
    default_window,
    empirical_cdf,
    make_sample,
    order_statistic_clamped,
    sample_std,
)
from varextropy.errors import (
    EmptyOrSingleton,
    IndexOutOfRange,
    NonFiniteValue,
    WindowTooLarge,
    ZeroVariance,
)
from varextropy.sample import WindowSpec


class TestMakeSample:
    def test_sorts_and_counts(self):
        s = make_sample([3.0, 1.0, 2.0])
        assert s.values.tolist() == [1.0, 2.0, 3.0]
        assert s.n == 3 and not s.has_ties

    def test_tie_detection(self):
        s = make_sample([1.0, 1.0, 2.0])
        assert s.has_ties and s.tie_count == 1

    def test_rejects_non_finite_with_index(self):
        with pytest.raises(NonFiniteValue) as err:
            make_sample([1.0, np.nan])
        assert err.value.index == 1
        with pytest.raises(NonFiniteValue):
            make_sample([np.inf, 0.0, 1.0])

    def test_rejects_tiny(self):
        with pytest.raises(EmptyOrSingleton):
            make_sample([1.0])
        with pytest.raises(EmptyOrSingleton):
            make_sample([])

    def test_values_frozen(self):
        s = make_sample([2.0, 1.0])
        with pytest.raises(ValueError):
            s.values[0] = 5.0

    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40))
    def test_permutation_invariant(self, values):
        a = make_sample(values)
        b = make_sample(list(reversed(values)))
        assert np.array_equal(a.values, b.values)


class TestOrderStatisticClamped:
    def test_spec_values(self):
        s = make_sample([1.0, 2.0, 3.0, 4.0])
        assert order_statistic_clamped(s, 0) == 1.0
        assert order_statistic_clamped(s, -3) == 1.0
        assert order_statistic_clamped(s, 6) == 4.0
        assert order_statistic_clamped(s, 2) == 2.0

    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=15),
           st.integers(-10, 25), st.integers(-10, 25))
    def test_monotone_in_index(self, values, i, j):
        s = make_sample(values)
        if i > j:
            i, j = j, i
        assert order_statistic_clamped(s, i) <= order_statistic_clamped(s, j)


class TestEmpiricalCdf:
    def test_step_values(self):
        s = make_sample([1.0, 2.0, 3.0, 4.0])
        assert empirical_cdf(s, 2.0) == 0.5
        assert empirical_cdf(s, 0.0) == 0.0
        assert empirical_cdf(s, 4.0) == 1.0
        # right continuity: just below a jump the smaller value holds
        assert empirical_cdf(s, np.nextafter(2.0, 0.0)) == 0.25

    def test_hits_i_over_n_at_distinct_order_stats(self):
        rng = np.random.default_rng(0)
        s = make_sample(rng.random(17))
        for i in range(s.n):
            assert empirical_cdf(s, s.values[i]) == pytest.approx((i + 1) / s.n)


class TestDefaultWindow:
    @pytest.mark.parametrize("n,expected", [(10, 3), (100, 10), (20, 4), (63, 8), (31, 6)])
    def test_heuristic(self, n, expected):
        assert default_window(n) == expected
        assert default_window(n, two_sided=False) == expected

    def test_small_n_two_sided_clipping(self):
        # raw floor(sqrt(4)+0.5) = 2 violates m < n/2, so it clips to 1
        assert default_window(4) == 1

    @pytest.mark.parametrize("n", range(4, 400))
    def test_strictly_below_half_n(self, n):
        assert default_window(n) < n / 2

    @pytest.mark.parametrize("n", range(2, 60))
    def test_one_sided_bound(self, n):
        assert 1 <= default_window(n, two_sided=False) <= n - 1


class TestCWeights:
    def test_spec_values(self):
        assert c_weights(4, 1, 1) == 1.0
        assert c_weights(4, 1, 2) == 2.0
        assert c_weights(10, 3, 9) == pytest.approx(4.0 / 3.0, abs=1e-15)

    def test_index_bounds(self):
        with pytest.raises(IndexOutOfRange):
            c_weights(10, 3, 0)
        with pytest.raises(IndexOutOfRange):
            c_weights(10, 3, 11)

    def test_window_bound(self):
        with pytest.raises(WindowTooLarge):
            c_weights(10, 5, 1)  # m = n/2 is not allowed

    @pytest.mark.parametrize("n,m", [(4, 1), (10, 3), (11, 4), (50, 7), (9, 2)])
    def test_range_middle_block_and_symmetry(self, n, m):
        c = c_weights(n, m)
        assert np.all(c >= 1.0) and np.all(c <= 2.0)
        assert np.all(c[m:n - m] == 2.0)
        assert np.allclose(c, c[::-1])

    def test_vector_matches_scalar(self):
        n, m = 13, 4
        c = c_weights(n, m)
        for i in range(1, n + 1):
            assert c[i - 1] == c_weights(n, m, i)


class TestWindowSpec:
    def test_two_sided_strict(self):
        WindowSpec(4, two_sided=True).validate(10)
        with pytest.raises(WindowTooLarge):
            WindowSpec(5, two_sided=True).validate(10)

    def test_one_sided(self):
        WindowSpec(9, two_sided=False).validate(10)
        with pytest.raises(WindowTooLarge):
            WindowSpec(10, two_sided=False).validate(10)
        with pytest.raises(WindowTooLarge):
            WindowSpec(0, two_sided=False).validate(10)


class TestSampleStd:
    def test_known_values(self):
        assert sample_std(make_sample([1.0, 2.0, 3.0])) == pytest.approx(1.0, abs=1e-15)
        assert sample_std(make_sample([0.0, 2.0])) == pytest.approx(np.sqrt(2.0), abs=1e-15)

    def test_degenerate(self):
        with pytest.raises(ZeroVariance):
            sample_std(make_sample([5.0, 5.0, 5.0]))
