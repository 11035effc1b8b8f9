"""Estimator tests: hand-evaluated fixtures, independent oracles, invariances.

The small-sample oracles below re-derive each estimator term by term with
plain Python loops and the scalar helpers, deliberately avoiding the
vectorized production path.
"""

import numpy as np
import pytest

from varextropy import (
    a_distribution,
    analytic_varextropy,
    c_weights,
    exponential,
    exponential_mean1,
    gamma_2_1,
    make_sample,
    normal,
    order_statistic_clamped,
    uniform01,
    vjb,
    vjd,
    vjq,
    vjs,
    vjv,
)
from varextropy.density import GridSpec, default_grid
from varextropy.errors import GridTooNarrow, TiedSpacings, TooFewPoints, WindowTooLarge
from varextropy import _batch


# ---------------------------------------------------------------------------
# independent oracles


def vjv_oracle(values, m):
    x = sorted(values)
    n = len(x)
    terms = [(m / (n + 1)) / (x[j + m - 1] - x[j - 1]) for j in range(1, n - m + 1)]
    tp = sum(t * t for t in terms) / len(terms)
    tpp = sum(terms) / len(terms)
    return 0.25 * (tp - tpp * tpp)


def vjq_oracle(values, m):
    s = make_sample(values)
    n = s.n
    sum_sq = sum_t = 0.0
    for i in range(1, n + 1):
        gap = order_statistic_clamped(s, i + m) - order_statistic_clamped(s, i - m)
        t = c_weights(n, m, i) * (m / n) / gap
        sum_sq += t * t
        sum_t += t
    return 0.25 * (sum_sq / n - (sum_t / n) ** 2)


SMALL_FIXTURES = [
    ([0.0, 0.5, 1.0], 1),
    ([0.0, 0.2, 1.0], 1),
    ([1.0, 2.0, 3.0, 4.0], 1),
    ([0.05, 0.3, 0.55, 0.72, 0.99], 1),
    ([0.05, 0.3, 0.55, 0.72, 0.99], 2),
    ([0.1, 0.2, 0.35, 0.58, 0.76, 0.9], 1),
    ([0.1, 0.2, 0.35, 0.58, 0.76, 0.9], 2),
]


class TestVjv:
    def test_three_point_flat(self):
        est = vjv(make_sample([0.0, 0.5, 1.0]), 1)
        assert est.value == 0.0
        assert est.window_m == 1

    def test_three_point_uneven(self):
        # T' = ((0.25/0.2)^2 + (0.25/0.8)^2)/2 = 0.830078125, T'' = 0.78125
        est = vjv(make_sample([0.0, 0.2, 1.0]), 1)
        assert est.value == pytest.approx(0.054931640625, abs=1e-15)

    @pytest.mark.parametrize("n", [5, 12, 33])
    def test_equispaced_is_zero(self, n):
        x = np.arange(1, n + 1) * 0.125
        assert vjv(make_sample(x), 1).value == pytest.approx(0.0, abs=1e-28)

    @pytest.mark.parametrize("values,m", SMALL_FIXTURES)
    def test_matches_oracle(self, values, m):
        assert vjv(make_sample(values), m).value == pytest.approx(
            vjv_oracle(values, m), abs=1e-12)

    def test_tied_spacings(self):
        with pytest.raises(TiedSpacings) as err:
            vjv(make_sample([0.0, 0.5, 0.5, 1.0]), 1)
        assert err.value.index == 1

    def test_tie_beyond_window_is_fine(self):
        # adjacent tie does not zero an m=2 gap
        assert vjv(make_sample([0.0, 0.5, 0.5, 1.0]), 2).value >= 0.0

    def test_window_bounds(self):
        s = make_sample([0.1, 0.4, 0.9])
        with pytest.raises(WindowTooLarge):
            vjv(s, 3)
        with pytest.raises(WindowTooLarge):
            vjv(s, 0)


class TestVjq:
    def test_equispaced_compensated(self):
        # c weights exactly offset the clamped half windows
        est = vjq(make_sample([1.0, 2.0, 3.0, 4.0]), 1)
        assert est.value == 0.0

    @pytest.mark.parametrize("n,m", [(8, 1), (8, 2), (16, 3)])
    def test_equispaced_any_size(self, n, m):
        x = np.arange(1, n + 1) * 0.25
        assert vjq(make_sample(x), m).value == pytest.approx(0.0, abs=1e-28)

    @pytest.mark.parametrize("values,m", SMALL_FIXTURES)
    def test_matches_oracle(self, values, m):
        if m >= len(values) / 2:
            pytest.skip("two-sided bound")
        assert vjq(make_sample(values), m).value == pytest.approx(
            vjq_oracle(values, m), abs=1e-12)

    def test_window_bound_strict(self):
        with pytest.raises(WindowTooLarge):
            vjq(make_sample([1.0, 2.0, 3.0, 4.0]), 2)

    def test_tied_spacings(self):
        with pytest.raises(TiedSpacings):
            vjq(make_sample([1.0, 1.0, 2.0, 3.0]), 1)


class TestVjd:
    def test_uniform_sample_small_value(self):
        rng = np.random.default_rng(11)
        est = vjd(make_sample(rng.random(100)))
        assert 0.0 <= est.value < 0.05

    def test_matches_exact_gaussian_integrals(self):
        # closed-form overlap integrals of the normal kernel mixture
        rng = np.random.default_rng(12)
        x = np.sort(rng.random(20))
        s = make_sample(x)
        est = vjd(s)
        h = est.bandwidth_h
        d2 = (x[:, None] - x[None, :]) / (np.sqrt(2.0) * h)
        i2 = (np.exp(-0.5 * d2 * d2) / np.sqrt(2 * np.pi)).sum() / (400 * np.sqrt(2.0) * h)
        a = x[:, None, None]
        b = x[None, :, None]
        c = x[None, None, :]
        za = (a - b) / (np.sqrt(2.0) * h)
        zb = (c - (a + b) / 2.0) / (np.sqrt(1.5) * h)
        dens = (np.exp(-0.5 * za * za) / (np.sqrt(2 * np.pi) * np.sqrt(2.0) * h)
                * np.exp(-0.5 * zb * zb) / (np.sqrt(2 * np.pi) * np.sqrt(1.5) * h))
        i3 = dens.sum() / 8000
        assert est.value == pytest.approx(0.25 * (i3 - i2 * i2), rel=1e-3)

    def test_default_bandwidth_exponent(self):
        rng = np.random.default_rng(13)
        s = make_sample(rng.random(50))
        sd = float(np.std(s.values, ddof=1))
        assert vjd(s).bandwidth_h == pytest.approx(1.06 * sd * 50 ** -0.25, abs=1e-15)

    def test_grid_too_narrow(self):
        s = make_sample([0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
        with pytest.raises(GridTooNarrow):
            vjd(s, h=0.5, grid=GridSpec(0.4, 0.6, 64))

    def test_custom_grid_and_bandwidth(self):
        s = make_sample(np.linspace(0, 1, 30))
        grid = default_grid(s, 0.2, points=4096)
        est = vjd(s, h=0.2, grid=grid)
        assert est.grid.points == 4096 and est.bandwidth_h == 0.2
        assert est.value >= 0.0


class TestVjb:
    def test_constant_terms_give_zero(self):
        assert float(_batch.quarter_var_rows(np.full((1, 7), 3.14))[0]) == 0.0

    def test_lizard_golden(self, lizard_transformed):
        assert vjb(lizard_transformed).value == pytest.approx(0.02535139, abs=5e-3)

    def test_too_few(self):
        with pytest.raises(TooFewPoints):
            vjb(make_sample([0.0, 1.0]))

    def test_bandwidth_uses_n_minus_1(self):
        rng = np.random.default_rng(14)
        s = make_sample(rng.random(20))
        sd = float(np.std(s.values, ddof=1))
        assert vjb(s).bandwidth_h == pytest.approx(1.06 * sd * 19 ** -0.2, abs=1e-15)


class TestVjs:
    def test_lizard_golden(self, lizard_transformed):
        assert vjs(lizard_transformed).value == pytest.approx(0.002548617, abs=5e-3)

    def test_nonnegative_and_finite(self):
        rng = np.random.default_rng(15)
        for n in (5, 20, 80):
            v = vjs(make_sample(rng.random(n))).value
            assert np.isfinite(v) and v >= 0.0

    def test_custom_u_grid(self):
        rng = np.random.default_rng(16)
        s = make_sample(rng.random(30))
        coarse = vjs(s, u_grid=GridSpec(0.0, 1.0, 256)).value
        fine = vjs(s, u_grid=GridSpec(0.0, 1.0, 2048)).value
        assert coarse == pytest.approx(fine, rel=0.05)


class TestInvariances:
    # estimators with default tuning, as (name, callable) pairs
    CASES = [
        ("vjv", lambda s: vjv(s).value),
        ("vjd", lambda s: vjd(s).value),
        ("vjb", lambda s: vjb(s).value),
        ("vjs", lambda s: vjs(s).value),
        ("vjq", lambda s: vjq(s).value),
    ]

    @pytest.mark.parametrize("name,f", CASES)
    @pytest.mark.parametrize("shift", [1.0, -5.0, 17.25])
    def test_translation_invariance(self, name, f, shift):
        rng = np.random.default_rng(17)
        x = rng.random(24)
        a = f(make_sample(x))
        b = f(make_sample(x + shift))
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12)

    @pytest.mark.parametrize("name,f", CASES)
    def test_scale_equivariance_power_of_two(self, name, f):
        rng = np.random.default_rng(18)
        x = rng.random(24)
        base = f(make_sample(x))
        scaled = f(make_sample(4.0 * x))
        if name in ("vjv", "vjq"):
            assert scaled == base / 16.0  # bitwise: all float ops scale exactly
        else:
            assert scaled == pytest.approx(base / 16.0, rel=1e-6)

    @pytest.mark.parametrize("name,f", CASES)
    def test_scale_equivariance_general(self, name, f):
        rng = np.random.default_rng(19)
        x = rng.random(20)
        a = 3.7
        base = f(make_sample(x))
        scaled = f(make_sample(a * x))
        tol = 1e-12 if name in ("vjv", "vjq") else 1e-6
        assert scaled == pytest.approx(base / a**2, rel=tol)

    @pytest.mark.parametrize("name,f", CASES)
    def test_nonnegative_on_random_samples(self, name, f):
        rng = np.random.default_rng(20)
        for n in (5, 11, 40):
            for _ in range(20):
                assert f(make_sample(rng.random(n))) >= 0.0

    @pytest.mark.parametrize("name,f", CASES)
    def test_permutation_invariance(self, name, f):
        rng = np.random.default_rng(21)
        x = rng.random(15)
        assert f(make_sample(x)) == f(make_sample(x[::-1]))


class TestBatchScalarExactness:
    """The engine's batched rows must equal scalar evaluation bit for bit."""

    def test_all_kinds_row_by_row(self):
        rng = np.random.default_rng(22)
        X = np.sort(rng.random((32, 25)), axis=1)
        batched = _batch.statistics_rows(list(_batch.ALL_KINDS), X)
        for kind in _batch.ALL_KINDS:
            singles = np.array([
                _batch.statistic_rows(kind, X[i:i + 1])[0] for i in range(32)
            ])
            assert np.array_equal(batched[kind], singles), kind


class TestAnalyticOracle:
    def test_closed_forms_exact(self):
        assert analytic_varextropy(uniform01()) == 0.0
        assert analytic_varextropy(exponential_mean1()) == pytest.approx(1.0 / 48.0, abs=1e-15)
        assert analytic_varextropy(gamma_2_1()) == pytest.approx(5.0 / 1728.0, abs=1e-15)

    def test_exponential_rate_scaling(self):
        assert analytic_varextropy(exponential(2.0)) == pytest.approx(4.0 / 48.0, abs=1e-15)

    def test_normal_against_quadrature(self):
        from scipy.integrate import quad
        d = normal(1.3, 2.5)
        i3 = quad(lambda x: d.pdf(x) ** 3, -np.inf, np.inf)[0]
        i2 = quad(lambda x: d.pdf(x) ** 2, -np.inf, np.inf)[0]
        assert analytic_varextropy(d) == pytest.approx(0.25 * (i3 - i2 * i2), rel=1e-10)

    def test_a_distribution_numeric_fallback(self):
        v = analytic_varextropy(a_distribution(125.662))
        assert np.isfinite(v) and v > 0.0
        # doubling beta must change the value (sanity that beta is wired in)
        assert analytic_varextropy(a_distribution(30.0)) != pytest.approx(v, rel=1e-3)
