import math

import numpy as np
import pytest

from varextropy import (
    DensityModel,
    GridSpec,
    default_grid,
    integrate,
    kde_at,
    loo_kde_at,
    make_sample,
    quantile_density,
    quantile_density_model,
    silverman_bandwidth,
)
from varextropy.errors import LengthMismatch, NonpositiveScale, TooFewPoints

PHI0 = 1.0 / math.sqrt(2.0 * math.pi)


def phi(z):
    return math.exp(-0.5 * z * z) * PHI0


class TestSilvermanBandwidth:
    def test_exact_powers(self):
        # 32**0.2 == 2 and 1024**0.2 == 4 exactly
        assert silverman_bandwidth(32, 1.0) == pytest.approx(0.53, abs=1e-15)
        assert silverman_bandwidth(1024, 1.0) == pytest.approx(0.265, abs=1e-15)

    def test_general_value(self):
        assert silverman_bandwidth(100, 2.0) == pytest.approx(0.8439872015734141, abs=1e-15)

    def test_errors(self):
        with pytest.raises(NonpositiveScale):
            silverman_bandwidth(10, 0.0)
        with pytest.raises(TooFewPoints):
            silverman_bandwidth(1, 1.0)


class TestKdeAt:
    def test_point_mass_peak(self):
        # two coincident points act as one kernel: value at 0 is phi(0)
        model = DensityModel(make_sample([0.0, 0.0]), 1.0)
        assert kde_at(model, 0.0) == pytest.approx(PHI0, abs=1e-15)

    def test_two_point_average(self):
        model = DensityModel(make_sample([-1.0, 1.0]), 1.0)
        assert kde_at(model, 0.0) == pytest.approx(phi(1.0), abs=1e-15)
        assert kde_at(model, 0.0) == pytest.approx(0.2419707245191434, abs=1e-12)

    def test_vanishes_in_tails(self):
        model = DensityModel(make_sample([-1.0, 1.0]), 1.0)
        assert kde_at(model, 50.0) < 1e-200
        assert kde_at(model, -50.0) < 1e-200

    def test_array_evaluation(self):
        model = DensityModel(make_sample([0.0, 1.0, 3.0]), 0.7)
        xs = np.linspace(-1, 4, 11)
        vals = kde_at(model, xs)
        assert vals.shape == xs.shape
        assert vals[5] == kde_at(model, float(xs[5]))

    def test_integrates_to_one_on_default_grid(self):
        rng = np.random.default_rng(3)
        s = make_sample(rng.normal(size=40))
        h = silverman_bandwidth(40, float(np.std(s.values, ddof=1)))
        grid = default_grid(s, h)
        mass = integrate(kde_at(DensityModel(s, h), grid.nodes()), grid)
        assert mass == pytest.approx(1.0, abs=1e-3)

    def test_translation_equivariance(self):
        rng = np.random.default_rng(4)
        x = rng.random(12)
        h = 0.3
        pts = np.linspace(0, 1, 7)
        base = kde_at(DensityModel(make_sample(x), h), pts)
        shifted = kde_at(DensityModel(make_sample(x + 10.0), h), pts + 10.0)
        assert np.allclose(base, shifted, rtol=1e-12)

    def test_scale_equivariance_power_of_two(self):
        # a = 2 keeps every float operation exact
        rng = np.random.default_rng(5)
        x = rng.random(9)
        pts = np.linspace(0.1, 0.9, 5)
        base = kde_at(DensityModel(make_sample(x), 0.25), pts)
        scaled = kde_at(DensityModel(make_sample(2.0 * x), 0.5), 2.0 * pts)
        assert np.array_equal(base, 2.0 * scaled)
        assert silverman_bandwidth(9, 2.0) == 2.0 * silverman_bandwidth(9, 1.0)


class TestLooKde:
    def test_middle_of_three(self):
        s = make_sample([0.0, 1.0, 2.0])
        h2 = 1.06 * 2.0 ** (-0.2)  # sample std is exactly 1
        expected = (phi(1.0 / h2) + phi(1.0 / h2)) / (2.0 * h2)
        assert loo_kde_at(s, 1) == pytest.approx(expected, abs=1e-15)
        assert loo_kde_at(s, 1) == pytest.approx(0.24032654487038463, abs=1e-12)

    def test_symmetric_neighbours_equal(self):
        s = make_sample([-2.0, -1.0, 1.0, 2.0])
        assert loo_kde_at(s, 0) == pytest.approx(loo_kde_at(s, 3), abs=1e-15)
        assert loo_kde_at(s, 1) == pytest.approx(loo_kde_at(s, 2), abs=1e-15)

    def test_too_few(self):
        with pytest.raises(TooFewPoints):
            loo_kde_at(make_sample([0.0, 1.0]), 0)

    def test_equals_kde_over_retained_points(self):
        # oracle: drop the point, build a plain KDE with h_{n-1}, evaluate
        s = make_sample([0.3, 0.9, 1.4, 2.2, 3.1])
        h = 1.06 * float(np.std(s.values, ddof=1)) * 4 ** (-0.2)
        for i in range(s.n):
            rest = np.delete(s.values, i)
            oracle = kde_at(DensityModel(make_sample(rest), h), float(s.values[i]))
            assert loo_kde_at(s, i) == pytest.approx(oracle, rel=1e-14)


class TestDefaultGridAndIntegrate:
    def test_grid_bounds(self):
        g = default_grid(make_sample([0.0, 1.0]), 0.5)
        assert (g.lo, g.hi, g.points) == (-2.0, 3.0, 2048)
        g2 = default_grid(make_sample([0.0, 0.01]), 0.1)
        assert g2.lo == pytest.approx(-0.4) and g2.hi == pytest.approx(0.41)

    def test_grid_contains_sample(self):
        s = make_sample([0.2, 0.5, 0.9])
        g = default_grid(s, 0.05)
        assert g.lo < s.values[0] and g.hi > s.values[-1]

    def test_weights_sum_to_span(self):
        g = GridSpec(-1.0, 3.5, 256)
        assert g.trapezoid_weights().sum() == pytest.approx(4.5, abs=1e-12)

    def test_constant_and_affine_exact(self):
        g = GridSpec(0.0, 1.0, 101)
        assert integrate(np.ones(101), g) == pytest.approx(1.0, abs=1e-14)
        assert integrate(g.nodes(), g) == pytest.approx(0.5, abs=1e-14)

    def test_quadratic_error_bound(self):
        g = GridSpec(0.0, 1.0, 2048)
        assert integrate(g.nodes() ** 2, g) == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            integrate(np.ones(10), GridSpec(0.0, 1.0, 64))


class TestQuantileDensity:
    def test_positive_everywhere(self):
        rng = np.random.default_rng(6)
        s = make_sample(rng.random(25))
        u = np.linspace(0.01, 0.99, 37)
        q = quantile_density(s, u)
        assert np.all(q > 0.0)

    def test_uniform_large_sample_near_one(self):
        rng = np.random.default_rng(123)
        s = make_sample(rng.random(10_000))
        q = quantile_density(s, 0.5)
        assert 0.8 <= q <= 1.25

    def test_translation_invariance(self):
        rng = np.random.default_rng(7)
        x = rng.random(15)
        u = np.array([0.2, 0.5, 0.8])
        a = quantile_density(make_sample(x), u)
        b = quantile_density(make_sample(x + 3.0), u)
        assert np.allclose(a, b, rtol=1e-9)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(8)
        x = rng.random(15)
        u = np.array([0.3, 0.6])
        a = quantile_density(make_sample(x), u)
        b = quantile_density(make_sample(2.0 * x), u)
        assert np.allclose(2.0 * a, b, rtol=1e-12)

    def test_model_reuse_matches(self):
        rng = np.random.default_rng(9)
        s = make_sample(rng.random(20))
        m = quantile_density_model(s)
        assert quantile_density(s, 0.4, model=m) == quantile_density(s, 0.4)
