import math

import numpy as np
import pytest
from scipy import special
from context import bounds, cf_core, errors, refdist


class TestRegistry:
    def test_names(self):
        assert [dist.name for dist in refdist.registry()] == [
            "gaussian", "sympoisson", "laplace", "uniform", "rademacher",
            "binomsym", "triangular"
        ]
        assert refdist.NAMES == tuple(dist.name
                                      for dist in refdist.registry())

    @pytest.mark.parametrize("name,divisibility,m", [
        ("gaussian", refdist.Divisibility.INFINITELY_DIVISIBLE, None),
        ("sympoisson", refdist.Divisibility.INFINITELY_DIVISIBLE, None),
        ("laplace", refdist.Divisibility.INFINITELY_DIVISIBLE, None),
        ("uniform", refdist.Divisibility.NOT_ID, None),
        ("rademacher", refdist.Divisibility.NOT_ID, None),
        ("binomsym", refdist.Divisibility.M_DIVISIBLE, 3),
        ("triangular", refdist.Divisibility.NOT_ID, None),
    ])
    def test_divisibility(self, name, divisibility, m):
        dist = refdist.get_dist(name)
        assert dist.divisibility is divisibility
        assert dist.m == m

    @pytest.mark.parametrize("name,sigma2,support", [
        ("gaussian", 1.0, None),
        ("sympoisson", 2.0, None),
        ("laplace", 2.0, None),
        ("uniform", 1 / 3, 1.0),
        ("rademacher", 1.0, 1.0),
        ("binomsym", 3.0, 3.0),
        ("triangular", 1 / 6, 1.0),
    ])
    def test_defaults(self, name, sigma2, support):
        dist = refdist.get_dist(name)
        assert dist.sigma2 == pytest.approx(sigma2)
        assert dist.support_radius == support

    def test_get_dist_params(self):
        dist = refdist.get_dist("binomsym", m=5, a=0.5)
        assert dist.m == 5
        assert dist.sigma2 == pytest.approx(1.25)
        assert dist.support_radius == pytest.approx(2.5)
        assert refdist.get_dist("GAUSSIAN", sigma=2.0).sigma2 == 4.0

    @pytest.mark.parametrize("name,params,match", [
        ("cauchy", {}, "Unknown distribution"),
        ("gaussian", {"lam": 1.0}, "Invalid parameters"),
        ("gaussian", {"sigma": -1.0}, "Invalid sigma"),
        ("binomsym", {"m": 2.5}, "Invalid m"),
        ("uniform", {"A": "wide"}, "Invalid A"),
    ])
    def test_get_dist_invalid(self, name, params, match):
        with pytest.raises(errors.InvalidArgumentError, match=match):
            refdist.get_dist(name, **params)


class TestCf:
    def setup_method(self):
        self.grid = cf_core.make_grid(10.0, 2000)

    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_cf_at_zero(self, name):
        values = refdist.cf_eval(refdist.get_dist(name), self.grid)
        assert values[0] == 1.0
        assert np.all(np.abs(values) <= 1 + 1e-15)

    @pytest.mark.parametrize("name,t,expected", [
        ("gaussian", 1.0, math.exp(-0.5)),
        ("sympoisson", math.pi, math.exp(-4)),
        ("laplace", 2.0, 0.2),
        ("uniform", math.pi / 2, 2 / math.pi),
        ("rademacher", math.pi, -1.0),
        ("binomsym", math.pi / 3, 0.125),
        ("triangular", math.pi, 4 / math.pi**2),
    ])
    def test_cf_values(self, name, t, expected):
        dist = refdist.get_dist(name)
        assert float(dist.cf(t)) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_infinitely_divisible_sweep(self, name):
        dist = refdist.get_dist(name)
        t = self.grid.points
        f = refdist.cf_eval(dist, self.grid)
        th3 = np.max(bounds.th3_lower(dist.sigma2).deficit(f, t))
        th4 = np.max(bounds.th4_deficit(f, dist.cf(t / 2)))
        if dist.infinitely_divisible:
            assert th3 <= 1e-12
            assert th4 <= 1e-12
        else:
            # Every other entry has a CF zero below t = 10.
            assert th3 > 0.01

    @pytest.mark.parametrize("name", ["laplace", "sympoisson"])
    def test_non_gaussian_strictly_above_th3(self, name):
        dist = refdist.get_dist(name)
        grid = cf_core.make_grid(10.0, 201)
        t = grid.points[1:]
        f = refdist.cf_eval(dist, grid)[1:]
        assert np.all(bounds.th3_lower(dist.sigma2).deficit(f, t) < -1e-9)

    def test_uniform_violation(self):
        dist = refdist.get_dist("uniform")
        deficit = bounds.th3_lower(dist.sigma2).deficit(dist.cf(math.pi),
                                                        math.pi)
        assert float(deficit) == pytest.approx(math.exp(-math.pi**2 / 6),
                                               abs=1e-9)

    def test_rademacher_violation(self):
        dist = refdist.get_dist("rademacher")
        t = self.grid.points
        f = refdist.cf_eval(dist, self.grid)
        th3 = bounds.th3_lower(dist.sigma2).deficit(f, t)
        th4 = bounds.th4_deficit(f, dist.cf(t / 2))
        assert max(np.max(th3), np.max(th4)) >= 0.1


class TestSampling:
    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_deterministic(self, name):
        dist = refdist.get_dist(name)
        first = refdist.sample(dist, 50, 7)
        again = refdist.sample(dist, 50, 7)
        other = refdist.sample(dist, 50, 8)
        assert np.array_equal(first.values, again.values)
        assert not np.array_equal(first.values, other.values)

    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_moments_match(self, name):
        dist = refdist.get_dist(name)
        x = refdist.sample(dist, 200000, 1).values
        assert abs(np.mean(x)) <= 5 * dist.sigma / math.sqrt(200000)
        assert np.mean(x * x) == pytest.approx(dist.sigma2, rel=0.03)

    @pytest.mark.parametrize("name", ["uniform", "rademacher", "binomsym",
                                      "triangular"])
    def test_support(self, name):
        dist = refdist.get_dist(name)
        x = refdist.sample(dist, 5000, 3).values
        assert np.max(np.abs(x)) <= dist.support_radius

    def test_discrete_values(self):
        x = refdist.sample(refdist.get_dist("sympoisson"), 1000, 4).values
        assert np.array_equal(x, np.round(x))
        y = refdist.sample(refdist.get_dist("binomsym"), 1000, 4).values
        assert set(np.unique(y)) <= {-3.0, -1.0, 1.0, 3.0}

    def test_large_mean_poisson(self):
        dist = refdist.get_dist("sympoisson", lam=50.0)
        x = refdist.sample(dist, 100000, 5).values
        assert np.var(x) == pytest.approx(100.0, rel=0.03)

    def test_ecf_tracks_cf(self):
        dist = refdist.get_dist("laplace")
        grid = cf_core.make_grid(4.0, 17)
        sample = refdist.sample(dist, 20000, 9)
        estimate = cf_core.ecf(sample, grid, symmetric=True)
        assert np.max(np.abs(estimate.sym_values -
                             refdist.cf_eval(dist, grid))) < 0.03

    @pytest.mark.slow
    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_ecf_within_band(self, name):
        dist = refdist.get_dist(name)
        grid = cf_core.make_grid(5.0, 51)
        expected = refdist.cf_eval(dist, grid)
        n = 10**4
        band = 4 / math.sqrt(n)
        inside = 0
        for seed in range(50):
            sample = refdist.sample(dist, n, seed)
            estimate = cf_core.ecf(sample, grid, symmetric=True,
                                   variance=False)
            if np.max(np.abs(estimate.sym_values - expected)) <= band:
                inside += 1
        assert inside >= 48

    @pytest.mark.parametrize("n", [(0), (-3), (2.5)])
    def test_invalid_n(self, n):
        with pytest.raises(errors.InvalidArgumentError):
            refdist.sample(refdist.get_dist("gaussian"), n, 1)


class TestAbsMoments:
    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_second_moment_is_variance(self, name):
        dist = refdist.get_dist(name)
        assert dist.abs_moment(2.0) == pytest.approx(dist.sigma2, rel=1e-10)

    @pytest.mark.parametrize("name,r,expected", [
        ("gaussian", 1.0, math.sqrt(2 / math.pi)),
        ("laplace", 1.0, 1.0),
        ("uniform", 0.5, 2 / 3),
        ("rademacher", 0.7, 1.0),
        ("binomsym", 1.0, 1.5),
        ("triangular", 1.0, 1 / 3),
        ("sympoisson", 1.0,
         2 * math.exp(-2) * (special.i0(2.0) + special.i1(2.0))),
    ])
    def test_values(self, name, r, expected):
        dist = refdist.get_dist(name)
        assert dist.abs_moment(r) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_symmetrized_second_moment(self, name):
        dist = refdist.get_dist(name)
        assert dist.sym_abs_moment(2.0) == pytest.approx(2 * dist.sigma2,
                                                         rel=1e-10)

    @pytest.mark.parametrize("name,r,expected", [
        ("gaussian", 1.0, 2 / math.sqrt(math.pi)),
        ("laplace", 1.0, 1.5),
        ("uniform", 1.0, 2 / 3),
        ("rademacher", 0.5, math.sqrt(2) / 2),
        ("binomsym", 1.0, 1.875),
        ("triangular", 2.0, 1 / 3),
        ("sympoisson", 1.0,
         4 * math.exp(-4) * (special.i0(4.0) + special.i1(4.0))),
    ])
    def test_symmetrized_values(self, name, r, expected):
        dist = refdist.get_dist(name)
        assert dist.sym_abs_moment(r) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("name", refdist.NAMES)
    @pytest.mark.parametrize("r", [(0.5), (1.5)])
    def test_symmetrized_against_draws(self, name, r):
        dist = refdist.get_dist(name)
        x = refdist.sample(dist, 200000, 11).values
        y = refdist.sample(dist, 200000, 12).values
        assert np.mean(np.abs(x - y)**r) == pytest.approx(
            dist.sym_abs_moment(r), rel=0.03)

    @pytest.mark.parametrize("name", refdist.NAMES)
    def test_moment_set_lyapunov(self, name):
        moment_set = refdist.get_dist(name).moment_set(orders=(0.5, 1.0))
        assert moment_set.lyapunov_ordered()
        assert moment_set.absolute(0.5) > 0
