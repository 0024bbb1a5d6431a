import math

import numpy as np
import pytest
from context import cf_core, errors, streams


def brute_symmetrized(x, t):
    # Mean of cos(t (x_i - x_j)) over ordered pairs i != j.
    n = x.size
    differences = (x[:, None] - x[None, :])[~np.eye(n, dtype=bool)]
    return np.array([np.mean(np.cos(point * differences)) for point in t])


class TestSample:
    def test_properties(self):
        sample = cf_core.Sample([1.0, 2.0, 3.0, 6.0])
        assert sample.n == 4
        assert len(sample) == 4
        assert sample.mean == 3.0
        assert sample.variance == pytest.approx(14 / 3)
        assert sample.summary() == {
            "n": 4,
            "mean": 3.0,
            "variance": pytest.approx(14 / 3)
        }

    def test_values_read_only(self):
        sample = cf_core.Sample([1.0, 2.0])
        with pytest.raises(ValueError):
            sample.values[0] = 5.0

    @pytest.mark.parametrize("values,match", [
        ([], "Empty sample"),
        ([1.0, 2.0, math.nan], "position 2"),
        ([math.inf], "position 0"),
        (["a", "b"], "real numbers"),
    ])
    def test_invalid_values(self, values, match):
        with pytest.raises(errors.InvalidArgumentError, match=match):
            cf_core.Sample(values)

    def test_require(self):
        sample = cf_core.Sample([1.0])
        with pytest.raises(errors.InvalidArgumentError, match="too small"):
            sample.variance


class TestGrid:
    def test_make_grid(self):
        grid = cf_core.make_grid(2.0, 5)
        assert grid.count == 5
        assert grid.t_max == 2.0
        assert list(grid.points) == [0.0, 0.5, 1.0, 1.5, 2.0]

    @pytest.mark.parametrize("points", [
        ([0.0]),
        ([0.0, 1.0, 1.0]),
        ([0.0, 2.0, 1.0]),
        ([0.0, math.inf]),
    ])
    def test_invalid_grid(self, points):
        with pytest.raises(errors.InvalidArgumentError):
            cf_core.TGrid(points)

    @pytest.mark.parametrize("t_max,count", [
        (0.0, 10),
        (-1.0, 10),
        (math.nan, 10),
        (1.0, 1),
        (1.0, 2.5),
    ])
    def test_make_grid_invalid(self, t_max, count):
        with pytest.raises(errors.InvalidArgumentError):
            cf_core.make_grid(t_max, count)

    def test_dyadic_grid(self):
        grid = cf_core.dyadic_grid(math.pi, 256)
        assert grid.count == 257
        assert grid.points[-1] == math.pi
        assert grid.points[128] == math.pi / 2

    def test_dyadic_grid_needs_power_of_two(self):
        with pytest.raises(errors.InvalidArgumentError, match="power of two"):
            cf_core.dyadic_grid(1.0, 100)

    @pytest.mark.parametrize("t_max", [(1.0), (math.pi), (8 / math.sqrt(2)),
                                       (0.37)])
    def test_dyadic_pairs_exact(self, t_max):
        grid = cf_core.dyadic_grid(t_max, 256)
        k, half = cf_core.dyadic_pairs(grid)
        assert k.size == 128
        assert np.all(grid.points[half] == grid.points[k] / 2)
        assert not np.any(grid.points[k] == 0)

    def test_dyadic_pairs_missing(self):
        with pytest.raises(errors.InvalidArgumentError, match="half"):
            cf_core.dyadic_pairs(cf_core.TGrid([1.0, 3.0]))


class TestEcf:
    def setup_method(self):
        self.grid = cf_core.make_grid(5.0, 41)

    def test_matches_pairwise_sum(self):
        rng = streams.make_stream(2024)
        for _ in range(100):
            n = int(rng.integers(2, 31))
            x = rng.normal(size=n) * rng.uniform(0.1, 3.0)
            result = cf_core.ecf(cf_core.Sample(x), self.grid)
            expected = brute_symmetrized(x, self.grid.points)
            assert np.max(np.abs(result.sym_values - expected)) <= 1e-12

    def test_symmetric_mode(self):
        x = np.array([-2.0, -0.5, 0.5, 2.0, 1.0])
        result = cf_core.ecf(cf_core.Sample(x), self.grid, symmetric=True)
        expected = np.mean(np.cos(np.outer(self.grid.points, x)), axis=1)
        assert np.allclose(result.sym_values, expected, atol=1e-15)
        assert result.symmetric

    def test_value_at_zero(self):
        result = cf_core.ecf(cf_core.Sample([0.3, 1.7, -4.0]), self.grid)
        assert result.complex_values[0] == 1.0
        assert result.sym_values[0] == pytest.approx(1.0, abs=1e-15)

    def test_even_in_t(self):
        sample = cf_core.Sample(streams.make_stream(8).exponential(size=25))
        points = np.linspace(0.1, 4.0, 12)
        grid = cf_core.TGrid(np.concatenate([-points[::-1], points]))
        result = cf_core.ecf(sample, grid, variance=False)
        assert np.allclose(result.sym_values[:12][::-1],
                           result.sym_values[12:],
                           atol=1e-15)

    def test_symmetric_sample_is_real(self):
        half = streams.make_stream(9).normal(size=40)
        sample = cf_core.Sample(np.concatenate([half, -half]))
        result = cf_core.ecf(sample, self.grid)
        assert np.max(np.abs(result.complex_values.imag)) <= 1e-12
        assert np.all(np.abs(result.complex_values) <= 1 + 1e-12)

    def test_variance(self):
        sample = cf_core.Sample(streams.make_stream(3).normal(size=200))
        result = cf_core.ecf(sample, self.grid)
        assert np.all(result.sym_variance >= 0)
        assert np.all(result.sym_variance < 4 / 200)
        quick = cf_core.ecf(sample, self.grid, variance=False)
        assert np.all(np.isnan(quick.sym_variance))
        assert np.array_equal(quick.sym_values, result.sym_values)

    def test_blocks_agree(self, monkeypatch):
        sample = cf_core.Sample(streams.make_stream(5).normal(size=300))
        whole = cf_core.ecf(sample, self.grid)
        monkeypatch.setattr(cf_core, "_BLOCK_SIZE", 41 * 7)
        blocked = cf_core.ecf(sample, self.grid)
        assert np.allclose(whole.sym_values, blocked.sym_values, atol=1e-13)

    def test_from_cf_values(self):
        values = np.exp(-self.grid.points**2 / 2)
        result = cf_core.EmpiricalCF.from_cf_values(self.grid, values)
        assert np.array_equal(result.sym_values, values)
        assert np.all(result.sym_variance == 0)

    def test_from_cf_values_shape(self):
        with pytest.raises(errors.InvalidArgumentError, match="Expected 41"):
            cf_core.EmpiricalCF.from_cf_values(self.grid, [1.0, 0.5])

    def test_symmetrize_ecf(self):
        assert cf_core.symmetrize_ecf(1.0, 10) == pytest.approx(1.0)
        assert cf_core.symmetrize_ecf(0.0, 5) == pytest.approx(-0.25)
        with pytest.raises(errors.InvalidArgumentError):
            cf_core.symmetrize_ecf(0.5, 1)


class TestMoments:
    def test_values(self):
        result = cf_core.moments(cf_core.Sample([1.0, -1.0, 2.0, -2.0]),
                                 orders=[0.5])
        assert result.sigma2 == pytest.approx(2.5)
        assert result.a4 == pytest.approx(8.5)
        assert result.a5 == pytest.approx(16.5)
        assert result.a10 == pytest.approx(512.5)
        assert result.absolute(0.5) == pytest.approx((2 + 2 * math.sqrt(2)) /
                                                     4)
        assert result.lyapunov_ordered()
        assert not result.centered

    def test_centered(self):
        result = cf_core.moments(cf_core.Sample([9.0, 11.0]), centered=True)
        assert result.sigma2 == pytest.approx(1.0)
        assert result.a10 == pytest.approx(1.0)

    def test_unknown_order(self):
        result = cf_core.moments(cf_core.Sample([1.0, 2.0]))
        with pytest.raises(errors.InvalidArgumentError, match="order 3"):
            result.absolute(3)

    def test_lyapunov_violation_detected(self):
        broken = cf_core.MomentSet(sigma2=4.0, a4=1.0, a5=1.0, a10=1.0)
        assert not broken.lyapunov_ordered()

    def test_abs_power_zero(self):
        assert list(cf_core.abs_power([0.0, -2.0], 0.5)) == [
            0.0, pytest.approx(math.sqrt(2))
        ]

    def test_invalid_order(self):
        with pytest.raises(errors.InvalidArgumentError):
            cf_core.moments(cf_core.Sample([1.0, 2.0]), orders=[-1.0])


class TestPairwiseDifferences:
    def setup_method(self):
        self.sample = cf_core.Sample([0.0, 1.0, 3.0, 7.0, 15.0])

    def test_full_budget_covers_all_pairs(self):
        result = cf_core.pairwise_difference_sample(self.sample, 10**6, 1)
        x = self.sample.values
        expected = sorted(x[i] - x[j] for i in range(5) for j in range(5)
                          if i != j)
        assert sorted(result.values) == expected

    def test_budget_and_determinism(self):
        first = cf_core.pairwise_difference_sample(self.sample, 7, 11)
        second = cf_core.pairwise_difference_sample(self.sample, 7, 11)
        assert first.n == 7
        assert np.array_equal(first.values, second.values)
        assert np.all(first.values != 0)
