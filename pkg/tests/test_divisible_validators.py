import math

import numpy as np
import pytest
from context import bounds, cf_core, errors, idtest, refdist, streams


class TestConfigValidators:
    def new_config(self):
        return idtest.TestConfig()

    @pytest.mark.parametrize("value,return_value", [
        (None, None),
        ("2.5", 2.5),
        (4, 4.0),
    ])
    def test_validate_optional_positive(self, value, return_value):
        config = self.new_config()
        assert config._validate_optional_positive(value, "t_max") == \
            return_value

    @pytest.mark.parametrize("value", [("wide"), (0), (-1.0), (math.inf)])
    def test_validate_optional_positive_invalid(self, value):
        config = self.new_config()
        with pytest.raises(errors.InvalidArgumentError, match="t_max"):
            config._validate_optional_positive(value, "t_max")

    @pytest.mark.parametrize("value,return_value", [
        (999, 999),
        (np.int64(120), 120),
        (99.0, 99),
    ])
    def test_validate_integer(self, value, return_value):
        config = self.new_config()
        assert config._validate_integer(value, "bootstrap_B", 99) == \
            return_value

    @pytest.mark.parametrize("value", [(True), (98), ("many"), (150.5)])
    def test_validate_integer_invalid(self, value):
        config = self.new_config()
        with pytest.raises(errors.InvalidArgumentError, match="bootstrap_B"):
            config._validate_integer(value, "bootstrap_B", 99)

    @pytest.mark.parametrize("grid_points", [(2), (64), (1024.0)])
    def test_validate_grid_points(self, grid_points):
        config = self.new_config()
        assert config._validate_grid_points(grid_points) == int(grid_points)

    @pytest.mark.parametrize("grid_points", [(1), (3), (96)])
    def test_validate_grid_points_invalid(self, grid_points):
        config = self.new_config()
        with pytest.raises(errors.InvalidArgumentError):
            config._validate_grid_points(grid_points)

    @pytest.mark.parametrize("statistics,return_value", [
        ("t3", ("T3", )),
        ("t4,t3", ("T3", "T4")),
        ("TMOM, t3, t3", ("T3", "TMOM")),
        (["tmom", "T4"], ("T4", "TMOM")),
    ])
    def test_validate_statistics(self, statistics, return_value):
        config = self.new_config()
        assert config._validate_statistics(statistics) == return_value

    @pytest.mark.parametrize("r_order", [("0.5"), (1), (1.99)])
    def test_validate_r_order(self, r_order):
        config = self.new_config()
        assert config._validate_r_order(r_order) == float(r_order)

    @pytest.mark.parametrize("r_order", [(0), (2), ("one")])
    def test_validate_r_order_invalid(self, r_order):
        config = self.new_config()
        with pytest.raises(errors.InvalidArgumentError):
            config._validate_r_order(r_order)

    @pytest.mark.parametrize("alpha", [(0), (1), ("five"), (-0.1)])
    def test_validate_alpha_invalid(self, alpha):
        config = self.new_config()
        with pytest.raises(errors.InvalidArgumentError, match="alpha"):
            config._validate_alpha(alpha)


class TestModuleValidators:
    @pytest.mark.parametrize("value,return_value", [
        ("1.5", 1.5),
        (-2, -2.0),
        (np.float32(0.5), 0.5),
    ])
    def test_validate_finite(self, value, return_value):
        assert bounds._validate_finite(value, "sigma") == return_value

    @pytest.mark.parametrize("value", [(math.nan), (-math.inf), (None)])
    def test_validate_finite_invalid(self, value):
        with pytest.raises(errors.InvalidArgumentError, match="sigma"):
            bounds._validate_finite(value, "sigma")

    def test_sigma_within_support(self):
        bounds._validate_sigma_within_support(1.0, 1.0)
        with pytest.raises(errors.InvalidArgumentError, match="exceeds"):
            bounds._validate_sigma_within_support(1.1, 1.0)

    @pytest.mark.parametrize("m,return_value", [(1, 1), (np.int32(4), 4),
                                                (6.0, 6)])
    def test_validate_order(self, m, return_value):
        assert bounds._validate_order(m) == return_value

    @pytest.mark.parametrize("m", [(0), (2.5), (False), ("two")])
    def test_validate_order_invalid(self, m):
        with pytest.raises(errors.InvalidArgumentError):
            bounds._validate_order(m)

    @pytest.mark.parametrize("value,minimum,return_value", [
        (0, 0, 0),
        (np.int64(7), 1, 7),
        (12.0, 2, 12),
    ])
    def test_validate_integer(self, value, minimum, return_value):
        assert errors._validate_integer(value, "n", minimum) == return_value

    @pytest.mark.parametrize("value,minimum,match", [
        (True, 0, "should be an integer\\."),
        (None, 0, "should be an integer\\."),
        ("3", 0, "should be an integer"),
        (2.5, 0, "should be an integer >= 0"),
        (1, 2, "should be an integer >= 2"),
        (math.inf, 0, "should be an integer\\."),
    ])
    def test_validate_integer_invalid(self, value, minimum, match):
        with pytest.raises(errors.InvalidArgumentError, match=match):
            errors._validate_integer(value, "n", minimum)

    def test_integer_checks_share_messages(self):
        expected = "Invalid m: 2.5, should be an integer >= 1."
        for check in (lambda: bounds._validate_order(2.5),
                      lambda: refdist.get_dist("binomsym", m=2.5)):
            with pytest.raises(errors.InvalidArgumentError) as info:
                check()
            assert str(info.value) == expected
        with pytest.raises(errors.InvalidArgumentError,
                           match="Invalid n: 0, should be an integer >= 1"):
            refdist.sample(refdist.get_dist("gaussian"), 0, 1)

    @pytest.mark.parametrize("value", [(0.0), (-3.0), ("x"), (math.inf)])
    def test_validate_positive_real_invalid(self, value):
        with pytest.raises(errors.InvalidArgumentError, match="t_max"):
            cf_core._validate_positive_real(value, "t_max")

    @pytest.mark.parametrize("value", [(0.0), (math.nan), ("big")])
    def test_validate_parameter_invalid(self, value):
        with pytest.raises(errors.InvalidArgumentError, match="lam"):
            refdist._validate_parameter(value, "lam")

    def test_error_types(self):
        with pytest.raises(errors.DataError):
            errors._error("bad row", "Data")
        with pytest.raises(errors.UndefinedIterateError):
            errors._error("log of zero", "UndefinedIterate")
        assert issubclass(errors.UndefinedIterateError,
                          errors.NumericFailureError)
        with pytest.raises(errors.DivisibleError):
            errors._error("unknown kind", "Unknown")


class TestStreams:
    @pytest.mark.parametrize("seed,return_value", [
        (42, (42, )),
        (np.int64(7), (7, )),
        ((3, 5), (3, 5)),
        ([0, 1, 2], (0, 1, 2)),
    ])
    def test_normalize_seed(self, seed, return_value):
        assert streams.normalize_seed(seed) == return_value

    @pytest.mark.parametrize("seed", [(-1), ((1, -2)), (()), ("abc"),
                                      (None)])
    def test_normalize_seed_invalid(self, seed):
        with pytest.raises(errors.InvalidArgumentError, match="seed"):
            streams.normalize_seed(seed)

    def test_same_key_same_stream(self):
        first = streams.make_stream(42, 3, 0).random(5)
        second = streams.make_stream((42, 3), 0).random(5)
        assert np.array_equal(first, second)

    def test_keys_separate_streams(self):
        draws = [streams.make_stream(42, b).random(3) for b in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                assert not np.array_equal(draws[i], draws[j])
        assert not np.array_equal(
            streams.make_stream(42).random(3),
            streams.make_stream(43).random(3))
