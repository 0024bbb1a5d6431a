# Copyright 2026 The Divisible Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Samples, evaluation grids, empirical characteristic functions, moments."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import _error, _validate_integer
from .streams import make_stream

logger = logging.getLogger(__name__)

# Grid points times observations evaluated per block in ecf().
_BLOCK_SIZE = 2**20
_LYAPUNOV_RTOL = 1e-9


class Sample:
    """A finite sample of real observations.

    Attributes:
        values: One-dimensional float array of the observations.
    """

    def __init__(self, values):
        """Inits the sample, rejecting empty and non-finite input."""
        try:
            values = np.array(values, dtype=float).ravel()
        except (TypeError, ValueError):
            _error("Invalid sample values: should be real numbers.")
        if values.size == 0:
            _error("Empty sample.")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            _error("Sample value {} at position {} is not finite.".format(
                values[bad], bad))
        values.setflags(write=False)
        self._values = values

    @property
    def values(self):
        return self._values

    @property
    def n(self):
        return int(self._values.size)

    @property
    def mean(self):
        return float(np.mean(self._values))

    @property
    def variance(self):
        """Unbiased sample variance (divisor n - 1)."""
        self.require(2)
        return float(np.var(self._values, ddof=1))

    def require(self, minimum):
        """Raise unless the sample holds at least ``minimum`` values."""
        if self.n < minimum:
            _error("Sample of size {} is too small, at least {} values are "
                   "required.".format(self.n, minimum))

    def summary(self):
        summary = {"n": self.n, "mean": self.mean}
        if self.n >= 2:
            summary["variance"] = self.variance
        return summary

    def __len__(self):
        return self.n

    def __repr__(self):
        return "Sample(n={})".format(self.n)


@dataclass(frozen=True, eq=False)
class TGrid:
    """Strictly increasing evaluation points on the t-axis, starting at 0.

    Negative t is covered by evenness of every CF the package evaluates.
    """
    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float).ravel()
        if points.size < 2:
            _error("A grid needs at least 2 points.")
        if not np.all(np.isfinite(points)):
            _error("Grid points must be finite.")
        if np.any(np.diff(points) <= 0):
            _error("Grid points must be strictly increasing.")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @property
    def t_max(self):
        return float(self.points[-1])

    @property
    def count(self):
        return int(self.points.size)


def make_grid(t_max, count):
    """Uniform grid on [0, t_max] including both endpoints.

    Points are t_max * (k / (count - 1)); when count - 1 is a power of two
    the ratios are exact, so halving a point lands exactly on another one.

    Args:
        t_max: Right endpoint, finite and > 0.
        count: Number of points, >= 2.

    Returns:
        TGrid
    """
    t_max = _validate_positive_real(t_max, "t_max")
    count = _validate_integer(count, "count", minimum=2)
    return TGrid(t_max * (np.arange(count) / (count - 1)))


def dyadic_grid(t_max, points):
    """Grid t_k = t_max * k / 2**L, k = 0..2**L, with ``points`` = 2**L."""
    points = _validate_integer(points, "points", minimum=2)
    if points & (points - 1):
        _error("Dyadic grid needs a power of two of points, got {}.".format(
            points))
    return make_grid(t_max, points + 1)


def dyadic_pairs(grid):
    """Indices (k, j) with grid.points[j] == grid.points[k] / 2 exactly.

    The trivial pair at t = 0 is left out.

    Returns:
        Two integer arrays of equal length.
    """
    points = grid.points
    halves = points / 2
    index = np.searchsorted(points, halves)
    inside = index < points.size
    exact = np.zeros(points.size, dtype=bool)
    exact[inside] = points[index[inside]] == halves[inside]
    exact[points == 0] = False
    if not np.any(exact):
        _error("Grid has no point whose half is also a grid point; use "
               "dyadic_grid().")
    return np.flatnonzero(exact), index[exact]


@dataclass(frozen=True, eq=False)
class EmpiricalCF:
    """Empirical characteristic function on a grid.

    ``sym_values`` holds the real, even CF estimate the inequality checks
    run on. For raw data it is the unbiased U-statistic for |f(t)|^2, the CF
    of X - X'. With ``symmetric=True`` in ecf() the data are trusted to be
    symmetric already and it is Re f(t). ``sym_variance`` is a first-order
    variance proxy for each entry of ``sym_values``.
    """
    grid: TGrid
    complex_values: np.ndarray
    sym_values: np.ndarray
    sym_variance: np.ndarray
    n: int = None
    symmetric: bool = False

    @classmethod
    def from_cf_values(cls, grid, values):
        """Wrap analytic, real CF values as a zero-noise EmpiricalCF."""
        values = np.asarray(values, dtype=float)
        if values.shape != grid.points.shape:
            _error("Expected {} CF values, got {}.".format(
                grid.count, values.size))
        return cls(
            grid=grid,
            complex_values=values.astype(complex),
            sym_values=values,
            sym_variance=np.zeros_like(values),
            symmetric=True)


def ecf(sample, grid, symmetric=False, variance=True):
    """Evaluate the empirical characteristic function on a grid.

    Args:
        sample: Sample with n >= 2.
        grid: TGrid.
        symmetric: Trust the sample as symmetric and use Re f(t) instead of
            the symmetrized estimate.
        variance: Also compute the per-point variance proxy.

    Returns:
        EmpiricalCF
    """
    sample.require(2)
    x = sample.values
    t = grid.points
    n = sample.n
    cos_sum = np.zeros(t.size)
    sin_sum = np.zeros(t.size)
    second = np.zeros((3, t.size))
    step = max(1, _BLOCK_SIZE // t.size)
    for start in range(0, n, step):
        tx = np.outer(t, x[start:start + step])
        cos_tx = np.cos(tx)
        sin_tx = np.sin(tx)
        cos_sum += cos_tx.sum(axis=1)
        sin_sum += sin_tx.sum(axis=1)
        if variance:
            second[0] += (cos_tx * cos_tx).sum(axis=1)
            second[1] += (sin_tx * sin_tx).sum(axis=1)
            second[2] += (cos_tx * sin_tx).sum(axis=1)
    complex_values = (cos_sum + 1j * sin_sum) / n
    complex_values[t == 0] = 1.0
    re, im = complex_values.real, complex_values.imag
    mean_cc, mean_ss, mean_cs = second / n
    if symmetric:
        sym_values = re.copy()
        sym_variance = np.maximum(mean_cc - re * re, 0.0) / n
    else:
        sym_values = symmetrize_ecf(complex_values, n)
        # Hajek projection of the U-statistic: h1(x) = Re(conj(f) e^{itx}).
        h1_second = (re * re * mean_cc + 2 * re * im * mean_cs +
                     im * im * mean_ss)
        h1_mean = re * re + im * im
        sym_variance = 4 * np.maximum(h1_second - h1_mean * h1_mean, 0.0) / n
    if not variance:
        sym_variance = np.full(t.size, np.nan)
    return EmpiricalCF(
        grid=grid,
        complex_values=complex_values,
        sym_values=sym_values,
        sym_variance=sym_variance,
        n=n,
        symmetric=symmetric)


def symmetrize_ecf(complex_values, n):
    """Unbiased estimate of |f(t)|^2 from the ECF of n observations.

    Equals (1 / (n (n - 1))) * sum over i != j of cos(t (x_i - x_j)).

    Args:
        complex_values: ECF values.
        n: Sample size, >= 2.

    Returns:
        Real array.
    """
    n = _validate_integer(n, "n", minimum=2)
    values = np.asarray(complex_values)
    modulus2 = values.real * values.real + values.imag * values.imag
    return (n * modulus2 - 1) / (n - 1)


@dataclass(frozen=True)
class MomentSet:
    """Absolute moments a_r = (1/n) sum |x - c|^r of a sample.

    ``sigma2`` is a_2 about the same centre c, so the set describes one
    probability distribution (the empirical one) and Lyapunov's ordering
    holds up to rounding.
    """
    sigma2: float
    a4: float
    a5: float
    a10: float
    a_frac: dict = field(default_factory=dict)
    centered: bool = False

    @property
    def sigma(self):
        return math.sqrt(self.sigma2)

    def absolute(self, order):
        known = {2.0: self.sigma2, 4.0: self.a4, 5.0: self.a5, 10.0: self.a10}
        known.update({float(r): value for r, value in self.a_frac.items()})
        try:
            return known[float(order)]
        except KeyError:
            _error("Absolute moment of order {} was not estimated.".format(
                order))

    def lyapunov_ordered(self, rtol=_LYAPUNOV_RTOL):
        """Check that a_r^(1/r) is nondecreasing in r."""
        orders = sorted({2.0, 4.0, 5.0, 10.0} | {float(r)
                                                 for r in self.a_frac})
        norms = [self.absolute(r)**(1 / r) for r in orders]
        return all(later >= earlier * (1 - rtol)
                   for earlier, later in zip(norms, norms[1:]))


def abs_power(values, order):
    # |x|^r as exp(r log|x|), with 0^r = 0.
    magnitude = np.abs(np.asarray(values, dtype=float))
    positive = magnitude > 0
    out = np.zeros_like(magnitude)
    out[positive] = np.exp(order * np.log(magnitude[positive]))
    return out


def moments(sample, orders=(), centered=False):
    """Absolute moments of the sample.

    Orders 2, 4, 5 and 10 are always estimated; ``orders`` adds more,
    fractional ones included, reported in ``a_frac``.

    Args:
        sample: Sample with n >= 2.
        orders: Iterable of positive, finite orders.
        centered: Take moments about the sample mean instead of 0.

    Returns:
        MomentSet
    """
    sample.require(2)
    orders = [_validate_positive_real(r, "order") for r in orders]
    centre = sample.mean if centered else 0.0
    deviations = sample.values - centre

    def absolute(order):
        return float(np.mean(abs_power(deviations, order)))

    moment_set = MomentSet(
        sigma2=absolute(2.0),
        a4=absolute(4.0),
        a5=absolute(5.0),
        a10=absolute(10.0),
        a_frac={r: absolute(r)
                for r in orders},
        centered=centered)
    if not moment_set.lyapunov_ordered():
        logger.warning("Estimated moments violate Lyapunov's ordering "
                       "beyond rounding: %s", moment_set)
    return moment_set


def pairwise_difference_sample(sample, max_pairs, seed):
    """Differences x_i - x_j over distinct ordered pairs i != j.

    Draws min(max_pairs, n (n - 1)) pairs without replacement from all
    ordered pairs; with the full budget every ordered pair appears once.

    Args:
        sample: Sample with n >= 2.
        max_pairs: Integer >= 1.
        seed: Stream seed, see divisible.streams.

    Returns:
        Sample of differences.
    """
    sample.require(2)
    max_pairs = _validate_integer(max_pairs, "max_pairs", minimum=1)
    n = sample.n
    total = n * (n - 1)
    picks = make_stream(seed).choice(total, size=min(max_pairs, total),
                                     replace=False)
    first = picks // (n - 1)
    second = picks % (n - 1)
    second = second + (second >= first)
    x = sample.values
    return Sample(x[first] - x[second])


def _validate_positive_real(value, name):
    # Confirm value is a finite real number > 0.
    try:
        value = float(value)
    except (TypeError, ValueError):
        _error("Invalid {}: {}, should be a real number.".format(name, value))
    if not math.isfinite(value) or value <= 0:
        _error("Invalid {}: {}, should be finite and > 0.".format(
            name, value))
    return value
