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
"""Reference distributions with known characteristic functions.

Every entry is symmetric about 0, so its CF is real and even. The registry
names are the identifiers the command line accepts.

    gaussian     N(0, sigma^2)                    infinitely divisible
    sympoisson   N - N', N, N' ~ Poisson(lam)     infinitely divisible
    laplace      Laplace(0, b)                    infinitely divisible
    uniform      Uniform[-A, A]                   not infinitely divisible
    rademacher   +-a with probability 1/2         not infinitely divisible
    binomsym     sum of m Rademachers +-a         m-divisible
    triangular   triangular on [-A, A]            not infinitely divisible
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special, stats

from .cf_core import MomentSet, Sample
from .errors import _error, _validate_integer
from .streams import make_stream

# Poisson draws use inversion up to this mean.
_INVERSION_LIMIT = 30.0


class Divisibility(enum.Enum):
    INFINITELY_DIVISIBLE = "infinitely_divisible"
    M_DIVISIBLE = "m_divisible"
    NOT_ID = "not_id"


@dataclass(frozen=True)
class RefDist:
    """A registry entry.

    Attributes:
        name: Registry identifier.
        params: Distribution parameters.
        cf: Analytic CF, array of t to array of reals.
        sigma2: Population variance.
        support_radius: A with support in [-A, A], None when unbounded.
        divisibility: Divisibility tag.
        m: Order of divisibility for M_DIVISIBLE entries.
        sampler: Draws n values from a numpy Generator.
        abs_moment: Analytic E|X|^r for r > 0.
        sym_abs_moment: Analytic E|X - X'|^r for r > 0, X' an independent
            copy.
    """
    name: str
    params: dict
    cf: Callable = field(compare=False, repr=False)
    sigma2: float
    support_radius: Optional[float]
    divisibility: Divisibility
    m: Optional[int] = None
    sampler: Callable = field(default=None, compare=False, repr=False)
    abs_moment: Callable = field(default=None, compare=False, repr=False)
    sym_abs_moment: Callable = field(default=None,
                                     compare=False,
                                     repr=False)

    @property
    def sigma(self):
        return math.sqrt(self.sigma2)

    @property
    def infinitely_divisible(self):
        return self.divisibility is Divisibility.INFINITELY_DIVISIBLE

    def moment_set(self, orders=()):
        """Population absolute moments as a MomentSet."""
        return MomentSet(sigma2=self.sigma2,
                         a4=self.abs_moment(4.0),
                         a5=self.abs_moment(5.0),
                         a10=self.abs_moment(10.0),
                         a_frac={r: self.abs_moment(r)
                                 for r in orders})


def _gaussian(sigma=1.0):
    sigma = _validate_parameter(sigma, "sigma")

    def sampler(rng, n):
        # Box-Muller, cosine branch.
        radius = np.sqrt(-2 * np.log1p(-rng.random(n)))
        return sigma * radius * np.cos(2 * np.pi * rng.random(n))

    return RefDist(
        name="gaussian",
        params={"sigma": sigma},
        cf=lambda t: np.exp(-sigma**2 * np.square(t) / 2),
        sigma2=sigma**2,
        support_radius=None,
        divisibility=Divisibility.INFINITELY_DIVISIBLE,
        sampler=sampler,
        abs_moment=lambda r: _gaussian_moment(sigma, r),
        sym_abs_moment=lambda r: _gaussian_moment(math.sqrt(2) * sigma, r))


def _sympoisson(lam=1.0):
    lam = _validate_parameter(lam, "lam")

    def sampler(rng, n):
        return _poisson(rng, lam, n) - _poisson(rng, lam, n)

    return RefDist(
        name="sympoisson",
        params={"lam": lam},
        # exp(2 lam (cos t - 1)) without the cancellation near t = 0.
        cf=lambda t: np.exp(-4 * lam * np.sin(np.asarray(t) / 2)**2),
        sigma2=2 * lam,
        support_radius=None,
        divisibility=Divisibility.INFINITELY_DIVISIBLE,
        sampler=sampler,
        abs_moment=lambda r: _skellam_moment(lam, r),
        sym_abs_moment=lambda r: _skellam_moment(2 * lam, r))


def _laplace(b=1.0):
    b = _validate_parameter(b, "b")

    def sampler(rng, n):
        magnitude = -np.log1p(-rng.random(n))
        sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return b * sign * magnitude

    return RefDist(name="laplace",
                   params={"b": b},
                   cf=lambda t: 1 / (1 + b**2 * np.square(t)),
                   sigma2=2 * b**2,
                   support_radius=None,
                   divisibility=Divisibility.INFINITELY_DIVISIBLE,
                   sampler=sampler,
                   abs_moment=lambda r: b**r * special.gamma(r + 1),
                   sym_abs_moment=lambda r: (b**r * special.gamma(r + 1) *
                                             (r + 2) / 2))


def _uniform(A=1.0):
    A = _validate_parameter(A, "A")
    return RefDist(name="uniform",
                   params={"A": A},
                   cf=lambda t: np.sinc(A * np.asarray(t) / np.pi),
                   sigma2=A**2 / 3,
                   support_radius=A,
                   divisibility=Divisibility.NOT_ID,
                   sampler=lambda rng, n: A * (2 * rng.random(n) - 1),
                   abs_moment=lambda r: A**r / (r + 1),
                   sym_abs_moment=lambda r: 2 * (2 * A)**r / (
                       (r + 1) * (r + 2)))


def _rademacher(a=1.0):
    a = _validate_parameter(a, "a")
    return RefDist(
        name="rademacher",
        params={"a": a},
        cf=lambda t: np.cos(a * np.asarray(t)),
        sigma2=a**2,
        support_radius=a,
        divisibility=Divisibility.NOT_ID,
        sampler=lambda rng, n: np.where(rng.random(n) < 0.5, -a, a),
        abs_moment=lambda r: a**r,
        sym_abs_moment=lambda r: (2 * a)**r / 2)


def _binomsym(m=3, a=1.0):
    a = _validate_parameter(a, "a")
    m = _validate_integer(m, "m", 1)

    def sampler(rng, n):
        heads = np.count_nonzero(rng.random((n, m)) < 0.5, axis=1)
        return a * (2 * heads - m).astype(float)

    return RefDist(name="binomsym",
                   params={
                       "m": m,
                       "a": a
                   },
                   cf=lambda t: np.cos(a * np.asarray(t))**m,
                   sigma2=m * a**2,
                   support_radius=m * a,
                   divisibility=Divisibility.M_DIVISIBLE,
                   m=m,
                   sampler=sampler,
                   abs_moment=lambda r: _binom_moment(m, a, r),
                   sym_abs_moment=lambda r: _binom_moment(2 * m, a, r))


def _triangular(A=1.0):
    A = _validate_parameter(A, "A")

    def sampler(rng, n):
        # Sum of two independent Uniform[-A/2, A/2].
        return A / 2 * (2 * rng.random(n) - 1 + 2 * rng.random(n) - 1)

    return RefDist(
        name="triangular",
        params={"A": A},
        cf=lambda t: np.sinc(A * np.asarray(t) / (2 * np.pi))**2,
        sigma2=A**2 / 6,
        support_radius=A,
        divisibility=Divisibility.NOT_ID,
        sampler=sampler,
        abs_moment=lambda r: 2 * A**r / ((r + 1) * (r + 2)),
        sym_abs_moment=lambda r: A**r * _four_uniform_moment(r))


_BUILDERS = {
    "gaussian": _gaussian,
    "sympoisson": _sympoisson,
    "laplace": _laplace,
    "uniform": _uniform,
    "rademacher": _rademacher,
    "binomsym": _binomsym,
    "triangular": _triangular,
}
NAMES = tuple(_BUILDERS)


def registry():
    """Every reference distribution with its default parameters."""
    return [builder() for builder in _BUILDERS.values()]


def get_dist(name, **params):
    """Build the registry entry ``name`` with non-default parameters.

    Args:
        name: One of NAMES.
        params: Keyword parameters of that entry (sigma, lam, b, A, a, m).

    Returns:
        RefDist
    """
    try:
        builder = _BUILDERS[str(name).lower()]
    except KeyError:
        _error("Unknown distribution: '{}', expected one of {}.".format(
            name, ", ".join(NAMES)))
    try:
        return builder(**params)
    except TypeError:
        _error("Invalid parameters for {}: {}.".format(name, params))


def sample(dist, n, seed):
    """n i.i.d. draws from dist, deterministic given (dist, n, seed)."""
    n = _validate_integer(n, "n", 1)
    return Sample(dist.sampler(make_stream(seed), n))


def cf_eval(dist, grid):
    """Analytic CF of dist on the grid points."""
    return np.asarray(dist.cf(grid.points), dtype=float)


def _gaussian_moment(sigma, r):
    return (2**(r / 2) * sigma**r * special.gamma((1 + r) / 2) /
            math.sqrt(math.pi))


def _skellam_moment(lam, r):
    # E|K|^r for K = P1 - P2, P1 and P2 independent Poisson(lam).
    reach = int(math.ceil(2 * lam + 40 * math.sqrt(lam) + 40))
    k = np.arange(1, reach + 1)
    return float(2 * np.sum(stats.skellam.pmf(k, lam, lam) * k**r))


def _binom_moment(m, a, r):
    # E|a (2K - m)|^r for K ~ Binomial(m, 1/2).
    k = np.arange(m + 1)
    weights = stats.binom.pmf(k, m, 0.5)
    return float(np.sum(weights * np.abs(a * (2 * k - m))**r))


def _four_uniform_moment(r):
    # E|S|^r for S the sum of four Uniform[-1/2, 1/2]; the density of S is
    # the Irwin-Hall spline (1/6) sum_k (-1)^k C(4, k) (s + 2 - k)_+^3.
    total = 0.0
    for k in range(4):
        c = 2 - k
        low = max(0, k - 2)
        for j in range(4):
            power = r + j + 1
            total += ((-1)**k * special.comb(4, k) * special.comb(3, j) *
                      c**(3 - j) * (2**power - low**power) / power)
    return 2 / 6 * total


def _poisson(rng, lam, n):
    # Inversion: count the CDF steps below a uniform draw.
    if lam > _INVERSION_LIMIT:
        return rng.poisson(lam, n).astype(float)
    u = rng.random(n)
    counts = np.zeros(n)
    probability = math.exp(-lam)
    cdf = probability
    active = u > cdf
    k = 0
    limit = lam + 20 * math.sqrt(lam) + 30
    while np.any(active) and k < limit:
        k += 1
        probability *= lam / k
        cdf += probability
        counts[active] += 1
        active &= u > cdf
    return counts


def _validate_parameter(value, name):
    # Confirm a scale parameter is finite and > 0.
    try:
        value = float(value)
    except (TypeError, ValueError):
        _error("Invalid {}: {}, should be a real number.".format(name, value))
    if not math.isfinite(value) or value <= 0:
        _error("Invalid {}: {}, should be finite and > 0.".format(
            name, value))
    return value
