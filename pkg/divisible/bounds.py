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
"""Characteristic-function bounds for divisible distributions.

Lower bounds hold for symmetric distributions on their validity interval:

    th1   cos(sigma t)                 support in [-A, A], |t| < 4.49 / A
    th1a  cos(sigma t)                 finite a_10, |t| <= th1a_radius
    th2   cos^m(sigma t / sqrt(m))     m-divisible, support in [-A, A]
    th2a  cos^m(sigma t / sqrt(m))     m-divisible, finite a_10 (heuristic)
    th3   exp(-sigma^2 t^2 / 2)        infinitely divisible, all t
    th4   f(t) >= f^4(t / 2)           infinitely divisible, all t

and one upper bound, th21: cos(a_{1/gamma}^gamma t) for support in [-A, A]
and |t| < pi / (2 A^gamma). The special functions they need (the root z0 of
sin z - z cos z, a Lanczos gamma function, the C_r constant of the
fractional-moment identity) live here too.
"""

import enum
import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .errors import _error, _validate_integer

logger = logging.getLogger(__name__)

# Rounded convexity threshold used by th1_lower, just below z0.
CONVEXITY_BOUND = 4.49
ROOT_RESIDUAL = 1e-12
QUAD_TOLERANCE = 1e-9
_SIGMA_SLACK = 1e-12

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_GAMMA_MAX = 10.0


class BoundKind(enum.Enum):
    TH1_LOWER = "th1"
    TH1A_LOWER = "th1a"
    TH2_LOWER = "th2"
    TH2A_LOWER = "th2a"
    TH3_LOWER = "th3"
    TH21_UPPER = "th21"


@dataclass(frozen=True)
class BoundCurve:
    """A bound t -> value asserted on a symmetric validity interval.

    Attributes:
        kind: Which inequality the curve belongs to.
        params: Named parameters of the curve (sigma, A, m, ...).
        validity: (t_lo, t_hi) with t_lo = -t_hi.
        closed: Whether the interval includes its endpoints.
        heuristic: The validity radius is not proven.
    """
    kind: BoundKind
    params: dict
    validity: tuple
    closed: bool = True
    heuristic: bool = False

    @property
    def upper(self):
        return self.kind is BoundKind.TH21_UPPER

    @property
    def radius(self):
        return self.validity[1]

    def evaluate(self, t):
        """Bound values at t; points outside validity are computed too."""
        t = np.asarray(t, dtype=float)
        params = self.params
        if self.kind in (BoundKind.TH1_LOWER, BoundKind.TH1A_LOWER):
            values = np.cos(params["sigma"] * t)
        elif self.kind in (BoundKind.TH2_LOWER, BoundKind.TH2A_LOWER):
            m = params["m"]
            values = signed_power(np.cos(params["sigma"] * t / math.sqrt(m)),
                                  m)
        elif self.kind is BoundKind.TH3_LOWER:
            values = np.exp(-params["sigma2"] * t * t / 2)
        else:
            values = np.cos(params["a_gamma"]**params["gamma"] * t)
        outside = np.count_nonzero(~self.in_validity(t))
        if outside:
            logger.debug("%s evaluated at %d points outside |t| %s %g",
                         self.kind.value, outside,
                         "<=" if self.closed else "<", self.radius)
        return values

    def in_validity(self, t):
        magnitude = np.abs(np.asarray(t, dtype=float))
        if self.closed:
            return magnitude <= self.radius
        return magnitude < self.radius

    def deficit(self, cf_values, t):
        """Signed violation: bound - CF for lower bounds, CF - bound for
        the upper bound. Positive values contradict the inequality."""
        values = self.evaluate(t)
        cf_values = np.asarray(cf_values, dtype=float)
        if self.upper:
            return cf_values - values
        return values - cf_values


@dataclass(frozen=True)
class RootResult:
    value: float
    residual: float
    iterations: int
    bracket: tuple = field(default=(math.pi, 1.5 * math.pi))


@dataclass(frozen=True)
class FractionalMoment:
    """E|Z|^r recovered from a CF, with an absolute error bound."""
    value: float
    uncertainty: float


def _z0_equation(z):
    return math.sin(z) - z * math.cos(z)


@functools.lru_cache(maxsize=None)
def root_z0():
    """First positive root of sin z - z cos z = 0.

    The function is pi at z = pi and -1 at z = 3 pi / 2, and tan z = z has
    no root in (0, pi), so Brent's method on that bracket finds z0.

    Returns:
        RootResult
    """
    lo, hi = math.pi, 1.5 * math.pi
    value, info = optimize.brentq(_z0_equation,
                                  lo,
                                  hi,
                                  xtol=1e-15,
                                  rtol=4 * np.finfo(float).eps,
                                  full_output=True)
    residual = _z0_equation(value)
    if not info.converged or abs(residual) > ROOT_RESIDUAL:
        _error("Root of sin z - z cos z did not converge: residual {}".format(
            residual), "NumericFailure")
    return RootResult(value=value,
                      residual=residual,
                      iterations=info.iterations,
                      bracket=(lo, hi))


def th1_lower(sigma, A, sharp=False):
    """cos(sigma t) <= g(t) for a symmetric law on [-A, A].

    Args:
        sigma: Standard deviation, 0 < sigma <= A.
        A: Support radius.
        sharp: Use z0 / A instead of 4.49 / A as the validity radius.

    Returns:
        BoundCurve
    """
    sigma = _validate_positive(sigma, "sigma")
    A = _validate_positive(A, "A")
    _validate_sigma_within_support(sigma, A)
    constant = root_z0().value if sharp else CONVEXITY_BOUND
    radius = constant / A
    return BoundCurve(BoundKind.TH1_LOWER, {
        "sigma": sigma,
        "A": A,
        "constant": constant
    }, (-radius, radius),
                      closed=False)


def th1a_radius(moments):
    """Radius 5 (a4 - sigma^4) / (sigma^10 + 2 sigma^5 a5 + a10)^(1/2).

    Returns 0, with a warning, when a4 <= sigma^4 (two-point laws and
    estimation noise).
    """
    sigma2 = _validate_finite(moments.sigma2, "sigma2")
    a4 = _validate_finite(moments.a4, "a4")
    a5 = _validate_finite(moments.a5, "a5")
    a10 = _validate_finite(moments.a10, "a10")
    if sigma2 <= 0:
        _error("Invalid sigma2: {}, should be > 0.".format(sigma2))
    sigma = math.sqrt(sigma2)
    excess = a4 - sigma2 * sigma2
    if excess <= 0:
        if excess < 0:
            logger.warning("a4 = %g is below sigma^4 = %g; th1a radius "
                           "clamped to 0", a4, sigma2 * sigma2)
        return 0.0
    spread = math.sqrt(sigma**10 + 2 * sigma**5 * a5 + a10)
    return 5 * excess / spread


def th1a_lower(moments):
    """cos(sigma t) <= g(t) on |t| <= th1a_radius(moments)."""
    radius = th1a_radius(moments)
    return BoundCurve(BoundKind.TH1A_LOWER, {
        "sigma": moments.sigma,
        "a4": moments.a4,
        "a5": moments.a5,
        "a10": moments.a10
    }, (-radius, radius))


def th1a_envelope(moments, t):
    """Lower envelope (t^4 / 24) ((a4 - sigma^4) - S |t| / 5) of
    g(t) - cos(sigma t), S = (sigma^10 + 2 sigma^5 a5 + a10)^(1/2).

    Diagnostic only; positive exactly inside th1a_radius.
    """
    t = np.asarray(t, dtype=float)
    sigma = moments.sigma
    spread = math.sqrt(sigma**10 + 2 * sigma**5 * moments.a5 + moments.a10)
    excess = moments.a4 - moments.sigma2**2
    return t**4 / 24 * (excess - spread * np.abs(t) / 5)


def th2_lower(sigma, A, m):
    """cos^m(sigma t / sqrt(m)) <= f(t) for an m-divisible law on [-A, A],
    for |t| <= min(4.49 m / A, pi sqrt(m) / (2 sigma))."""
    sigma = _validate_positive(sigma, "sigma")
    A = _validate_positive(A, "A")
    m = _validate_order(m)
    _validate_sigma_within_support(sigma, A)
    radius = min(CONVEXITY_BOUND * m / A, math.pi * math.sqrt(m) / (2 * sigma))
    return BoundCurve(BoundKind.TH2_LOWER, {
        "sigma": sigma,
        "A": A,
        "m": m
    }, (-radius, radius))


def th2a_lower(moments, m):
    """cos^m(sigma t / sqrt(m)) <= f(t) for an m-divisible law with finite
    a_10.

    The radius min(sqrt(m) * th1a_radius(moments / m), pi sqrt(m) /
    (2 sigma)) scales every moment by 1 / m, the large-m behaviour of the
    moments of f^(1/m). Its validity at finite m is not proven, so the curve
    is flagged heuristic.
    """
    m = _validate_order(m)
    scaled = type(moments)(sigma2=moments.sigma2 / m,
                           a4=moments.a4 / m,
                           a5=moments.a5 / m,
                           a10=moments.a10 / m)
    sigma = moments.sigma
    radius = min(
        math.sqrt(m) * th1a_radius(scaled),
        math.pi * math.sqrt(m) / (2 * sigma))
    logger.warning("th2a radius %g for m = %d is heuristic", radius, m)
    return BoundCurve(BoundKind.TH2A_LOWER, {
        "sigma": sigma,
        "m": m
    }, (-radius, radius),
                      heuristic=True)


def th3_lower(sigma2):
    """exp(-sigma^2 t^2 / 2) <= f(t) for all t, f infinitely divisible."""
    sigma2 = _validate_finite(sigma2, "sigma2")
    if sigma2 < 0:
        _error("Invalid sigma2: {}, should be >= 0.".format(sigma2))
    return BoundCurve(BoundKind.TH3_LOWER, {"sigma2": sigma2},
                      (-math.inf, math.inf))


def th4_deficit(f_t, f_half_t):
    """f(t/2)^4 - f(t); positive values violate f(t) >= f^4(t/2).

    Inputs are clamped to [-1, 1]. Scalars in, float out; arrays in,
    arrays out.
    """
    f_t = np.clip(np.asarray(f_t, dtype=float), -1.0, 1.0)
    f_half_t = np.clip(np.asarray(f_half_t, dtype=float), -1.0, 1.0)
    deficit = f_half_t**4 - f_t
    if deficit.ndim == 0:
        return float(deficit)
    return deficit


def iterate_th4(f, t, k):
    """f(t / 2^k)^(4^k), computed as exp(4^k log f(t / 2^k)).

    Nonincreasing in k for infinitely divisible f, with limit
    exp(-sigma^2 t^2 / 2).

    Args:
        f: CF evaluator.
        t: Real t.
        k: Integer >= 0.

    Raises:
        UndefinedIterateError: f(t / 2^k) <= 0.
    """
    k = _validate_integer(k, "k")
    base = float(f(t / 2**k))
    if k == 0:
        return base
    return log_power(base, 4**k)


def th21_upper(a_gamma, gamma, A):
    """g(t) <= cos(a_{1/gamma}^gamma t) for |t| < pi / (2 A^gamma).

    Args:
        a_gamma: Absolute moment of order 1 / gamma, at most A^(1/gamma).
        gamma: Exponent > 1.
        A: Support radius.
    """
    a_gamma = _validate_positive(a_gamma, "a_gamma")
    gamma = _validate_finite(gamma, "gamma")
    if gamma <= 1:
        _error("Invalid gamma: {}, should be > 1.".format(gamma))
    A = _validate_positive(A, "A")
    if a_gamma > A**(1 / gamma) * (1 + _SIGMA_SLACK):
        _error("a_gamma = {} exceeds A^(1/gamma) = {}: not a moment of a law "
               "on [-A, A].".format(a_gamma, A**(1 / gamma)))
    radius = math.pi / (2 * A**gamma)
    return BoundCurve(BoundKind.TH21_UPPER, {
        "a_gamma": a_gamma,
        "gamma": gamma,
        "A": A
    }, (-radius, radius),
                      closed=False)


def gaussian_abs_moment(sigma, r):
    """E|Y|^r = 2^(r/2) sigma^r Gamma((1 + r) / 2) / sqrt(pi), Y ~ N(0,
    sigma^2), for 0 < r < 2."""
    sigma = _validate_finite(sigma, "sigma")
    if sigma < 0:
        _error("Invalid sigma: {}, should be >= 0.".format(sigma))
    r = _validate_fractional_order(r)
    return 2**(r / 2) * sigma**r * gamma_fn((1 + r) / 2) / math.sqrt(math.pi)


def gamma_fn(x):
    """Gamma function on (0, 10] by the Lanczos approximation."""
    x = _validate_finite(x, "x")
    if x <= 0 or x > _GAMMA_MAX:
        _error("Invalid x: {}, gamma_fn is defined on (0, {}].".format(
            x, _GAMMA_MAX))
    if x < 0.5:
        # Reflection formula.
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1 - x))
    z = x - 1
    series = _LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t**(z + 0.5) * math.exp(-t) * series


@functools.lru_cache(maxsize=None)
def cr_constant(r):
    """C_r = 1 / integral_0^inf (1 - cos u) / u^(1 + r) du, 0 < r < 2.

    With it E|Z|^r = C_r integral_0^inf (1 - Re h(t)) / t^(1 + r) dt for a
    CF h. On (0, 1] the integrand is 2 sin^2(u/2) / u^2 times the
    algebraic weight u^(1 - r); on (1, inf) the 1 contributes 1 / r and
    the cosine part is a Fourier integral.
    """
    r = _validate_fractional_order(r)
    head, head_error = _quad(lambda u: 0.5 * np.sinc(u / (2 * math.pi))**2,
                             0.0,
                             1.0,
                             weight="alg",
                             wvar=(1 - r, 0.0))
    oscillating, tail_error = _quad(lambda u: u**(-1 - r),
                                    1.0,
                                    math.inf,
                                    weight="cos",
                                    wvar=1.0)
    return 1 / (head + 1 / r - oscillating)


def fractional_moment_via_cf(h, r, t_max, tol=1e-6, scale=1.0):
    """E|Z|^r from the real CF h of a symmetric Z.

    The integral of (1 - h(t)) / t^(1 + r) is split into (0, t0], where
    1 - h(t) = c t^2 + O(t^4), quadrature pieces up to t_max, and the exact
    tail t_max^-r / r of the constant 1. The omitted tail of h is bounded
    by t_max^-r / r and reported in the uncertainty with the quadrature
    error.

    Args:
        h: CF evaluator, h(0) = 1, real for symmetric laws.
        r: Order in (0, 2).
        t_max: Truncation point.
        tol: Maximum quadrature error accepted per piece.
        scale: Spread of Z, sets the piece lengths (t in units of 1/scale).

    Returns:
        FractionalMoment

    Raises:
        NumericFailureError: A quadrature piece did not converge to tol.
    """
    r = _validate_fractional_order(r)
    t_max = _validate_positive(t_max, "t_max")
    tol = _validate_positive(tol, "tol")
    scale = _validate_positive(scale, "scale")
    if abs(float(np.real(h(0.0))) - 1) > 1e-12:
        _error("h(0) should be 1, got {}.".format(h(0.0)))

    def integrand(t):
        return (1 - float(np.real(h(t)))) / t**(1 + r)

    t0 = min(1e-4 / scale, t_max)
    curvature = (1 - float(np.real(h(t0)))) / t0**2
    total = curvature * t0**(2 - r) / (2 - r)
    error = 0.0
    for a, b in _pieces(t0, t_max, scale):
        value, piece_error = _quad(integrand, a, b, tolerance=tol, limit=200)
        total += value
        error += piece_error
    tail = t_max**(-r) / r
    c_r = cr_constant(r)
    return FractionalMoment(value=c_r * (total + tail),
                            uncertainty=c_r * (error + tail))


def signed_power(base, m):
    """base^m for integer m in log space; m == 1 returns base unchanged."""
    base = np.asarray(base, dtype=float)
    if m == 1:
        return base
    magnitude = np.abs(base)
    out = np.zeros_like(magnitude)
    positive = magnitude > 0
    out[positive] = np.exp(m * np.log(magnitude[positive]))
    if m % 2:
        out = np.where(base < 0, -out, out)
    return out


def log_power(base, exponent):
    """exp(exponent * log(base)) for a positive scalar base."""
    if not base > 0:
        _error("Cannot raise {} to the power {} in log space.".format(
            base, exponent), "UndefinedIterate")
    return math.exp(exponent * math.log(base))


def _pieces(t0, t_max, scale):
    # Geometric pieces up to 1 / scale, then pieces of 8 pi / scale.
    edges = [t0]
    knee = min(1 / scale, t_max)
    while edges[-1] * 2 < knee:
        edges.append(edges[-1] * 2)
    if edges[-1] < knee:
        edges.append(knee)
    step = 8 * math.pi / scale
    count = math.ceil((t_max - edges[-1]) / step)
    if count > 0:
        edges.extend(np.linspace(edges[-1], t_max, count + 1)[1:])
    return zip(edges[:-1], edges[1:])


def _quad(f, a, b, tolerance=QUAD_TOLERANCE, limit=100, **kwargs):
    # scipy.integrate.quad with a hard failure when the error estimate
    # stays above tolerance.
    result = integrate.quad(f,
                            a,
                            b,
                            epsabs=min(tolerance, QUAD_TOLERANCE) * 1e-2,
                            epsrel=1e-10,
                            limit=limit,
                            full_output=1,
                            **kwargs)
    value, error = result[0], result[1]
    if len(result) > 3 and error > tolerance:
        _error("Quadrature on [{}, {}] failed: {} (error estimate {})".format(
            a, b, result[3], error), "NumericFailure")
    return value, error


def _validate_finite(value, name):
    # Confirm value is a finite real number.
    try:
        value = float(value)
    except (TypeError, ValueError):
        _error("Invalid {}: {}, should be a real number.".format(name, value))
    if not math.isfinite(value):
        _error("Invalid {}: {}, should be finite.".format(name, value))
    return value


def _validate_positive(value, name):
    value = _validate_finite(value, name)
    if value <= 0:
        _error("Invalid {}: {}, should be > 0.".format(name, value))
    return value


def _validate_sigma_within_support(sigma, A):
    # A law on [-A, A] has sigma <= A.
    if sigma > A * (1 + _SIGMA_SLACK):
        _error("sigma = {} exceeds the support radius A = {}.".format(
            sigma, A))


def _validate_fractional_order(r):
    r = _validate_finite(r, "r")
    if not 0 < r < 2:
        _error("Invalid r: {}, should lie in (0, 2).".format(r))
    return r


def _validate_order(m):
    return _validate_integer(m, "m", 1)
