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
"""Bootstrap test of infinite divisibility.

Three deficit statistics measure how far a sample breaks a necessary
condition every infinitely divisible law satisfies:

    T3    max_t (exp(-sigma^2 t^2 / 2) - h(t))+
    T4    max_t (h(t/2)^4 - h(t))+, h(t/2) clamped to [0, 1]
    TMOM  (E|D|^r - E|Y|^r)+, D a pairwise difference, Y Gaussian

h is the symmetrized ECF (the CF of X - X'), or Re f with
``symmetric=True``. Each statistic is calibrated by a recentered
nonparametric bootstrap and the decision combines them with Bonferroni.
Rejection is conclusive against infinite divisibility; no rejection is not
evidence for it.

With ``m_hypothesis`` set, T2 = max_t (cos^m(sigma t / sqrt(m)) - h(t))+ on
the m-divisible validity interval gets its own decision, outside the
Bonferroni family.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from . import refdist
from .bounds import (CONVEXITY_BOUND, BoundCurve, BoundKind,
                     gaussian_abs_moment, th3_lower, th4_deficit)
from .cf_core import (Sample, abs_power, dyadic_grid, dyadic_pairs, ecf,
                      pairwise_difference_sample)
from .errors import _error, _validate_integer
from .streams import make_stream, normalize_seed

logger = logging.getLogger(__name__)

T3 = "T3"
T4 = "T4"
TMOM = "TMOM"
T2 = "T2"
ID_STATISTICS = (T3, T4, TMOM)
COMBINED = "COMBINED"

REJECT_ID = "REJECT_ID"
NO_EVIDENCE_AGAINST_ID = "NO_EVIDENCE_AGAINST_ID"
REJECT_M_DIVISIBLE = "REJECT_M_DIVISIBLE"
NO_EVIDENCE_AGAINST_M_DIVISIBLE = "NO_EVIDENCE_AGAINST_M_DIVISIBLE"

SCHEMA_VERSION = 1
DEFAULT_SEED = 42

# Deficits at or below this are rounding, not violations.
DEFICIT_TOLERANCE = 1e-12
# Automatic grid: t_max = _GRID_SPAN / sigma_sym.
_GRID_SPAN = 8.0
# Stream purposes, appended after the replicate index.
_RESAMPLE = 0
_PAIRS = 1


class StatResult(NamedTuple):
    value: float
    argmax_t: Optional[float]
    deficits: np.ndarray


class TestConfig:
    """Validated settings of one test run.

    Attributes:
        t_max: Grid end, or None for 8 / sigma_sym of the sample.
        grid_points: Positive grid points, a power of two.
        statistics: Enabled subset of T3, T4, TMOM.
        r_order: Moment order of TMOM, in (0, 2).
        bootstrap_B: Bootstrap replicates, >= 99.
        alpha: Level, in (0, 1).
        seed: Integer or tuple of integers.
        m_hypothesis: Order m of the optional m-divisibility check.
        symmetric: Trust the sample as symmetric, skip symmetrization.
        support_radius: Known A for the m-divisibility check.
        max_pairs: Pairwise differences drawn for TMOM.
        threads: Worker threads; results do not depend on it.
    """

    __test__ = False

    def __init__(self,
                 t_max=None,
                 grid_points=256,
                 statistics=(T3, T4),
                 r_order=1.0,
                 bootstrap_B=199,
                 alpha=0.05,
                 seed=DEFAULT_SEED,
                 m_hypothesis=None,
                 symmetric=False,
                 support_radius=None,
                 max_pairs=20000,
                 threads=1):
        self.t_max = self._validate_optional_positive(t_max, "t_max")
        self.grid_points = self._validate_grid_points(grid_points)
        self.statistics = self._validate_statistics(statistics)
        self.r_order = self._validate_r_order(r_order)
        self.bootstrap_B = self._validate_integer(bootstrap_B, "bootstrap_B",
                                                  99)
        self.alpha = self._validate_alpha(alpha)
        self.seed = normalize_seed(seed)
        self.m_hypothesis = (None if m_hypothesis is None else
                             self._validate_integer(m_hypothesis,
                                                    "m_hypothesis", 1))
        self.symmetric = bool(symmetric)
        self.support_radius = self._validate_optional_positive(
            support_radius, "support_radius")
        self.max_pairs = self._validate_integer(max_pairs, "max_pairs", 1)
        self.threads = self._validate_integer(threads, "threads", 1)

    def to_dict(self):
        return {
            "t_max": self.t_max,
            "grid_points": self.grid_points,
            "statistics": list(self.statistics),
            "r_order": self.r_order,
            "bootstrap_B": self.bootstrap_B,
            "alpha": self.alpha,
            "seed": list(self.seed),
            "m_hypothesis": self.m_hypothesis,
            "symmetric": self.symmetric,
            "support_radius": self.support_radius,
            "max_pairs": self.max_pairs,
            "threads": self.threads,
        }

    def echo(self):
        """to_dict() without threads; the config echoed into reports."""
        values = self.to_dict()
        del values["threads"]
        return values

    @classmethod
    def from_dict(cls, values):
        return cls(**values)

    def replace(self, **changes):
        """Copy with some fields changed."""
        values = self.to_dict()
        values.update(changes)
        return type(self).from_dict(values)

    def __eq__(self, other):
        if not isinstance(other, TestConfig):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return "TestConfig({})".format(", ".join(
            "{}={!r}".format(key, value)
            for key, value in self.to_dict().items()))

    def _validate_optional_positive(self, value, name):
        if value is None:
            return None
        try:
            value = float(value)
        except (TypeError, ValueError):
            _error("Invalid {}: {}, should be a real number.".format(
                name, value))
        if not math.isfinite(value) or value <= 0:
            _error("Invalid {}: {}, should be finite and > 0.".format(
                name, value))
        return value

    def _validate_integer(self, value, name, minimum):
        return _validate_integer(value, name, minimum)

    def _validate_grid_points(self, grid_points):
        grid_points = self._validate_integer(grid_points, "grid_points", 2)
        if grid_points & (grid_points - 1):
            _error("Invalid grid_points: {}, should be a power of two.".format(
                grid_points))
        return grid_points

    def _validate_statistics(self, statistics):
        if isinstance(statistics, str):
            statistics = statistics.split(",")
        names = []
        for name in statistics:
            name = str(name).strip().upper()
            if name not in ID_STATISTICS:
                _error("Invalid statistic: '{}', expected one of {}.".format(
                    name, ", ".join(ID_STATISTICS)))
            if name not in names:
                names.append(name)
        if not names:
            _error("At least one statistic must be enabled.")
        # Canonical order keeps reports identical for any flag order.
        return tuple(name for name in ID_STATISTICS if name in names)

    def _validate_r_order(self, r_order):
        try:
            r_order = float(r_order)
        except (TypeError, ValueError):
            _error("Invalid r_order: {}, should be a real number.".format(
                r_order))
        if not 0 < r_order < 2:
            _error("Invalid r_order: {}, should be in (0, 2).".format(r_order))
        return r_order

    def _validate_alpha(self, alpha):
        try:
            alpha = float(alpha)
        except (TypeError, ValueError):
            _error("Invalid alpha: {}, should be a real number.".format(alpha))
        if not 0 < alpha < 1:
            _error("Invalid alpha: {}, should be in (0, 1).".format(alpha))
        return alpha


@dataclass
class StatisticReport:
    """Outcome of one statistic."""
    name: str
    value: float
    p_value: float
    critical_value: float
    adjusted_p_value: float
    argmax_t: Optional[float]
    deficits: list


@dataclass
class TestReport:
    """Everything run_test found, serializable with to_dict().

    ``decision`` is REJECT_ID iff the smallest Bonferroni-adjusted p-value
    is below alpha. ``m_decision`` is set only with an m hypothesis.
    """
    __test__ = False

    n: int
    sigma2_sym: float
    grid: list
    statistics: dict
    decision: str
    config: dict
    m_statistic: Optional[StatisticReport] = None
    m_decision: Optional[str] = None
    warnings: list = field(default_factory=list)

    @property
    def rejected(self):
        return self.decision == REJECT_ID

    def to_dict(self):
        report = {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "sigma2_sym": self.sigma2_sym,
            "grid": list(self.grid),
            "statistics": {
                name: vars(result).copy()
                for name, result in self.statistics.items()
            },
            "decision": self.decision,
            "config": dict(self.config),
            "m_statistic": (None if self.m_statistic is None else vars(
                self.m_statistic).copy()),
            "m_decision": self.m_decision,
            "warnings": list(self.warnings),
        }
        return report

    @classmethod
    def from_dict(cls, report):
        schema = report.get("schema")
        if schema != SCHEMA_VERSION:
            _error("Unsupported report schema: {}.".format(schema), "Data")
        try:
            m_statistic = report.get("m_statistic")
            return cls(
                n=report["n"],
                sigma2_sym=report["sigma2_sym"],
                grid=list(report["grid"]),
                statistics={
                    name: StatisticReport(**values)
                    for name, values in report["statistics"].items()
                },
                decision=report["decision"],
                config=dict(report["config"]),
                m_statistic=(None if m_statistic is None else
                             StatisticReport(**m_statistic)),
                m_decision=report.get("m_decision"),
                warnings=list(report.get("warnings", [])))
        except (KeyError, TypeError) as exc:
            _error("Malformed report: {}".format(exc), "Data")


def stat_t3(ecf_values, sigma2_sym):
    """Gaussian-envelope deficit max_t (exp(-sigma2 t^2 / 2) - h(t))+.

    Args:
        ecf_values: EmpiricalCF; its sym_values are h.
        sigma2_sym: Variance of the law h belongs to.

    Returns:
        StatResult with the signed deficit at every grid point.
    """
    t = ecf_values.grid.points
    deficits = th3_lower(sigma2_sym).deficit(ecf_values.sym_values, t)
    return _sup_statistic(deficits, t)


def stat_t4(ecf_values, pairs=None):
    """Halving deficit max_t (h(t/2)^4 - h(t))+ over grid points whose half
    is also a grid point. Other points carry NaN deficits.

    Args:
        ecf_values: EmpiricalCF.
        pairs: dyadic_pairs of its grid, computed when omitted.

    Raises:
        InvalidArgumentError: The grid has no dyadic pair.
    """
    t = ecf_values.grid.points
    if pairs is None:
        pairs = dyadic_pairs(ecf_values.grid)
    return _sup_statistic(_t4_deficits(ecf_values.sym_values, pairs), t)


def stat_tmom(sample, r, max_pairs=20000, seed=DEFAULT_SEED):
    """Moment deficit (E|D|^r - gaussian_abs_moment(sigma_D, r))+ over
    pairwise differences D = X_i - X_j, sigma_D their RMS.

    Args:
        sample: Sample with n >= 2.
        r: Order in (0, 2).
        max_pairs: Differences drawn, see pairwise_difference_sample.
        seed: Stream seed for the pair draw.

    Returns:
        Nonnegative float.
    """
    if not 0 < r < 2:
        _error("Invalid r: {}, should be in (0, 2).".format(r))
    deficit = _tmom_deficit(sample, r, max_pairs, seed)
    return deficit if deficit > DEFICIT_TOLERANCE else 0.0


def stat_t2(ecf_values, sigma, m, radius):
    """m-divisible deficit max (cos^m(sigma t / sqrt(m)) - h(t))+ over
    |t| <= radius. Points outside carry NaN deficits."""
    t = ecf_values.grid.points
    curve = _t2_curve(sigma, m, radius)
    deficits = curve.deficit(ecf_values.sym_values, t)
    deficits[~curve.in_validity(t)] = np.nan
    return _sup_statistic(deficits, t)


def bootstrap_pvalue(sample, statistic, config):
    """Recentered bootstrap p-value of one statistic.

    Args:
        sample: Sample with n >= 2.
        statistic: T3, T4 or TMOM.
        config: TestConfig; its grid, seed, B and threads are used.

    Returns:
        (p_value, critical_value, boot_values)
    """
    statistic = str(statistic).upper()
    if statistic not in ID_STATISTICS:
        _error("Invalid statistic: '{}', expected one of {}.".format(
            statistic, ", ".join(ID_STATISTICS)))
    plan = _plan(sample, config.replace(statistics=[statistic],
                                        m_hypothesis=None))
    observed = _deficits(sample, plan, 0)
    boot = _bootstrap(sample, plan, observed)
    value = _sup_statistic(observed[statistic], plan.grid.points).value
    p_value, critical = _calibrate(value, boot[statistic], config.alpha)
    return p_value, critical, boot[statistic]


def run_test(sample, config):
    """Test the sample for infinite divisibility.

    Args:
        sample: Sample with n >= 2.
        config: TestConfig.

    Returns:
        TestReport
    """
    plan = _plan(sample, config)
    t = plan.grid.points
    observed = _deficits(sample, plan, 0)
    boot = _bootstrap(sample, plan, observed)
    family = len(config.statistics)
    statistics = {}
    for name in config.statistics:
        result = _sup_statistic(observed[name], t)
        p_value, critical = _calibrate(result.value, boot[name], config.alpha)
        argmax_t = None if name == TMOM else result.argmax_t
        statistics[name] = StatisticReport(
            name=name,
            value=result.value,
            p_value=p_value,
            critical_value=critical,
            adjusted_p_value=min(1.0, family * p_value),
            argmax_t=argmax_t,
            deficits=_to_list(result.deficits))
    smallest = min(result.adjusted_p_value for result in statistics.values())
    decision = REJECT_ID if smallest < config.alpha else NO_EVIDENCE_AGAINST_ID
    m_statistic = m_decision = None
    if config.m_hypothesis is not None:
        result = _sup_statistic(observed[T2], t)
        p_value, critical = _calibrate(result.value, boot[T2], config.alpha)
        m_statistic = StatisticReport(name=T2,
                                      value=result.value,
                                      p_value=p_value,
                                      critical_value=critical,
                                      adjusted_p_value=p_value,
                                      argmax_t=result.argmax_t,
                                      deficits=_to_list(result.deficits))
        m_decision = (REJECT_M_DIVISIBLE if p_value < config.alpha else
                      NO_EVIDENCE_AGAINST_M_DIVISIBLE)
    logger.info("n=%d: %s (min adjusted p = %.4g)", sample.n, decision,
                smallest)
    return TestReport(n=sample.n,
                      sigma2_sym=plan.sigma2,
                      grid=[float(point) for point in t],
                      statistics=statistics,
                      decision=decision,
                      config=config.echo(),
                      m_statistic=m_statistic,
                      m_decision=m_decision,
                      warnings=list(plan.warnings))


def power_study(dist_name, n_list, config, reps):
    """Rejection rates of run_test on registry samples.

    Repetition r at size n draws its sample and runs its bootstrap with seed
    (seed..., n, r), so the table depends only on the inputs.

    Args:
        dist_name: Registry name.
        n_list: Sample sizes, each >= 2.
        config: TestConfig; its seed is the master seed.
        reps: Repetitions per size, >= 0.

    Returns:
        pandas.DataFrame with columns dist, n, statistic, reps, rejections,
        rate, mc_se. Statistic COMBINED is the Bonferroni decision.
    """
    dist = refdist.get_dist(dist_name)
    reps = config._validate_integer(reps, "reps", 0)
    n_list = [config._validate_integer(n, "n", 2) for n in n_list]
    columns = ["dist", "n", "statistic", "reps", "rejections", "rate",
               "mc_se"]
    if reps == 0:
        return pd.DataFrame(columns=columns)
    inner = config.replace(threads=1)
    names = list(config.statistics) + [COMBINED]
    if config.m_hypothesis is not None:
        names.append(T2)
    rows = []
    for n in n_list:

        def repetition(r, n=n):
            seed = config.seed + (n, r)
            report = run_test(refdist.sample(dist, n, seed),
                              inner.replace(seed=list(seed)))
            outcome = {
                name: result.p_value < config.alpha
                for name, result in report.statistics.items()
            }
            outcome[COMBINED] = report.rejected
            if report.m_decision is not None:
                outcome[T2] = report.m_decision == REJECT_M_DIVISIBLE
            return outcome

        outcomes = _map(repetition, range(reps), config.threads)
        for name in names:
            rejections = sum(outcome[name] for outcome in outcomes)
            rate = rejections / reps
            rows.append([
                dist.name, n, name, reps, rejections, rate,
                math.sqrt(rate * (1 - rate) / reps)
            ])
            logger.info("%s n=%d %s: rate %.3f", dist.name, n, name, rate)
    return pd.DataFrame(rows, columns=columns)


class _Plan(NamedTuple):
    # Everything fixed by the observed sample.
    config: TestConfig
    grid: object
    pairs: tuple
    sigma2: float
    t2_radius: Optional[float]
    support: Optional[float]
    warnings: list


def _plan(sample, config):
    sample.require(2)
    warnings = []
    sigma2 = _sigma2_sym(sample.values, config.symmetric)
    if config.t_max is not None:
        t_max = config.t_max
    elif sigma2 > 0:
        t_max = _GRID_SPAN / math.sqrt(sigma2)
    else:
        t_max = 1.0
        _warn(warnings, "Degenerate sample (zero variance); grid t_max set "
              "to 1 and every statistic is 0.")
    grid = dyadic_grid(t_max, config.grid_points)
    pairs = dyadic_pairs(grid)
    t2_radius = support = None
    if config.m_hypothesis is not None:
        support = _t2_support(sample.values, config)
        t2_radius = _t2_radius(math.sqrt(sigma2), support, config.m_hypothesis)
        inside = np.count_nonzero(grid.points <= t2_radius)
        if inside < 2:
            _warn(warnings, "m-divisibility validity radius {:.4g} covers "
                  "only {} grid point(s).".format(t2_radius, inside))
    return _Plan(config, grid, pairs, sigma2, t2_radius, support, warnings)


def _sigma2_sym(values, symmetric):
    # Variance of the law the statistics run on: X or X - X'.
    variance = float(np.var(values, ddof=1))
    return variance if symmetric else 2 * variance


def _t2_support(values, config):
    # Support radius of the tested law, plug-in when A is unknown.
    if config.symmetric:
        if config.support_radius is not None:
            return config.support_radius
        return float(np.max(np.abs(values)))
    if config.support_radius is not None:
        return 2 * config.support_radius
    return float(np.max(values) - np.min(values))


def _t2_radius(sigma, support, m):
    by_support = CONVEXITY_BOUND * m / support if support > 0 else math.inf
    by_sigma = math.pi * math.sqrt(m) / (2 * sigma) if sigma > 0 else math.inf
    return min(by_support, by_sigma)


def _t2_curve(sigma, m, radius):
    return BoundCurve(BoundKind.TH2_LOWER, {
        "sigma": sigma,
        "m": m
    }, (-radius, radius))


def _t4_deficits(h, pairs):
    k, half = pairs
    deficits = np.full(h.size, np.nan)
    deficits[k] = th4_deficit(h[k], np.clip(h[half], 0.0, 1.0))
    return deficits


def _tmom_deficit(sample, r, max_pairs, seed):
    differences = pairwise_difference_sample(sample, max_pairs, seed).values
    sigma = math.sqrt(float(np.mean(differences * differences)))
    moment = float(np.mean(abs_power(differences, r)))
    return moment - gaussian_abs_moment(sigma, r)


def _deficits(sample, plan, replicate):
    # Signed deficits of every planned statistic for one (re)sample.
    config = plan.config
    deficits = {}
    needs_ecf = set(config.statistics) - {TMOM}
    if needs_ecf or config.m_hypothesis is not None:
        values = ecf(sample, plan.grid, symmetric=config.symmetric,
                     variance=False)
        sigma2 = _sigma2_sym(sample.values, config.symmetric)
        if T3 in config.statistics:
            deficits[T3] = stat_t3(values, sigma2).deficits
        if T4 in config.statistics:
            deficits[T4] = stat_t4(values, plan.pairs).deficits
        if config.m_hypothesis is not None:
            deficits[T2] = stat_t2(values, math.sqrt(sigma2),
                                   config.m_hypothesis,
                                   plan.t2_radius).deficits
    if TMOM in config.statistics:
        seed = config.seed + (replicate, _PAIRS)
        deficits[TMOM] = np.array([
            _tmom_deficit(sample, config.r_order, config.max_pairs, seed)
        ])
    return deficits


def _bootstrap(sample, plan, observed):
    # Recentered replicates T*_b = max_t (d*_b(t) - d(t))+, b = 1..B.
    config = plan.config
    x = sample.values
    n = sample.n

    def replicate(b):
        rng = make_stream(config.seed, b, _RESAMPLE)
        resample = Sample(x[rng.integers(0, n, size=n)])
        deficits = _deficits(resample, plan, b)
        return {
            name: _positive_max(deficits[name] - observed[name])
            for name in deficits
        }

    replicates = _map(replicate, range(1, config.bootstrap_B + 1),
                      config.threads)
    boot = {
        name: np.array([values[name] for values in replicates])
        for name in observed
    }
    logger.debug("bootstrap: %d replicates of %s", config.bootstrap_B,
                 ", ".join(boot))
    return boot


def _calibrate(value, boot_values, alpha):
    # p = (1 + #{T* >= T}) / (B + 1); critical value at level alpha.
    exceed = np.count_nonzero(boot_values >= value)
    p_value = (1 + exceed) / (boot_values.size + 1)
    critical = float(np.quantile(boot_values, 1 - alpha))
    return float(p_value), critical


def _sup_statistic(deficits, t):
    deficits = np.asarray(deficits, dtype=float)
    if np.all(np.isnan(deficits)):
        return StatResult(0.0, None, deficits)
    index = int(np.nanargmax(deficits))
    value = _positive_max(deficits)
    argmax_t = float(t[index]) if index < len(t) else None
    return StatResult(value, argmax_t, deficits)


def _positive_max(deficits):
    deficits = np.asarray(deficits, dtype=float)
    if deficits.size == 0 or np.all(np.isnan(deficits)):
        return 0.0
    value = float(np.nanmax(deficits))
    return value if value > DEFICIT_TOLERANCE else 0.0


def _map(function, items, threads):
    # Ordered results; every task owns its stream, so threads only
    # change the wall time.
    if threads == 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))


def _to_list(values):
    return [None if np.isnan(value) else float(value) for value in values]


def _warn(warnings, message):
    logger.warning(message)
    warnings.append(message)
