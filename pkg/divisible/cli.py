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
"""Command line: ``python -m divisible <command> [flags]``.

Commands:
    test      bootstrap test of infinite divisibility, JSON report
    bounds    a bound curve next to the (empirical) CF, CSV
    moments   fractional absolute moments and their Gaussian bound
    simulate  rejection rates of the test on registry samples, CSV
    roots     first positive root of sin z - z cos z

Exit codes: 0 no evidence against infinite divisibility (or success),
3 REJECT_ID, 1 usage error, 2 data error.
"""

import argparse
import csv
import json
import logging
import math
import sys

import numpy as np
import pandas as pd

from . import bounds, idtest, refdist
from .cf_core import (Sample, TGrid, dyadic_grid, ecf, moments,
                      pairwise_difference_sample, symmetrize_ecf)
from .errors import (DataError, InvalidArgumentError, NumericFailureError,
                     UsageError, _error)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REJECT = 3

MIN_TEST_SIZE = 20
BOUND_CHOICES = ("1", "1a", "2", "2a", "3", "4", "21")
_FLOAT_FORMAT = "%.15g"
# Cross-check truncation, in units of 1 / sigma.
_CF_SPAN_ANALYTIC = 1000.0
_CF_SPAN_DATA = 50.0


class _Parser(argparse.ArgumentParser):
    # Usage problems exit with code 1 through UsageError.

    def error(self, message):
        _error(message, "Usage")


def main(argv=None):
    """Run one command and return its exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr)
        return args.handler(args)
    except (UsageError, InvalidArgumentError) as exc:
        print("usage error: {}".format(exc), file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print("data error: {}".format(exc), file=sys.stderr)
        return EXIT_DATA
    except NumericFailureError as exc:
        print("numeric failure: {}".format(exc), file=sys.stderr)
        return EXIT_DATA


def cmd_test(args):
    sample = _load_sample(args, required_n=True)
    if sample.n < MIN_TEST_SIZE:
        _error("Sample has {} values, the test needs at least {}.".format(
            sample.n, MIN_TEST_SIZE), "Data")
    report = idtest.run_test(sample, _test_config(args))
    if args.format == "csv":
        rows = [vars(result) for result in report.statistics.values()]
        if report.m_statistic is not None:
            rows.append(vars(report.m_statistic))
        table = pd.DataFrame(rows).drop(columns="deficits")
        table["decision"] = [
            report.m_decision if row["name"] == idtest.T2 else report.decision
            for row in rows
        ]
        _write(args.output, table.to_csv(index=False,
                                         float_format=_FLOAT_FORMAT))
    else:
        _write(args.output,
               json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    return EXIT_REJECT if report.rejected else EXIT_OK


def cmd_bounds(args):
    if args.format == "json":
        _error("bounds writes CSV only.", "Usage")
    if args.th == "21" and not args.gamma > 1:
        _error("Invalid --gamma: {}, should be > 1.".format(args.gamma),
               "Usage")
    source = _bound_source(args)
    t_max = args.grid_max or 8 / source["sigma"]
    grid = dyadic_grid(t_max, args.grid_points)
    t = grid.points
    h = source["cf"](grid)
    if args.th == "4":
        half = source["cf"](TGrid(t / 2))
        bound = np.clip(half, 0.0, 1.0)**4
        deficit = bound - h
        in_validity = np.ones(t.size, dtype=bool)
    else:
        curve = _bound_curve(args, source)
        bound = curve.evaluate(t)
        deficit = curve.deficit(h, t)
        in_validity = curve.in_validity(t)
    table = pd.DataFrame({
        "t": t,
        "ecf_or_cf": h,
        "bound": bound,
        "deficit": deficit,
        "in_validity": in_validity,
    })
    _write(args.output, table.to_csv(index=False,
                                     float_format=_FLOAT_FORMAT))
    return EXIT_OK


def cmd_moments(args):
    orders = _parse_orders(args.r)
    if bool(args.input) == bool(args.dist):
        _error("Give exactly one of --input and --dist.", "Usage")
    if args.dist and args.symmetric:
        dist = _registry_dist(args)
        sigma = dist.sigma
        values = [dist.abs_moment(r) for r in orders]
        cf = dist.cf
        span, tol = _CF_SPAN_ANALYTIC, 1e-6
    elif args.dist:
        # The law of X - X', whose CF is |f|^2.
        dist = _registry_dist(args)
        sigma = math.sqrt(2) * dist.sigma
        values = [dist.sym_abs_moment(r) for r in orders]

        def cf(t):
            return dist.cf(t)**2

        span, tol = _CF_SPAN_ANALYTIC, 1e-6
    else:
        sample = _load_sample(args)
        sample.require(2)
        # Moments of the symmetrized law X - X', or of X when trusted.
        source = (sample if args.symmetric else pairwise_difference_sample(
            sample, args.max_pairs, args.seed))
        moment_set = moments(source, orders=orders)
        sigma = math.sqrt(moment_set.sigma2)
        values = [moment_set.absolute(r) for r in orders]
        cf = _pointwise_ecf(sample.values, args.symmetric)
        span, tol = _CF_SPAN_DATA, 1e-4
    rows = []
    for r, value in zip(orders, values):
        bound = bounds.gaussian_abs_moment(sigma, r)
        cross_check = uncertainty = math.nan
        if sigma > 0:
            try:
                recovered = bounds.fractional_moment_via_cf(
                    cf, r, span / sigma, tol=tol, scale=sigma)
                cross_check = recovered.value
                uncertainty = recovered.uncertainty
            except NumericFailureError as exc:
                logger.warning("CF cross-check for r = %g failed: %s", r, exc)
        rows.append({
            "r": r,
            "moment": value,
            "gaussian_bound": bound,
            "tmom": max(value - bound, 0.0),
            "c_r": bounds.cr_constant(r),
            "cf_moment": cross_check,
            "cf_uncertainty": uncertainty,
        })
    table = pd.DataFrame(rows)
    if args.format == "json":
        _write(args.output,
               json.dumps({"schema": idtest.SCHEMA_VERSION,
                           "moments": rows}, sort_keys=True, indent=2) + "\n")
    else:
        _write(args.output, table.to_csv(index=False,
                                         float_format=_FLOAT_FORMAT))
    return EXIT_OK


def cmd_simulate(args):
    if not args.dist:
        _error("simulate needs --dist.", "Usage")
    if args.input:
        _error("simulate draws from --dist; --input is not accepted.",
               "Usage")
    n_list = [_parse_int(value, "--n") for value in args.n.split(",")]
    table = idtest.power_study(args.dist, n_list, _test_config(args),
                               args.reps)
    if args.format == "json":
        _write(args.output,
               json.dumps({"schema": idtest.SCHEMA_VERSION,
                           "rows": table.to_dict(orient="records")},
                          sort_keys=True, indent=2) + "\n")
    else:
        _write(args.output, table.to_csv(index=False,
                                         float_format=_FLOAT_FORMAT))
    return EXIT_OK


def cmd_roots(args):
    root = bounds.root_z0()
    _write(args.output, "z0 {:.12f}\nresidual {:.3e}\niterations {}\n".format(
        root.value, root.residual, root.iterations))
    return EXIT_OK


def read_column(path, column=None):
    """Read one numeric column from a CSV or whitespace-separated file.

    A first row with a non-numeric field is a header. Blank lines are
    skipped. Rows are numbered as lines in the file.

    Args:
        path: File path.
        column: 1-based column, optional for single-column files.

    Returns:
        Sample
    """
    try:
        with open(path, newline="") as handle:
            lines = handle.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        _error("Cannot read {}: {}".format(path, exc), "Data")
    rows = [(number, _split(line))
            for number, line in enumerate(lines, start=1) if line.strip()]
    if not rows:
        _error("{} holds no data.".format(path), "Data")
    if not all(_is_number(field) for field in rows[0][1]):
        rows = rows[1:]
        if not rows:
            _error("{} holds a header but no data.".format(path), "Data")
    width = len(rows[0][1])
    if column is None:
        if width != 1:
            _error("Input has {} columns; select one with --column.".format(
                width), "Usage")
        column = 1
    if not 1 <= column <= width:
        _error("--column {} is outside 1..{}.".format(column, width), "Usage")
    values = []
    for number, fields in rows:
        if len(fields) != width:
            _error("Row {}: {} fields, expected {}.".format(
                number, len(fields), width), "Data")
        field = fields[column - 1]
        if not _is_number(field):
            _error("Row {}: '{}' is not a number.".format(number, field),
                   "Data")
        values.append(float(field))
    try:
        return Sample(values)
    except InvalidArgumentError as exc:
        _error("{}: {}".format(path, exc), "Data")


def _build_parser():
    parser = _Parser(prog="divisible",
                     description="Tests and bounds for infinitely "
                     "divisible characteristic functions.")
    subparsers = parser.add_subparsers(dest="command",
                                       required=True,
                                       parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("-v",
                        "--verbose",
                        action="count",
                        default=0,
                        help="more logging, repeatable")
    common.add_argument("--output", help="output file, stdout by default")
    common.add_argument("--format", choices=("json", "csv"))

    source = _Parser(add_help=False)
    source.add_argument("--input", help="CSV file with the sample")
    source.add_argument("--column", type=int, help="1-based column")
    source.add_argument("--dist",
                        choices=refdist.NAMES,
                        help="registry distribution")
    source.add_argument("--seed",
                        type=int,
                        default=idtest.DEFAULT_SEED,
                        help="master seed (default %(default)s)")
    source.add_argument("--symmetric",
                        action="store_true",
                        help="trust the data as symmetric")
    source.add_argument("--m",
                        type=int,
                        help="m for m-divisibility; also binomsym's m")

    grid = _Parser(add_help=False)
    grid.add_argument("--grid-max", type=float, help="t_max, 8/sigma default")
    grid.add_argument("--grid-points",
                      type=int,
                      default=256,
                      help="power of two (default %(default)s)")
    grid.add_argument("--support-radius",
                      type=float,
                      help="known support radius A")

    testing = _Parser(add_help=False)
    testing.add_argument("--stats",
                         default="t3,t4",
                         help="comma list of t3, t4, tmom")
    testing.add_argument("--B",
                         dest="bootstrap_B",
                         type=int,
                         default=199,
                         help="bootstrap replicates")
    testing.add_argument("--alpha", type=float, default=0.05)
    testing.add_argument("--r",
                         type=float,
                         default=1.0,
                         help="TMOM moment order in (0, 2)")
    testing.add_argument("--threads", type=int, default=1)

    test = subparsers.add_parser("test",
                                 parents=[common, source, grid, testing],
                                 help="test a sample for infinite "
                                 "divisibility")
    test.add_argument("--n", type=int, help="registry sample size")
    test.set_defaults(handler=cmd_test)

    bound = subparsers.add_parser("bounds",
                                  parents=[common, source, grid],
                                  help="bound curve against the CF")
    bound.add_argument("--th", required=True, choices=BOUND_CHOICES)
    bound.add_argument("--gamma",
                       type=float,
                       default=2.0,
                       help="exponent for --th 21")
    bound.add_argument("--max-pairs", type=int, default=20000)
    bound.set_defaults(handler=cmd_bounds)

    moment = subparsers.add_parser("moments",
                                   parents=[common, source],
                                   help="fractional absolute moments")
    moment.add_argument("--r", default="1", help="comma list of orders")
    moment.add_argument("--max-pairs", type=int, default=20000)
    moment.set_defaults(handler=cmd_moments)

    simulate = subparsers.add_parser("simulate",
                                     parents=[common, source, grid, testing],
                                     help="rejection rates on registry "
                                     "samples")
    simulate.add_argument("--n",
                          default="250,500,1000,2000",
                          help="comma list of sample sizes")
    simulate.add_argument("--reps", type=int, default=100)
    simulate.set_defaults(handler=cmd_simulate)

    roots = subparsers.add_parser("roots",
                                  parents=[common],
                                  help="root of sin z - z cos z")
    roots.set_defaults(handler=cmd_roots)
    return parser


def _test_config(args):
    return idtest.TestConfig(t_max=args.grid_max,
                             grid_points=args.grid_points,
                             statistics=args.stats,
                             r_order=args.r,
                             bootstrap_B=args.bootstrap_B,
                             alpha=args.alpha,
                             seed=args.seed,
                             m_hypothesis=args.m,
                             symmetric=args.symmetric,
                             support_radius=args.support_radius,
                             threads=args.threads)


def _registry_dist(args):
    if args.dist == "binomsym" and args.m is not None:
        return refdist.get_dist(args.dist, m=args.m)
    return refdist.get_dist(args.dist)


def _load_sample(args, required_n=False):
    if bool(args.input) == bool(args.dist):
        _error("Give exactly one of --input and --dist.", "Usage")
    if args.input:
        return read_column(args.input, args.column)
    if required_n and args.n is None:
        _error("--dist needs --n.", "Usage")
    n = getattr(args, "n", None) or 1000
    return refdist.sample(_registry_dist(args), n, args.seed)


def _bound_source(args):
    # CF, sigma, moments and support radius of what the bound is drawn for.
    if bool(args.input) == bool(args.dist):
        _error("Give exactly one of --input and --dist.", "Usage")
    orders = (1 / args.gamma, ) if args.th == "21" else ()
    if args.dist:
        dist = _registry_dist(args)
        return {
            "cf": lambda grid: refdist.cf_eval(dist, grid),
            "sigma": dist.sigma,
            "moments": dist.moment_set(orders),
            "support": args.support_radius or dist.support_radius,
            "m": dist.m,
        }
    sample = read_column(args.input, args.column)
    sample.require(2)
    law = (sample if args.symmetric else pairwise_difference_sample(
        sample, args.max_pairs, args.seed))
    moment_set = moments(law, orders=orders)
    support = args.support_radius
    if support is not None and not args.symmetric:
        support = 2 * support
    if moment_set.sigma2 <= 0:
        _error("Sample has zero spread; no bound can be drawn.", "Data")
    return {
        "cf": lambda grid: ecf(sample, grid, symmetric=args.symmetric,
                               variance=False).sym_values,
        "sigma": moment_set.sigma,
        "moments": moment_set,
        "support": support,
        "m": None,
    }


def _bound_curve(args, source):
    th = args.th
    sigma = source["sigma"]
    A = source["support"]
    if th in ("1", "2", "21") and A is None:
        _error("--th {} needs --support-radius (or a compactly supported "
               "--dist).".format(th), "Usage")
    m = args.m or source["m"]
    if th in ("2", "2a") and m is None:
        _error("--th {} needs --m.".format(th), "Usage")
    if th == "1":
        return bounds.th1_lower(sigma, A)
    if th == "1a":
        return bounds.th1a_lower(source["moments"])
    if th == "2":
        return bounds.th2_lower(sigma, A, m)
    if th == "2a":
        return bounds.th2a_lower(source["moments"], m)
    if th == "3":
        return bounds.th3_lower(sigma**2)
    a_gamma = source["moments"].absolute(1 / args.gamma)
    return bounds.th21_upper(a_gamma, args.gamma, A)


def _pointwise_ecf(values, symmetric):
    n = values.size

    def h(t):
        f = complex(np.mean(np.exp(1j * t * values)))
        return f.real if symmetric else float(symmetrize_ecf(f, n))

    return h


def _parse_orders(text):
    orders = []
    for part in str(text).split(","):
        try:
            orders.append(float(part))
        except ValueError:
            _error("Invalid --r value: '{}'.".format(part), "Usage")
    return orders


def _parse_int(text, flag):
    try:
        return int(text)
    except ValueError:
        _error("Invalid {} value: '{}'.".format(flag, text), "Usage")


def _split(line):
    if "," in line:
        return [field.strip() for field in next(csv.reader([line]))]
    return line.split()


def _is_number(text):
    try:
        value = float(text)
    except ValueError:
        return False
    return math.isfinite(value)


def _write(path, text):
    if path:
        with open(path, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
