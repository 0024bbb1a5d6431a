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


class DivisibleError(Exception):
    """Base class for every error raised by the divisible package."""


class InvalidArgumentError(DivisibleError, ValueError):
    """An argument is outside the domain of the operation."""


class NumericFailureError(DivisibleError, ArithmeticError):
    """A numerical procedure did not reach the requested accuracy."""


class UndefinedIterateError(NumericFailureError):
    """A log-space power was requested of a non-positive base."""


class DataError(DivisibleError, ValueError):
    """Input data could not be read or is unusable."""


class UsageError(DivisibleError):
    """The command line was inconsistent."""


_ERROR_TYPES = {
    "InvalidArgument": InvalidArgumentError,
    "NumericFailure": NumericFailureError,
    "UndefinedIterate": UndefinedIterateError,
    "Data": DataError,
    "Usage": UsageError,
}


def _error(statement, error_type="InvalidArgument"):
    # Used to trigger exceptions with customized statements
    raise _ERROR_TYPES.get(error_type, DivisibleError)(statement)


def _validate_integer(value, name, minimum=0):
    # Confirm value is an integer >= minimum; integral floats are accepted.
    if isinstance(value, bool):
        _error("Invalid {}: {}, should be an integer.".format(name, value))
    try:
        integer = int(value)
    except (TypeError, ValueError, OverflowError):
        _error("Invalid {}: {}, should be an integer.".format(name, value))
    if integer != value or integer < minimum:
        _error("Invalid {}: {}, should be an integer >= {}.".format(
            name, value, minimum))
    return integer
