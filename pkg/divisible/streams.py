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
"""Seeded, splittable random streams.

Every random draw in the package comes from a Philox4x64 counter-based
generator keyed by a ``numpy.random.SeedSequence``. A seed is either a
non-negative integer or a tuple of them; the first element is the entropy and
the rest, followed by any extra keys, form the spawn key. Two calls with the
same seed and keys produce identical streams on every platform, and streams
with different keys are statistically independent, so parallel tasks that
each own a key give the same results for any number of workers.
"""

import numpy as np

from .errors import _error


def normalize_seed(seed):
    """Return ``seed`` as a tuple of non-negative ints.

    Args:
        seed: Integer or sequence of integers.

    Returns:
        Tuple of ints with at least one element.
    """
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool):
        parts = (int(seed), )
    else:
        try:
            parts = tuple(int(part) for part in seed)
        except (TypeError, ValueError):
            _error("Invalid seed: {}, should be an integer or a tuple of "
                   "integers.".format(seed))
    if not parts or any(part < 0 for part in parts):
        _error("Invalid seed: {}, parts should be >= 0.".format(seed))
    return parts


def make_stream(seed, *keys):
    """Return the generator for ``seed`` extended by ``keys``."""
    parts = normalize_seed(seed)
    if keys:
        parts += normalize_seed(keys)
    sequence = np.random.SeedSequence(parts[0], spawn_key=parts[1:])
    return np.random.Generator(np.random.Philox(sequence))
