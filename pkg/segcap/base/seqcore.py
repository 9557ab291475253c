#  Copyright © 2021 The Segcap Authors. All Rights Reserved.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#  ==============================================================================
"""
Binary words, runlength descriptions and run-count combinatorics.

A word is stored with its length so that leading zeros are significant. The
packed form keeps the bits in the low ``length`` positions of an integer, first
bit most significant, e.g. ``0100110`` packs to ``0b0100110 == 38``.

Author:
    The Segcap Authors
"""
import functools
import itertools
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import xlogy

from segcap.base.errors import DomainError, PackedOverflowError

MAX_PACKED_LENGTH = 63

IdentityCheck = namedtuple('IdentityCheck', ['direct', 'closed'])


@dataclass(frozen=True)
class BinaryWord:
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DomainError('BinaryWord bits must be 0 or 1, got {}.'.format(self.bits))
        object.__setattr__(self, 'bits', bits)

    @property
    def length(self):
        return len(self.bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return ''.join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, text):
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_int(cls, value, length):
        _check_packed(length)
        return cls(tuple((int(value) >> (length - 1 - i)) & 1 for i in range(length)))

    def to_int(self):
        _check_packed(self.length)
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value


@dataclass(frozen=True)
class RunLengths:
    first_bit: int
    runs: Tuple[int, ...]

    def __post_init__(self):
        runs = tuple(int(r) for r in self.runs)
        if self.first_bit not in (0, 1):
            raise DomainError('first_bit must be 0 or 1, got {}.'.format(self.first_bit))
        if any(r < 1 for r in runs):
            raise DomainError('run lengths must be positive, got {}.'.format(runs))
        object.__setattr__(self, 'runs', runs)

    @property
    def n_runs(self):
        return len(self.runs)

    @property
    def length(self):
        return sum(self.runs)


def _check_packed(length):
    if length > MAX_PACKED_LENGTH:
        raise PackedOverflowError(
            'length {} exceeds the packed limit of {} bits.'.format(length, MAX_PACKED_LENGTH))


def runs_of(bits):
    """Run lengths of a bit sequence, in order."""
    return [len(list(group)) for _, group in itertools.groupby(bits)]


def runlength_encode(word):
    if word.length == 0:
        raise DomainError('cannot encode the empty word.')
    return RunLengths(word.bits[0], tuple(runs_of(word.bits)))


def runlength_decode(rl):
    bits = []
    bit = rl.first_bit
    for r in rl.runs:
        if r < 1:
            raise DomainError('zero-length run in {}.'.format(rl.runs))
        bits.extend([bit] * r)
        bit ^= 1
    return BinaryWord(tuple(bits))


def empirical_runlength_entropy(word):
    """Entropy in bits of the normalized run profile (r_1/ell, ..., r_n/ell)."""
    ell = word.length
    if ell < 1:
        raise DomainError('empirical runlength entropy needs a non-empty word.')
    ratios = np.asarray(runs_of(word.bits), dtype=np.float64) / ell
    return float(-np.sum(xlogy(ratios, ratios)) / np.log(2))


def binomial(n, k):
    """Exact C(n, k), zero outside 0 <= k <= n."""
    _check_packed(n)
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def count_words_with_m_runs(ell, m):
    """n'(ell, m): number of length-ell words with exactly m runs."""
    if m < 1 or m > ell:
        return 0
    return 2 * binomial(ell - 1, m - 1)


def count_runs_of_length(k, m, ell):
    """n''(k, m, ell): runs of length k summed over all length-ell words with m runs."""
    _check_packed(ell)
    if k < 1 or m < 1 or ell < 1:
        return 0
    if m == 1:
        return 2 if k == ell else 0
    if k <= ell - m + 1:
        return 2 * m * binomial(ell - k - 1, m - 2)
    return 0


def total_run_count(ell, j):
    """n(ell, j): runs of length j counted over all of {0,1}^ell."""
    _check_packed(ell)
    if j < 1 or j > ell:
        return 0
    if j == ell:
        return 2
    return 2 ** (ell - j - 1) * (ell - j + 3)


def binomial_moment_identities(n, t):
    """
    First and second binomial moments in t, direct sum against closed form.

    :param n: number of trials, n >= 1
    :param t: positive real
    :return: (first, second), each an IdentityCheck(direct, closed)
    """
    coefficients = [binomial(n, k) for k in range(n + 1)]
    first = math.fsum(c * k * t ** k for k, c in enumerate(coefficients))
    second = math.fsum(c * k * k * t ** k for k, c in enumerate(coefficients))
    first_closed = n * (1 + t) ** (n - 1) * t
    second_closed = first_closed + n * (n - 1) * (1 + t) ** (n - 2) * t * t
    return IdentityCheck(first, first_closed), IdentityCheck(second, second_closed)


@functools.lru_cache(maxsize=32)
def bit_matrix(ell):
    """All words of length ell as rows of a (2^ell, ell) uint8 matrix, row index = packed value."""
    _check_packed(ell)
    values = np.arange(2 ** ell, dtype=np.int64)
    shifts = np.arange(ell - 1, -1, -1, dtype=np.int64)
    matrix = ((values[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
    matrix.setflags(write=False)
    return matrix


@functools.lru_cache(maxsize=32)
def run_statistics(ell):
    """
    Per-word run statistics over {0,1}^ell, indexed by packed value.

    :return: (n_runs, run_log_sum) where run_log_sum[x] = sum_i r_i log2 r_i
    """
    bits = bit_matrix(ell)
    size = bits.shape[0]
    n_runs = np.ones(size, dtype=np.int64)
    run_log_sum = np.zeros(size, dtype=np.float64)
    current = np.ones(size, dtype=np.float64)
    for i in range(1, ell):
        same = bits[:, i] == bits[:, i - 1]
        closing = ~same
        run_log_sum[closing] += xlogy(current[closing], current[closing])
        n_runs += closing
        current = np.where(same, current + 1.0, 1.0)
    run_log_sum += xlogy(current, current)
    run_log_sum /= np.log(2)
    n_runs.setflags(write=False)
    run_log_sum.setflags(write=False)
    return n_runs, run_log_sum


def empirical_entropy_table(ell):
    """Empirical runlength entropy of every word of length ell, indexed by packed value."""
    _, run_log_sum = run_statistics(ell)
    return np.log2(ell) - run_log_sum / ell
