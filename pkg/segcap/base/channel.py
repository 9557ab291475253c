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
One block of the one-bit deletion/duplication channel.

A length-ell block loses one uniformly chosen bit with probability p, has one
uniformly chosen bit repeated with probability q, and passes unchanged
otherwise. Outputs of different lengths are different symbols, so the output
alphabet is the disjoint union of lengths ell-1, ell and ell+1.

Author:
    The Segcap Authors
"""
import functools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse
from absl import logging
from scipy.special import xlogy

from segcap.base import metrics
from segcap.base.errors import DomainError, EnumerationCapError
from segcap.base.seqcore import BinaryWord, bit_matrix, count_runs_of_length, run_statistics, runs_of

ENUMERATION_CAP = 16
SIMPLEX_SLACK = 1e-12
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    ell: int
    p: float
    q: float

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 1:
            raise DomainError('block length ell must be a positive integer, got {}.'.format(self.ell))
        if not (self.p >= 0 and self.q >= 0 and self.p + self.q <= 1 + SIMPLEX_SLACK):
            raise DomainError('(p, q) = ({}, {}) is outside the simplex p, q >= 0, p + q <= 1.'.format(self.p, self.q))
        object.__setattr__(self, 'ell', int(self.ell))
        object.__setattr__(self, 'p', float(self.p))
        object.__setattr__(self, 'q', float(self.q))

    @property
    def p_d(self):
        """Unconditional per-symbol deletion probability."""
        return self.p / self.ell

    @property
    def p_i(self):
        """Unconditional per-symbol duplication probability."""
        return self.q / self.ell

    @property
    def stay(self):
        return max(0.0, 1.0 - self.p - self.q)


@dataclass(frozen=True)
class MarkovInputParams:
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError('alpha must lie in [0, 1], got {}.'.format(self.alpha))


def alpha_value(alpha):
    if isinstance(alpha, MarkovInputParams):
        return alpha.alpha
    return MarkovInputParams(float(alpha)).alpha


@dataclass(frozen=True, eq=False)
class Distribution:
    """
    Probability mass over words, stored column-wise.

    ``lengths[i]`` and ``bits[i]`` (packed) identify the i-th support word,
    ``mass[i]`` its probability. Output slices use the same type as
    sub-probability measures, so normalization is checked on demand.
    """
    lengths: np.ndarray
    bits: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        lengths = np.asarray(self.lengths, dtype=np.int64).reshape(-1)
        bits = np.asarray(self.bits, dtype=np.int64).reshape(-1)
        mass = np.asarray(self.mass, dtype=np.float64).reshape(-1)
        if not (lengths.shape == bits.shape == mass.shape):
            raise DomainError('support and mass must have the same size.')
        if np.any(mass < 0):
            raise DomainError('probability masses must be nonnegative.')
        object.__setattr__(self, 'lengths', lengths)
        object.__setattr__(self, 'bits', bits)
        object.__setattr__(self, 'mass', mass)

    @classmethod
    def over_words(cls, ell, mass):
        """Distribution on all of {0,1}^ell, mass indexed by packed value."""
        mass = np.asarray(mass, dtype=np.float64)
        return cls(np.full(mass.shape, ell, dtype=np.int64), np.arange(mass.size, dtype=np.int64), mass)

    @property
    def size(self):
        return self.mass.size

    def total(self):
        return float(math.fsum(self.mass))

    def check_normalized(self, tol=NORMALIZATION_TOL):
        if abs(self.total() - 1.0) > tol:
            raise DomainError('distribution sums to {!r}, not 1.'.format(self.total()))
        return self

    def words(self):
        return [BinaryWord.from_int(b, n) for n, b in zip(self.lengths, self.bits)]

    @cached_property
    def _index(self):
        return {(int(n), int(b)): i for i, (n, b) in enumerate(zip(self.lengths, self.bits))}

    def mass_of(self, word):
        i = self._index.get((word.length, word.to_int()))
        return 0.0 if i is None else float(self.mass[i])

    def as_dict(self):
        return {w: float(m) for w, m in zip(self.words(), self.mass)}

    def entropy(self):
        return metrics.entropy_bits(self.mass)

    def restrict(self, length):
        keep = self.lengths == length
        return Distribution(self.lengths[keep], self.bits[keep], self.mass[keep])


@dataclass(frozen=True, eq=False)
class SparseTransitionLaw:
    """
    Q(y|x) for a set of length-ell inputs.

    Row i of ``matrix`` belongs to the packed input ``inputs[i]``; column j to
    the output word (``out_lengths[j]``, ``out_bits[j]``). Only outputs reachable
    from some word of {0,1}^ell are allocated.
    """
    params: ChannelParams
    inputs: np.ndarray
    out_lengths: np.ndarray
    out_bits: np.ndarray
    matrix: scipy.sparse.csr_matrix

    def row(self, x):
        i = int(np.searchsorted(self.inputs, x.to_int()))
        if i >= self.inputs.size or self.inputs[i] != x.to_int() or x.length != self.params.ell:
            raise DomainError('{} is not an input of this law.'.format(x))
        start, stop = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return {BinaryWord.from_int(self.out_bits[j], self.out_lengths[j]): float(v)
                for j, v in zip(self.matrix.indices[start:stop], self.matrix.data[start:stop])}


def check_enumeration(ell, cap=ENUMERATION_CAP):
    if ell > cap:
        raise EnumerationCapError(ell, cap)


def _bits_of(x):
    return x.bits if isinstance(x, BinaryWord) else tuple(int(b) for b in x)


def transition_law(x, params):
    """
    Q(.|x) as a dict output word -> probability.

    One representative output per run: deleting (duplicating) any bit of run i
    gives the same word, which carries p r_i / ell (q r_i / ell). Coinciding
    outputs are accumulated.
    """
    bits = _bits_of(x)
    ell = params.ell
    if len(bits) != ell:
        raise DomainError('input has length {}, expected ell={}.'.format(len(bits), ell))
    law = Counter()
    if params.stay > 0:
        law[bits] += params.stay
    start = 0
    for r in runs_of(bits):
        if params.p > 0:
            law[bits[:start] + bits[start + 1:]] += params.p * r / ell
        if params.q > 0:
            law[bits[:start] + bits[start:start + 1] + bits[start:]] += params.q * r / ell
        start += r
    return {BinaryWord(y): mass for y, mass in law.items()}


@functools.lru_cache(maxsize=4)
def _law_components(ell):
    """
    Structure of the law for {0,1}^ell, independent of (p, q).

    :return: (out_lengths, out_bits, identity, deletion, duplication); the three
        CSR matrices are row-stochastic and the law is their (1-p-q, p, q) mix.
    """
    bits = bit_matrix(ell)
    size = bits.shape[0]
    values = np.arange(size, dtype=np.int64)
    # run_from[x, i]: length of the run of x that covers position i, counted from i on.
    run_from = np.ones((size, ell), dtype=np.int64)
    for i in range(ell - 2, -1, -1):
        run_from[:, i] = np.where(bits[:, i] == bits[:, i + 1], run_from[:, i + 1] + 1, 1)

    short_offset, same_offset, long_offset = 0, 2 ** (ell - 1), 2 ** (ell - 1) + 2 ** ell
    del_rows, del_keys, del_vals = [], [], []
    dup_rows, dup_keys, dup_vals = [], [], []
    for i in range(ell):
        if i == 0:
            starts = values
        else:
            starts = values[bits[:, i] != bits[:, i - 1]]
        r = run_from[starts, i].astype(np.float64) / ell
        tail = ell - 1 - i
        high = starts >> (ell - i)
        low = starts & ((1 << tail) - 1)
        bit = (starts >> tail) & 1
        del_rows.append(starts)
        del_keys.append(short_offset + ((high << tail) | low))
        del_vals.append(r)
        dup_rows.append(starts)
        dup_keys.append(long_offset + ((((((high << 1) | bit) << 1) | bit) << tail) | low))
        dup_vals.append(r)

    del_keys = np.concatenate(del_keys)
    dup_keys = np.concatenate(dup_keys)
    same_keys = same_offset + values
    keys, inverse = np.unique(np.concatenate([del_keys, same_keys, dup_keys]), return_inverse=True)
    inverse = inverse.reshape(-1)
    n_del, n_same = del_keys.size, same_keys.size
    del_cols, same_cols, dup_cols = inverse[:n_del], inverse[n_del:n_del + n_same], inverse[n_del + n_same:]

    out_lengths = np.where(keys >= long_offset, ell + 1, np.where(keys >= same_offset, ell, ell - 1))
    out_bits = keys - np.where(keys >= long_offset, long_offset, np.where(keys >= same_offset, same_offset, 0))
    shape = (size, keys.size)
    identity = scipy.sparse.csr_matrix((np.ones(size), (values, same_cols)), shape=shape)
    deletion = scipy.sparse.csr_matrix((np.concatenate(del_vals), (np.concatenate(del_rows), del_cols)), shape=shape)
    duplication = scipy.sparse.csr_matrix((np.concatenate(dup_vals), (np.concatenate(dup_rows), dup_cols)),
                                          shape=shape)
    logging.debug('law structure for ell=%d: %d inputs, %d reachable outputs', ell, size, keys.size)
    return out_lengths.astype(np.int64), out_bits.astype(np.int64), identity, deletion, duplication


def build_transition_law(params, inputs=None, cap=ENUMERATION_CAP):
    """
    The full sparse law on {0,1}^ell, or on the packed ``inputs`` only.
    """
    check_enumeration(params.ell, cap)
    out_lengths, out_bits, identity, deletion, duplication = _law_components(params.ell)
    matrix = (params.stay * identity + params.p * deletion + params.q * duplication).tocsr()
    matrix.eliminate_zeros()
    if inputs is None:
        inputs = np.arange(2 ** params.ell, dtype=np.int64)
    else:
        inputs = np.asarray(inputs, dtype=np.int64)
        order = np.argsort(inputs, kind='stable')
        if np.any(np.diff(inputs[order]) == 0):
            raise DomainError('inputs must be distinct words.')
        inputs = inputs[order]
        matrix = matrix[inputs]
    return SparseTransitionLaw(params, inputs, out_lengths, out_bits, matrix)


def uniform_distribution(ell, cap=ENUMERATION_CAP):
    check_enumeration(ell, cap)
    return Distribution.over_words(ell, np.full(2 ** ell, 2.0 ** -ell))


def markov_input_distribution(ell, alpha, cap=ENUMERATION_CAP):
    """
    X^ell(alpha): first bit uniform, then each bit flips with probability alpha,
    so P_X(x) = 0.5 alpha^(n_r - 1) (1 - alpha)^(ell - n_r).
    """
    alpha = alpha_value(alpha)
    check_enumeration(ell, cap)
    n_runs, _ = run_statistics(ell)
    mass = 0.5 * np.power(alpha, n_runs - 1) * np.power(1.0 - alpha, ell - n_runs)
    return Distribution.over_words(ell, mass)


def _input_law(params, input, cap):
    if np.any(input.lengths != params.ell):
        raise DomainError('input distribution must be supported on words of length ell={}.'.format(params.ell))
    input.check_normalized()
    law = build_transition_law(params, inputs=input.bits, cap=cap)
    order = np.argsort(input.bits, kind='stable')
    return law, input.mass[order]


def output_distribution(params, input, cap=ENUMERATION_CAP):
    """P_Y(y) = sum_x P_X(x) Q(y|x), restricted to outputs of positive mass."""
    law, mass = _input_law(params, input, cap)
    output_mass = law.matrix.T.dot(mass)
    keep = output_mass > 0
    return Distribution(law.out_lengths[keep], law.out_bits[keep], output_mass[keep])


def mutual_information_exact(params, input, cap=ENUMERATION_CAP):
    """I(X;Y) = H(Y) - H(Y|X) in bits per block, by exact summation over the sparse law."""
    law, mass = _input_law(params, input, cap)
    h_y = metrics.entropy_bits(law.matrix.T.dot(mass))
    h_y_given_x = metrics.conditional_entropy_bits(law.matrix, mass)
    return max(0.0, h_y - h_y_given_x)


def markov_input_entropy(ell, alpha):
    """H(X^ell(alpha)) = 1 + (ell - 1) H_b(alpha)."""
    alpha = alpha_value(alpha)
    return 1.0 + (ell - 1) * metrics.entropy_bits([alpha, 1.0 - alpha])


def markov_word_mass(ell, j, alpha):
    """f(ell, j, alpha): probability of one particular length-ell word with j transitions."""
    return 0.5 * (1.0 - alpha) ** (ell - j - 1) * alpha ** j


def markov_short_output_mass(params, alpha, n_runs):
    """
    P_Y of one length-(ell-1) output with ``n_runs`` runs under the Markov input.

    Its ell+1 super-sequences extend one of its m runs, prepend/append an
    opposite bit, or split a run with an opposite bit.
    """
    alpha = alpha_value(alpha)
    ell, m = params.ell, n_runs
    if m < 1 or m > ell - 1:
        return 0.0
    return params.p_d * ((ell - 1 + m) * markov_word_mass(ell, m - 1, alpha)
                         + 2 * markov_word_mass(ell, m, alpha)
                         + (ell - 1 - m) * (markov_word_mass(ell, m + 1, alpha) if m + 1 < ell else 0.0))


def markov_long_output_mass(params, alpha, n_runs):
    """P_Y of one length-(ell+1) output with ``n_runs`` runs; zero for the alternating words."""
    alpha = alpha_value(alpha)
    ell, m = params.ell, n_runs
    if m < 1 or m > ell:
        return 0.0
    return (ell + 1 - m) * params.p_i * markov_word_mass(ell, m - 1, alpha)


def expected_run_log_sum(ell, alpha):
    """
    E[sum_i r_i log2 r_i] under X^ell(alpha).

    A run of length k < ell is expected alpha (1-alpha)^(k-1) (2 + (ell-k-1) alpha)
    times; the single run of length ell has probability (1-alpha)^(ell-1).
    """
    alpha = alpha_value(alpha)
    k = np.arange(1, ell, dtype=np.float64)
    counts = alpha * np.power(1.0 - alpha, k - 1) * (2.0 + (ell - k - 1) * alpha)
    whole = (1.0 - alpha) ** (ell - 1) * ell * math.log2(ell)
    return float(whole + np.sum(counts * xlogy(k, k)) / np.log(2))


def expected_run_log_sum_by_profiles(ell, alpha):
    """Same expectation, grouped by run count m through n''(k, m, ell)."""
    alpha = alpha_value(alpha)
    total = 0.0
    for m in range(1, ell + 1):
        inner = math.fsum(count_runs_of_length(k, m, ell) * k * math.log2(k) for k in range(2, ell + 1))
        total += markov_word_mass(ell, m - 1, alpha) * inner
    return total


def uniform_random_blocks(ell, count, seed):
    """``count`` uniform random blocks of length ell, reproducible from ``seed``."""
    rng = np.random.Generator(np.random.Philox(seed))
    return [BinaryWord(tuple(row)) for row in rng.integers(0, 2, size=(count, ell))]


def _block_draws(seed, index, ell):
    # Substream of block ``index``: Philox keyed by the seed, counter offset by the index.
    raw = np.random.Philox(key=seed, counter=index << 64).random_raw(2)
    return (int(raw[0]) >> 11) * 2.0 ** -53, int(raw[1]) % ell


def sample_segmented(params, blocks, seed, start_index=0):
    """
    Pass consecutive blocks through the segmented channel.

    :param params: ChannelParams of every block
    :param blocks: sequence of length-ell BinaryWords
    :param seed: 64-bit nonnegative integer
    :param start_index: global index of ``blocks[0]``; chunks generated with the
        right offsets concatenate to the single-call result.
    :return: (output word, error pattern with -1 deletion, 0 unchanged, +1 duplication)
    """
    if not 0 <= seed < 2 ** 64:
        raise DomainError('seed must be a 64-bit nonnegative integer, got {}.'.format(seed))
    ell = params.ell
    output, pattern = [], []
    for offset, block in enumerate(blocks):
        bits = _bits_of(block)
        if len(bits) != ell:
            raise DomainError('block {} has length {}, expected ell={}.'.format(offset, len(bits), ell))
        u, position = _block_draws(seed, start_index + offset, ell)
        if u < params.p:
            output.extend(bits[:position] + bits[position + 1:])
            pattern.append(-1)
        elif u < params.p + params.q:
            output.extend(bits[:position + 1] + bits[position:])
            pattern.append(1)
        else:
            output.extend(bits)
            pattern.append(0)
    return BinaryWord(tuple(output)), pattern


def split_segmented_output(output, pattern, ell):
    """Cut the channel output into per-block words using the error pattern."""
    words, start = [], 0
    for e in pattern:
        stop = start + ell + e
        words.append(BinaryWord(output.bits[start:stop]))
        start = stop
    if start != output.length:
        raise DomainError('error pattern does not match an output of length {}.'.format(output.length))
    return words


def law_deviation(params, block_outputs, input, min_expected=20.0, cap=ENUMERATION_CAP):
    """
    Largest |observed - expected| / standard error over output words.

    :param block_outputs: per-block outputs of blocks drawn i.i.d. from ``input``
    :param input: input Distribution the blocks were drawn from
    :param min_expected: words with fewer expected occurrences are skipped
    :return: (max deviation in standard errors, number of words checked)
    """
    law = output_distribution(params, input, cap=cap)
    counts = Counter((w.length, w.to_int()) for w in block_outputs)
    unexpected = set(counts) - set(zip(law.lengths.tolist(), law.bits.tolist()))
    if unexpected:
        raise DomainError('observed {} outputs that the law assigns zero mass.'.format(len(unexpected)))
    s = len(block_outputs)
    worst, checked = 0.0, 0
    for n, b, mass in zip(law.lengths, law.bits, law.mass):
        expected = s * mass
        if expected < min_expected:
            continue
        deviation = abs(counts.get((int(n), int(b)), 0) - expected) / math.sqrt(expected * (1.0 - mass))
        worst = max(worst, deviation)
        checked += 1
    return worst, checked
