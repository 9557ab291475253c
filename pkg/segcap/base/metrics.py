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
Entropy helpers in bits. 0 log 0 = 0 everywhere.
"""
import numpy as np
from scipy.special import entr, xlogy
from scipy.stats import binom

LOG2E = 1.0 / np.log(2.0)


def neg_xlog2x(x):
    """-x log2 x, elementwise, 0 at x = 0."""
    return entr(x) * LOG2E


def xlog2y(x, y):
    return xlogy(x, y) * LOG2E


def entropy_bits(mass):
    """Shannon entropy of a (not necessarily normalized) mass vector."""
    mass = np.asarray(mass, dtype=np.float64)
    return float(np.sum(neg_xlog2x(mass)))


def row_sums(matrix, values):
    """Sum of ``values`` (aligned with ``matrix.data``) over each row of a CSR matrix."""
    counts = np.diff(matrix.indptr)
    rows = np.repeat(np.arange(matrix.shape[0]), counts)
    return np.bincount(rows, weights=values, minlength=matrix.shape[0])


def conditional_entropy_bits(matrix, input_mass):
    """H(Y|X) for a CSR transition matrix with rows indexed by inputs."""
    per_row = row_sums(matrix, neg_xlog2x(matrix.data))
    return float(np.dot(input_mass, per_row))


def binomial_mean_klogk(n, s):
    """E[K log2 K] for K ~ Binomial(n, s), with 0 log 0 = 0."""
    k = np.arange(n + 1, dtype=np.float64)
    return float(np.sum(binom.pmf(k, n, s) * xlogy(k, k)) * LOG2E)


def binomial_mean_logk(n, s):
    """E[log2 K] with the K = 0 term dropped."""
    k = np.arange(1, n + 1, dtype=np.float64)
    return float(np.sum(binom.pmf(k, n, s) * np.log2(k)))
