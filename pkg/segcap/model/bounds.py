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
Analytical bounds on the capacity of the segmented deletion/duplication channel.

All values are in bits per channel input symbol. ``L_SI`` bounds the capacity
with side information from below (Markov input), ``U`` from above, and
``L = L_SI - H_b(p, q) / ell`` bounds the capacity without side information.

Author:
    The Segcap Authors
"""
import math
from dataclasses import asdict, dataclass

import numpy as np
from absl import logging
from scipy.special import logsumexp
from scipy.stats import binom

from segcap.base import metrics
from segcap.base.channel import (ENUMERATION_CAP, SIMPLEX_SLACK, ChannelParams, alpha_value,
                                 expected_run_log_sum, markov_input_distribution, mutual_information_exact)
from segcap.base.errors import DomainError
from segcap.base.seqcore import empirical_entropy_table
from segcap.utils.golden import grid_then_golden

ALPHA_MIN = 1e-3
ALPHA_GRID_POINTS = 65
LN2 = math.log(2.0)


def entropy_hb(p, q=None):
    """
    H_b(p, q) = -p log p - q log q - (1-p-q) log(1-p-q); with one argument the
    binary entropy of p.
    """
    q = 0.0 if q is None else q
    if not (p >= 0 and q >= 0 and p + q <= 1 + SIMPLEX_SLACK):
        raise DomainError('(p, q) = ({}, {}) is outside the simplex.'.format(p, q))
    return metrics.entropy_bits([p, q, max(0.0, 1.0 - p - q)])


def _check_block(params):
    if params.ell < 2:
        raise DomainError('closed-form bounds need ell > 1, got ell={}.'.format(params.ell))


def lower_bound_markov_terms(params, alpha):
    """
    Closed-form pieces of I(X^ell(alpha); Y) in bits per block.

    Y splits by length into the unchanged slice (mass 1-p-q, a scaled copy of
    P_X), the short slice (mass p) and the long slice (mass q); within the short
    and long slices P_Y depends on a word only through its run count m.

    :return: dict(same, short, long, noise) with I = same + short + long - noise
    """
    ell, p, q = params.ell, params.p, params.q
    s = params.stay
    log_a, log_b = math.log2(alpha), math.log2(1.0 - alpha)

    same = s * (1.0 + (ell - 1) * entropy_hb(alpha)) + float(metrics.neg_xlog2x(s))

    short = 0.0
    if p > 0:
        # m runs, m = 1..ell-1: ell+1 super-sequences weighted by f(ell, m-1+k, alpha)
        m = np.arange(1, ell, dtype=np.float64)
        rho = alpha / (1.0 - alpha)
        g = (ell - 1 + m) + 2.0 * rho + (ell - 1 - m) * rho * rho
        mass = params.p_d * g * (1.0 - alpha) * binom.pmf(m - 1, ell - 2, alpha)
        log_word = math.log2(params.p_d) + np.log2(g) - 1.0 + (ell - m) * log_b + (m - 1) * log_a
        short = float(-np.sum(mass * log_word))

    long = 0.0
    if q > 0:
        # j + 1 runs, j = 0..ell-1; the alternating length-(ell+1) words are unreachable
        j = np.arange(ell, dtype=np.float64)
        mass = params.p_i * (ell - j) * binom.pmf(j, ell, alpha) / (1.0 - alpha)
        log_word = np.log2((ell - j) * params.p_i) - 1.0 + (ell - j - 1) * log_b + j * log_a
        long = float(-np.sum(mass * log_word))

    noise = entropy_hb(p, q) + (p + q) * math.log2(ell) - (p + q) / ell * expected_run_log_sum(ell, alpha)
    return dict(same=same, short=short, long=long, noise=noise)


def evaluate_lower_bound_markov(params, alpha, cap=ENUMERATION_CAP):
    """
    L^alpha_SI and whether the enumeration fallback was used.

    The closed form is used for alpha in [ALPHA_MIN, 1 - ALPHA_MIN]; outside it
    I(X^ell(alpha); Y) / ell is enumerated, which needs ell <= cap.
    """
    _check_block(params)
    alpha = alpha_value(alpha)
    if ALPHA_MIN <= alpha <= 1.0 - ALPHA_MIN:
        terms = lower_bound_markov_terms(params, alpha)
        return (terms['same'] + terms['short'] + terms['long'] - terms['noise']) / params.ell, False
    logging.info('alpha=%g outside [%g, %g], enumerating ell=%d', alpha, ALPHA_MIN, 1 - ALPHA_MIN, params.ell)
    input = markov_input_distribution(params.ell, alpha, cap=cap)
    return mutual_information_exact(params, input, cap=cap) / params.ell, True


def lower_bound_markov(params, alpha, cap=ENUMERATION_CAP):
    return evaluate_lower_bound_markov(params, alpha, cap=cap)[0]


def lower_bound_uniform(params):
    """L^0.5_SI, the i.i.d. uniform input specialization."""
    _check_block(params)
    ell, p, q = params.ell, params.p, params.q
    log_ell = math.log2(ell)
    # sum_m m C(ell, m) log m / 2^(ell-1) = 2 E[M log M], M ~ Bin(ell, 1/2)
    binomial_term = q * 2.0 * metrics.binomial_mean_klogk(ell, 0.5) / ell ** 2
    run_term = math.fsum((ell - j + 3) * math.ldexp(j * math.log2(j), -(j + 1)) for j in range(2, ell))
    return (1.0 - p / ell - binomial_term
            - (p - math.ldexp(p + q, -(ell - 1))) * log_ell / ell
            + (p + q) * run_term / ell ** 2)


def log2_partition_by_compositions(ell, c):
    """
    log2 of sum over {0,1}^ell of 2^(-c H(r(x))), H the empirical runlength entropy.

    2^(-c H) = ell^(-c) prod_i 2^(c r_i log r_i / ell) factors over runs, so the
    sum is 2 ell^(-c) 2^ell B[ell] with B[n] = sum_r v(r) B[n - r], B[0] = 1 and
    v(r) = 2^(c r log r / ell - r), summed over compositions of ell.
    """
    r = np.arange(1, ell + 1, dtype=np.float64)
    log_v = LN2 * (c * r * np.log2(r) / ell - r)
    log_b = np.zeros(ell + 1)
    for n in range(1, ell + 1):
        log_b[n] = logsumexp(log_v[:n] + log_b[n - 1::-1])
    return 1.0 + ell - c * math.log2(ell) + log_b[ell] / LN2


def log2_partition(ell, c, cap=ENUMERATION_CAP):
    """log2 sum_x 2^(-c H(r(x))); direct enumeration for ell <= cap."""
    if ell > cap:
        return log2_partition_by_compositions(ell, c)
    return float(logsumexp(-c * LN2 * empirical_entropy_table(ell)) / LN2)


def upper_bound_u(params, cap=ENUMERATION_CAP):
    """
    U = [p (ell-1) + q log2(2^(ell+1) - 2) + (1-p-q) log2 sum_x 2^(-c H(r(x)))] / ell,
    c = (p+q)/(1-p-q). At p + q = 1 the last term vanishes.
    """
    _check_block(params)
    ell, p, q = params.ell, params.p, params.q
    value = p * (ell - 1) + q * (ell + 1 + math.log1p(-math.ldexp(1.0, -ell)) / LN2)
    s = params.stay
    if s > SIMPLEX_SLACK:
        value += s * log2_partition(ell, (p + q) / s, cap=cap)
    return value / ell


def lower_bound_no_si(params, alpha, cap=ENUMERATION_CAP):
    """L^alpha = L^alpha_SI - H_b(p, q) / ell; may be negative."""
    return lower_bound_markov(params, alpha, cap=cap) - entropy_hb(params.p, params.q) / params.ell


def optimize_alpha(params, tol=1e-6, grid_points=ALPHA_GRID_POINTS):
    """
    Maximize L^alpha_SI over [ALPHA_MIN, 1 - ALPHA_MIN].

    :return: (alpha*, L^alpha*_SI); never below the alpha = 0.5 value
    """
    _check_block(params)
    if tol <= 0:
        raise DomainError('tol must be positive, got {}.'.format(tol))
    return grid_then_golden(lambda a: lower_bound_markov(params, a), ALPHA_MIN, 1.0 - ALPHA_MIN,
                            grid_points=grid_points, tol=tol, anchors=(0.5,))


@dataclass(frozen=True)
class BoundsReport:
    params: ChannelParams
    alpha: float
    l_si_alpha: float
    l_si_uniform: float
    upper_u: float
    upper_u_raw: float
    l_no_si: float
    l_no_si_raw: float
    hb_pq: float
    alpha_fallback: bool = False

    def to_row(self):
        row = dict(ell=self.params.ell, p=self.params.p, q=self.params.q)
        row.update((k, v) for k, v in asdict(self).items() if k != 'params')
        return row


def bounds_report(params, alpha, cap=ENUMERATION_CAP):
    """
    All bounds of one (params, alpha) point. ``upper_u`` and ``l_no_si`` are
    clamped to [0, 1]; the unclamped values are kept in the ``_raw`` fields.
    """
    l_si_alpha, fallback = evaluate_lower_bound_markov(params, alpha, cap=cap)
    upper = upper_bound_u(params, cap=cap)
    hb_pq = entropy_hb(params.p, params.q)
    raw = l_si_alpha - hb_pq / params.ell
    return BoundsReport(params=params,
                        alpha=alpha_value(alpha),
                        l_si_alpha=l_si_alpha,
                        l_si_uniform=lower_bound_uniform(params),
                        upper_u=min(1.0, upper),
                        upper_u_raw=upper,
                        l_no_si=max(0.0, raw),
                        l_no_si_raw=raw,
                        hb_pq=hb_pq,
                        alpha_fallback=fallback)
