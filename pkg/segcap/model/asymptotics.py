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
Large-ell expansions of the bounds and of the capacity, and their constants.

K = sum_{j>=1} j log2 j / 2^(j+1), K1 = log2(2e) - K, K2 = K - log2(e/2).
Logarithms are base 2; ``log e`` is log2 e.
"""
import functools
import math
from dataclasses import dataclass

import numpy as np

from segcap.base import metrics
from segcap.base.channel import ENUMERATION_CAP, ChannelParams, expected_run_log_sum
from segcap.base.errors import DomainError
from segcap.model import bounds, capacity

K_TOL = 1e-12
LOG2E = metrics.LOG2E
REGIMES = ('general', 'del_small', 'dup_small')
EXPANSION_KINDS = ('l_uniform', 'u', 'csi') + REGIMES
RESIDUAL_CONSTANT = 4.0


@dataclass(frozen=True)
class AsymptoticConstants:
    k: float
    k1: float
    k2: float
    terms: int
    tail_bound: float


@dataclass(frozen=True)
class ExpansionReport:
    params: ChannelParams
    kind: str
    expansion_value: float
    exact_value: float
    residual: float

    def to_row(self):
        return dict(ell=self.params.ell, p=self.params.p, q=self.params.q, kind=self.kind,
                    expansion_value=self.expansion_value, exact_value=self.exact_value, residual=self.residual)


def k_tail_bound(terms):
    """Bound on sum_{j>terms} j log2 j / 2^(j+1), from j log2 j <= j^2."""
    return math.ldexp(terms * terms + 4 * terms + 6, -(terms + 1))


def k_partial_sums(terms):
    j = np.arange(1, terms + 1, dtype=np.float64)
    return np.cumsum(j * np.log2(j) / np.exp2(j + 1))


@functools.lru_cache(maxsize=8)
def asymptotic_constants(tol=K_TOL):
    if tol <= 0:
        raise DomainError('tol must be positive, got {}.'.format(tol))
    terms = 1
    while k_tail_bound(terms) > tol:
        terms += 1
    k = math.fsum(math.ldexp(j * math.log2(j), -(j + 1)) for j in range(2, terms + 1))
    k1 = 1.0 + LOG2E - k
    # 2 - k1 equals k - log2(e/2) and keeps k1 + k2 == 2 exact in floating point.
    return AsymptoticConstants(k=k, k1=k1, k2=2.0 - k1, terms=terms, tail_bound=k_tail_bound(terms))


def constant_k(tol=K_TOL):
    return asymptotic_constants(tol).k


def constant_k1(tol=K_TOL):
    return asymptotic_constants(tol).k1


def constant_k2(tol=K_TOL):
    return asymptotic_constants(tol).k2


def bernoulli_klogk(n, s):
    """
    E[K log2 K] for K ~ Binomial(n, s) and its large-n approximation
    sn log2(sn) + (t + (s - 1)/2) log2 e, t = 1 - s.

    :return: (exact, asymptotic)
    """
    if n < 1 or not 0 < s <= 1:
        raise DomainError('need n >= 1 and s in (0, 1], got n={} s={}.'.format(n, s))
    t = 1.0 - s
    asymptotic = s * n * math.log2(s * n) + (t + (s - 1.0) / 2.0) * LOG2E
    return metrics.binomial_mean_klogk(n, s), asymptotic


def bernoulli_klogk_by_recurrence(n, s):
    """
    E[K log2 K] from the transform of log k: S2_n = n (S1_n - t S1_{n-1}),
    S1_n = E[log2 K] over K ~ Binomial(n, s) with the K = 0 term dropped.
    """
    t = 1.0 - s
    return n * (metrics.binomial_mean_logk(n, s) - t * metrics.binomial_mean_logk(n - 1, s))


def _check_block(params):
    if params.ell < 2:
        raise DomainError('expansions need ell > 1, got ell={}.'.format(params.ell))


def _first_order(params):
    _check_block(params)
    ell, p, q = params.ell, params.p, params.q
    k = constant_k()
    return 1.0 - (p + q) / ell * math.log2(ell) + p / ell * (k - 1.0) + q / ell * (k + 1.0)


def expansion_l_uniform(params):
    return _first_order(params)


def expansion_u(params):
    return _first_order(params)


def expansion_csi(params):
    """Error terms: (p+q) O(ell^-2) + O((p+q)^2 log^2 ell / ell)."""
    return _first_order(params)


def expansion_segmented(params, regime):
    """
    Capacity of the segmented channel without side information.

    general: 1 - (p+q) log ell / ell; del_small (q = 0): 1 + p_d log p_d - K1 p_d;
    dup_small (p = 0): 1 + p_i log p_i + K2 p_i.
    """
    _check_block(params)
    if regime == 'general':
        return 1.0 - (params.p + params.q) * math.log2(params.ell) / params.ell
    if regime == 'del_small':
        if params.q != 0:
            raise DomainError('regime del_small needs q = 0, got q={}.'.format(params.q))
        p_d = params.p_d
        return 1.0 + float(metrics.xlog2y(p_d, p_d)) - constant_k1() * p_d
    if regime == 'dup_small':
        if params.p != 0:
            raise DomainError('regime dup_small needs p = 0, got p={}.'.format(params.p))
        p_i = params.p_i
        return 1.0 + float(metrics.xlog2y(p_i, p_i)) + constant_k2() * p_i
    raise DomainError('--regime {} was not found.'.format(regime))


def mean_empirical_entropy_uniform(ell):
    """E[H(r(X))] for X uniform on {0,1}^ell."""
    return math.log2(ell) - expected_run_log_sum(ell, 0.5) / ell


def u_first_order(params):
    """
    U with log2 sum_x 2^(-c H) replaced by its first order ell - c E_unif[H]; the
    gap U - u_first_order is second order in c = (p+q)/(1-p-q) and nonnegative.
    """
    _check_block(params)
    ell, p, q = params.ell, params.p, params.q
    value = p * (ell - 1) + q * (ell + 1 + math.log1p(-math.ldexp(1.0, -ell)) * LOG2E)
    value += params.stay * ell - (p + q) * mean_empirical_entropy_uniform(ell)
    return value / ell


def residual_budget(params, constant=RESIDUAL_CONSTANT):
    """(p+q) c / ell^2 + (p+q)^2 log^2 ell / ell, the documented error of the expansions."""
    s, ell = params.p + params.q, params.ell
    return s * constant / ell ** 2 + s * s * math.log2(ell) ** 2 / ell


def geometric_tail_identity(terms):
    """sum_{j=1}^{terms} j / 2^(j+1); tends to 1."""
    return math.fsum(math.ldexp(j, -(j + 1)) for j in range(1, terms + 1))


def duplication_binomial_term(ell, q):
    """
    q / (ell^2 2^(ell-1)) sum_m m C(ell, m) log m and the approximation
    -q/ell + q log ell / ell it is replaced with.

    :return: (exact, approximation)
    """
    exact, _ = bernoulli_klogk(ell, 0.5)
    return 2.0 * q * exact / ell ** 2, -q / ell + q * math.log2(ell) / ell


def loglog_slope(xs, ys):
    """Least-squares slope of log|y| against log x."""
    return float(np.polyfit(np.log(np.asarray(xs, dtype=np.float64)),
                            np.log(np.abs(np.asarray(ys, dtype=np.float64))), 1)[0])


def _exact_value(params, kind, cap, ba_tol):
    if kind == 'l_uniform':
        return bounds.lower_bound_uniform(params)
    if kind == 'u':
        return bounds.upper_bound_u(params, cap=cap)
    if kind == 'csi':
        return capacity.blahut_arimoto(params, tol=ba_tol, cap=cap).capacity_bits_per_symbol
    return bounds.lower_bound_uniform(params) - bounds.entropy_hb(params.p, params.q) / params.ell


def expansion_report(params, kind, cap=ENUMERATION_CAP, ba_tol=capacity.DEFAULT_BA_TOL):
    """
    Expansion against its exact counterpart: L^0.5_SI for l_uniform, U for u,
    Blahut-Arimoto C_SI for csi, and L^0.5 without side information for the
    segmented regimes.
    """
    if kind not in EXPANSION_KINDS:
        raise DomainError('--kind {} was not found.'.format(kind))
    if kind in REGIMES:
        expansion = expansion_segmented(params, kind)
    else:
        expansion = _first_order(params)
    exact = _exact_value(params, kind, cap, ba_tol)
    return ExpansionReport(params=params, kind=kind, expansion_value=expansion, exact_value=exact,
                           residual=exact - expansion)
