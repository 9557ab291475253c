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
Capacity with side information C_SI by Blahut-Arimoto, the extremal
distributions behind the upper bound U, and the relative-gap metrics.

Author:
    The Segcap Authors
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from absl import logging
from scipy.special import logsumexp

from segcap.base import metrics
from segcap.base.channel import (ENUMERATION_CAP, SIMPLEX_SLACK, ChannelParams, Distribution, build_transition_law,
                                 check_enumeration, uniform_distribution)
from segcap.base.errors import DomainError
from segcap.base.seqcore import empirical_entropy_table
from segcap.model import bounds
from segcap.utils.converter import parallel_map

DEFAULT_BA_TOL = 1e-6
DEFAULT_MAX_ITER = 100000
DEFAULT_GRID_STEP = 0.05


@dataclass(frozen=True, eq=False)
class BASolution:
    """
    Blahut-Arimoto result. ``lower_gap`` and ``upper_gap`` bracket C_SI per
    symbol; the estimate equals ``lower_gap``.
    """
    params: ChannelParams
    capacity_bits_per_symbol: float
    input_dist: Distribution
    iterations: int
    lower_gap: float
    upper_gap: float
    converged: bool

    def to_row(self):
        return dict(ell=self.params.ell, p=self.params.p, q=self.params.q,
                    capacity_bits_per_symbol=self.capacity_bits_per_symbol,
                    lower_gap=self.lower_gap, upper_gap=self.upper_gap,
                    iterations=self.iterations, converged=self.converged)


@dataclass(frozen=True)
class GapReport:
    ell: int
    delta_u_percent: float
    delta_l_percent: float
    argmax_pq: Tuple[float, float]
    argmax_l_pq: Tuple[float, float] = (0.0, 0.0)
    excluded: List[Tuple[float, float]] = field(default_factory=list)

    def to_row(self):
        return dict(ell=self.ell, delta_u_percent=self.delta_u_percent, delta_l_percent=self.delta_l_percent)


def _initial_mass(ell, init):
    if init is None:
        return uniform_distribution(ell).mass.copy()
    if np.any(init.lengths != ell):
        raise DomainError('initial distribution must live on {0,1}^ell.')
    init.check_normalized()
    mass = np.zeros(2 ** ell)
    mass[init.bits] = init.mass
    return mass


def blahut_arimoto(params, tol=DEFAULT_BA_TOL, max_iter=DEFAULT_MAX_ITER, init=None, callbacks=None,
                   cap=ENUMERATION_CAP):
    """
    C_SI = max I(X^ell; Y) / ell over input distributions on {0,1}^ell.

    Each iteration computes D(x) = D(Q(.|x) || P_Y) for the current P, which
    gives I(P) = sum_x P(x) D(x) <= C <= max_x D(x), and then moves
    P(x) <- P(x) 2^D(x) / norm. Stops when max_x D - I <= tol (bits per block).

    :param init: starting Distribution on {0,1}^ell, uniform by default
    :param callbacks: IterationCallback instances
    :return: BASolution; ``converged`` is False when max_iter ran out
    """
    if tol <= 0:
        raise DomainError('tol must be positive, got {}.'.format(tol))
    check_enumeration(params.ell, cap)
    callbacks = list(callbacks or [])
    law = build_transition_law(params, cap=cap)
    q = law.matrix
    log_q = np.log2(q.data)
    mass = _initial_mass(params.ell, init)

    lower = upper = 0.0
    converged = False
    iteration = 0
    for iteration in range(1, int(max_iter) + 1):
        p_y = q.T.dot(mass)
        with np.errstate(divide='ignore'):
            divergence = metrics.row_sums(q, q.data * (log_q - np.log2(p_y[q.indices])))
        alive = mass > 0
        lower = float(np.dot(mass[alive], divergence[alive]))
        upper = float(np.max(divergence))
        logs = dict(lower=lower, upper=upper, width=upper - lower)
        for callback in callbacks:
            callback.on_iteration_end(iteration, logs)
        if upper - lower <= tol:
            converged = True
            break
        # zero-mass inputs stay at 0
        top = np.max(divergence[alive])
        mass = np.where(alive, mass * np.exp2(np.where(alive, divergence, top) - top), 0.0)
        mass /= mass.sum()

    if not converged:
        logging.warning('Blahut-Arimoto did not converge for ell=%d p=%g q=%g after %d iterations '
                        '(bracket width %.3g bits).', params.ell, params.p, params.q, iteration, upper - lower)
    for callback in callbacks:
        callback.on_run_end(dict(iterations=iteration, converged=converged))
    ell = params.ell
    return BASolution(params=params,
                      capacity_bits_per_symbol=lower / ell,
                      input_dist=Distribution.over_words(ell, mass),
                      iterations=iteration,
                      lower_gap=lower / ell,
                      upper_gap=upper / ell,
                      converged=converged)


def segmented_bounds(params, tol=DEFAULT_BA_TOL, max_iter=DEFAULT_MAX_ITER, cap=ENUMERATION_CAP):
    """
    C_SI - H_b(p, q) / ell <= C <= C_SI for the segmented channel without side information.

    :return: (lower, upper, BASolution)
    """
    solution = blahut_arimoto(params, tol=tol, max_iter=max_iter, cap=cap)
    c_si = solution.capacity_bits_per_symbol
    return c_si - bounds.entropy_hb(params.p, params.q) / params.ell, solution.upper_gap, solution


def lagrange_optimal_input(params, cap=ENUMERATION_CAP):
    """
    P*_X(x) proportional to 2^(-c H(r(x))), c = (p+q)/(1-p-q); uniform over the
    two constant words at p + q = 1.
    """
    ell = params.ell
    if ell < 2:
        raise DomainError('lagrange_optimal_input needs ell > 1.')
    check_enumeration(ell, cap)
    s = params.stay
    if s <= SIMPLEX_SLACK:
        mass = np.zeros(2 ** ell)
        mass[[0, 2 ** ell - 1]] = 0.5
        return Distribution.over_words(ell, mass)
    log_weight = -(params.p + params.q) / s * math.log(2.0) * empirical_entropy_table(ell)
    return Distribution.over_words(ell, np.exp(log_weight - logsumexp(log_weight)))


def lagrange_objective(params, input):
    """(1-p-q) H(P_X) - (p+q) E_P[H(r(X))], the part of I(X;Y) that P*_X maximizes."""
    entropies = empirical_entropy_table(params.ell)[input.bits]
    return params.stay * input.entropy() - (params.p + params.q) * float(np.dot(input.mass, entropies))


def maxent_output_slices(params, cap=ENUMERATION_CAP):
    """
    Uniform mass p over the 2^(ell-1) short outputs and q over the 2^(ell+1) - 2
    non-alternating long outputs.

    :return: (short slice, long slice), sub-probability Distributions
    """
    ell = params.ell
    if ell < 2:
        raise DomainError('maxent_output_slices needs ell >= 2.')
    check_enumeration(ell, cap)
    short = Distribution.over_words(ell - 1, np.full(2 ** (ell - 1), params.p / 2 ** (ell - 1)))
    long_mass = np.full(2 ** (ell + 1), params.q / (2 ** (ell + 1) - 2))
    alternating = int(('01' * (ell + 1))[:ell + 1], 2)
    long_mass[[alternating, alternating ^ (2 ** (ell + 1) - 1)]] = 0.0
    return short, Distribution.over_words(ell + 1, long_mass)


def simplex_grid(step, max_sum=1.0):
    """(p, q) pairs on the step grid with p + q <= max_sum, p outer, q inner."""
    n = int(round(1.0 / step))
    if n < 1 or abs(n * step - 1.0) > 1e-9:
        raise DomainError('grid step {} must divide 1.'.format(step))
    return [(i / n, j / n) for i in range(n + 1) for j in range(n + 1 - i) if (i + j) / n <= max_sum + 1e-9]


def _gap_point(args):
    ell, p, q, ba_tol, max_iter, cap = args
    params = ChannelParams(ell, p, q)
    solution = blahut_arimoto(params, tol=ba_tol, max_iter=max_iter, cap=cap)
    _, l_best = bounds.optimize_alpha(params)
    return p, q, solution.capacity_bits_per_symbol, bounds.upper_bound_u(params, cap=cap), l_best, solution.converged


def relative_gaps(ell, pq_grid_step=DEFAULT_GRID_STEP, ba_tol=DEFAULT_BA_TOL, max_pq_sum=1.0,
                  max_iter=DEFAULT_MAX_ITER, jobs=1, cap=ENUMERATION_CAP):
    """
    Grid maxima of (U - C_SI) / C_SI and (C_SI - max_alpha L^alpha_SI) / C_SI, in
    percent. Grid maxima are lower bounds on the true maxima. Points where
    Blahut-Arimoto does not converge are left out and listed in ``excluded``.
    """
    check_enumeration(ell, cap)
    points = [(ell, p, q, ba_tol, max_iter, cap) for p, q in simplex_grid(pq_grid_step, max_pq_sum)]
    delta_u = delta_l = 0.0
    argmax_u = argmax_l = (0.0, 0.0)
    excluded = []
    for p, q, c_si, upper, l_best, converged in parallel_map(_gap_point, points, jobs=jobs):
        if not converged:
            excluded.append((p, q))
            continue
        assert c_si > 0, 'C_SI vanished at ell={} p={} q={}'.format(ell, p, q)
        gap_u = 100.0 * (upper - c_si) / c_si
        gap_l = 100.0 * (c_si - l_best) / c_si
        if gap_u > delta_u:
            delta_u, argmax_u = gap_u, (p, q)
        if gap_l > delta_l:
            delta_l, argmax_l = gap_l, (p, q)
    if excluded:
        logging.warning('ell=%d: %d grid points excluded, Blahut-Arimoto did not converge.', ell, len(excluded))
    return GapReport(ell=ell, delta_u_percent=delta_u, delta_l_percent=delta_l, argmax_pq=argmax_u,
                     argmax_l_pq=argmax_l, excluded=excluded)


def _p_ladder(q, step):
    top = 1.0 - q
    ladder = [k * step for k in range(int(math.floor(top / step + 1e-9)) + 1)]
    if top - ladder[-1] > 1e-9:
        ladder.append(top)
    return ladder


def uniform_vs_optimized_gap(ell, q, p_grid_step=DEFAULT_GRID_STEP):
    """max over p in [0, 1-q] of (max_alpha L^alpha_SI - L^0.5_SI) / max_alpha L^alpha_SI."""
    if not 0.0 <= q <= 1.0 or ell < 2:
        raise DomainError('need q in [0, 1] and ell > 1, got q={} ell={}.'.format(q, ell))
    gap = 0.0
    for p in _p_ladder(q, p_grid_step):
        params = ChannelParams(ell, min(p, 1.0 - q), q)
        _, best = bounds.optimize_alpha(params)
        if best > 0:
            gap = max(gap, (best - bounds.lower_bound_uniform(params)) / best)
    return gap


def uniform_vs_optimized_gap_no_si(ell, p, q=0.0):
    """(max_alpha L^alpha - L^0.5) / max_alpha L^alpha without side information; 0 when the bound is void."""
    params = ChannelParams(ell, p, q)
    _, best = bounds.optimize_alpha(params)
    correction = bounds.entropy_hb(params.p, params.q) / params.ell
    best_no_si = best - correction
    if best_no_si <= 0:
        return 0.0
    return (best_no_si - (bounds.lower_bound_uniform(params) - correction)) / best_no_si


def max_p_within_gap(q, ell, threshold=0.01, p_grid_step=DEFAULT_GRID_STEP, ba_tol=DEFAULT_BA_TOL,
                     cap=ENUMERATION_CAP) -> Optional[float]:
    """
    Largest grid p in [0, 1-q] with (U - C_SI) / C_SI <= threshold, or None if
    no grid point qualifies.
    """
    best = None
    for p in _p_ladder(q, p_grid_step):
        params = ChannelParams(ell, min(p, 1.0 - q), q)
        solution = blahut_arimoto(params, tol=ba_tol, cap=cap)
        if not solution.converged:
            continue
        c_si = solution.capacity_bits_per_symbol
        if (bounds.upper_bound_u(params, cap=cap) - c_si) / c_si <= threshold:
            best = params.p
    return best

