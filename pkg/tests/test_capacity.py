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
import numpy as np
import pytest
from numpy.testing import assert_allclose

from segcap.base import channel
from segcap.base.callbacks import BracketHistory
from segcap.base.channel import ChannelParams
from segcap.base.errors import DomainError
from segcap.base.seqcore import BinaryWord
from segcap.model import bounds, capacity
from segcap.model.capacity import simplex_grid


def test_small_case_capacity():
    solution = capacity.blahut_arimoto(ChannelParams(2, 1.0, 0.0), tol=1e-6)
    assert solution.converged
    assert abs(solution.capacity_bits_per_symbol - 0.5) <= 1e-5
    assert solution.lower_gap <= 0.5 + 1e-12 <= solution.upper_gap + 1e-12


def test_noiseless_capacity():
    solution = capacity.blahut_arimoto(ChannelParams(5, 0.0, 0.0))
    assert solution.converged
    assert_allclose(solution.capacity_bits_per_symbol, 1.0, atol=1e-9)


@pytest.mark.parametrize('ell', range(2, 11))
def test_capacity_sandwich(ell):
    alphas = [round(0.1 * k, 1) for k in range(1, 10)]
    for p, q in simplex_grid(0.1):
        params = ChannelParams(ell, p, q)
        solution = capacity.blahut_arimoto(params, tol=1e-6)
        upper = bounds.upper_bound_u(params)
        # the bracket always holds; the point estimate only once converged
        assert solution.lower_gap <= upper + 1e-9
        for alpha in alphas:
            assert bounds.lower_bound_markov(params, alpha) <= solution.upper_gap + 1e-9
        if not solution.converged:
            # slow pure-deletion edge at ell = 9, 10
            assert (p, q) == (1.0, 0.0), (ell, p, q)
            continue
        c_si = solution.capacity_bits_per_symbol
        for alpha in alphas:
            assert bounds.lower_bound_markov(params, alpha) <= c_si + 2e-6
        assert c_si <= upper + 1e-9


@pytest.mark.parametrize('p', [0.1, 0.5, 0.9])
def test_upper_bound_is_tight_at_two_bits(p):
    params = ChannelParams(2, p, 0.0)
    solution = capacity.blahut_arimoto(params, tol=1e-9)
    assert_allclose(solution.capacity_bits_per_symbol, bounds.upper_bound_u(params), atol=1e-8)


def test_two_bit_capacity_value():
    solution = capacity.blahut_arimoto(ChannelParams(2, 0.5, 0.0), tol=1e-9)
    assert_allclose(solution.capacity_bits_per_symbol, 0.6462, atol=1e-4)


def test_bracket_history_is_monotone():
    history = BracketHistory()
    solution = capacity.blahut_arimoto(ChannelParams(4, 0.3, 0.2), tol=1e-7, callbacks=[history])
    assert len(history.lower) == solution.iterations
    assert np.all(np.diff(history.lower) >= -1e-12)
    assert history.upper[-1] - history.lower[-1] <= 1e-7


def test_non_convergence_is_reported():
    solution = capacity.blahut_arimoto(ChannelParams(4, 0.3, 0.2), tol=1e-12, max_iter=3)
    assert not solution.converged
    assert solution.iterations == 3
    assert solution.lower_gap <= solution.upper_gap


def test_custom_initial_distribution():
    params = ChannelParams(3, 0.2, 0.1)
    init = channel.markov_input_distribution(3, 0.3)
    solution = capacity.blahut_arimoto(params, init=init, tol=1e-8)
    reference = capacity.blahut_arimoto(params, tol=1e-8)
    assert_allclose(solution.capacity_bits_per_symbol, reference.capacity_bits_per_symbol, atol=1e-8)
    solution.input_dist.check_normalized(tol=1e-9)
    with pytest.raises(DomainError):
        capacity.blahut_arimoto(params, init=channel.uniform_distribution(4))
    with pytest.raises(DomainError):
        capacity.blahut_arimoto(params, tol=0.0)


def test_segmented_bounds():
    params = ChannelParams(4, 0.2, 0.1)
    lower, upper, solution = capacity.segmented_bounds(params)
    assert_allclose(lower, solution.capacity_bits_per_symbol - bounds.entropy_hb(0.2, 0.1) / 4)
    assert lower < upper


def test_lagrange_optimal_input():
    params = ChannelParams(6, 0.2, 0.1)
    optimal = capacity.lagrange_optimal_input(params)
    optimal.check_normalized(tol=1e-12)
    uniform = channel.uniform_distribution(6)
    markov = channel.markov_input_distribution(6, 0.3)
    best = capacity.lagrange_objective(params, optimal)
    assert best >= capacity.lagrange_objective(params, uniform)
    assert best >= capacity.lagrange_objective(params, markov)
    # constant words have zero runlength entropy and the largest weight
    assert optimal.mass[0] == optimal.mass.max()

    edge = capacity.lagrange_optimal_input(ChannelParams(4, 0.5, 0.5))
    assert_allclose(edge.mass[[0, 15]], 0.5)
    assert edge.mass.sum() == 1.0


@pytest.mark.parametrize('ell,p,q', [(4, 0.2, 0.1), (6, 0.05, 0.3), (10, 0.4, 0.4)])
def test_lagrange_normalizer_is_the_upper_bound_partition(ell, p, q):
    params = ChannelParams(ell, p, q)
    optimal = capacity.lagrange_optimal_input(params)
    # the all-zero word has zero runlength entropy, so P*(0) = 1 / Z
    log2_z = -np.log2(optimal.mass[0])
    third = ell * bounds.upper_bound_u(params) - p * (ell - 1) - q * np.log2(2.0 ** (ell + 1) - 2)
    assert_allclose(params.stay * log2_z, third, atol=1e-12)
    assert_allclose(log2_z, bounds.log2_partition(ell, (p + q) / params.stay), atol=1e-12)


def test_maxent_output_slices():
    params = ChannelParams(3, 0.3, 0.2)
    short, long = capacity.maxent_output_slices(params)
    assert_allclose(short.total(), 0.3)
    assert_allclose(long.total(), 0.2)
    assert short.size == 4 and long.size == 16
    for word in ('0101', '1010'):
        assert long.mass_of(BinaryWord.from_string(word)) == 0.0
    assert_allclose(long.mass_of(BinaryWord.from_string('0011')), 0.2 / 14)


@pytest.mark.parametrize('ell', [2, 5, 9])
def test_maxent_slice_entropies(ell):
    params = ChannelParams(ell, 0.25, 0.15)
    short, long = capacity.maxent_output_slices(params)
    assert_allclose(channel.Distribution(short.lengths, short.bits, short.mass / 0.25).entropy(), ell - 1,
                    atol=1e-10)
    assert_allclose(channel.Distribution(long.lengths, long.bits, long.mass / 0.15).entropy(),
                    np.log2(2.0 ** (ell + 1) - 2), atol=1e-10)


def test_simplex_grid():
    assert simplex_grid(0.5) == [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 0.0), (0.5, 0.5), (1.0, 0.0)]
    assert len(simplex_grid(0.1)) == 66
    assert all(p + q <= 0.6 + 1e-9 for p, q in simplex_grid(0.1, max_sum=0.6))
    with pytest.raises(DomainError):
        simplex_grid(0.3)


@pytest.fixture(scope='module')
def default_grid_gaps():
    return {ell: capacity.relative_gaps(ell, max_pq_sum=0.6) for ell in range(2, 9)}


def test_relative_gaps_on_default_grid(default_grid_gaps):
    for ell, gaps in default_grid_gaps.items():
        assert not gaps.excluded
        assert gaps.delta_u_percent >= 0.0 and gaps.delta_l_percent >= 0.0
        assert set(gaps.to_row()) == {'ell', 'delta_u_percent', 'delta_l_percent'}
        if ell >= 4:
            assert gaps.delta_u_percent <= 5.5, ell
            assert gaps.delta_l_percent <= 5.5, ell
    # the upper gap is above 5.5% for the two shortest blocks
    assert_allclose(default_grid_gaps[2].delta_u_percent, 6.3, atol=0.1)
    assert default_grid_gaps[2].argmax_pq == (0.05, 0.55)
    assert_allclose(default_grid_gaps[3].delta_u_percent, 5.85, atol=0.1)


def test_relative_gaps_shrink_with_block_length(default_grid_gaps):
    for ell in range(2, 8):
        shorter, longer = default_grid_gaps[ell], default_grid_gaps[ell + 1]
        assert longer.delta_u_percent <= shorter.delta_u_percent + 0.5, ell
        assert longer.delta_l_percent <= shorter.delta_l_percent + 0.5, ell
    assert default_grid_gaps[8].delta_u_percent < default_grid_gaps[2].delta_u_percent


def test_upper_gap_vanishes_for_two_bit_deletions():
    assert capacity.max_p_within_gap(0.0, 2, p_grid_step=0.1) == 1.0


def test_uniform_input_is_far_from_optimal_for_short_blocks():
    assert capacity.uniform_vs_optimized_gap(2, 0.1, p_grid_step=0.1) >= 0.15
    assert capacity.uniform_vs_optimized_gap(8, 0.1, p_grid_step=0.1) <= 0.02
    with pytest.raises(DomainError):
        capacity.uniform_vs_optimized_gap(1, 0.1)


@pytest.mark.parametrize('p', [0.2, 0.6])
def test_uniform_vs_optimized_gap_without_side_information(p):
    gain = capacity.uniform_vs_optimized_gap_no_si(8, p)
    assert 0.0 <= gain < 0.0275


def test_documented_examples():
    solution = capacity.blahut_arimoto(ChannelParams(4, 0.0, 0.0))
    assert solution.iterations <= 2
    assert_allclose(solution.capacity_bits_per_symbol, 1.0)

    uniform = capacity.lagrange_optimal_input(ChannelParams(5, 0.0, 0.0))
    assert_allclose(uniform.mass, 2.0 ** -5)

    short, long = capacity.maxent_output_slices(ChannelParams(2, 0.0, 0.3))
    assert np.count_nonzero(long.mass) == 6
    assert_allclose(long.mass[long.mass > 0], 0.05)
    assert short.total() == 0.0

