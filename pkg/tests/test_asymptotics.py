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
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from segcap.base.channel import ChannelParams
from segcap.base.errors import DomainError
from segcap.base.seqcore import empirical_entropy_table
from segcap.model import asymptotics, bounds


def test_constants():
    constants = asymptotics.asymptotic_constants()
    assert abs(constants.k - 1.2885) <= 5e-5
    assert abs(constants.k1 - 1.15416377) <= 1e-8
    assert abs(constants.k2 - 0.84583623) <= 1e-8
    assert constants.k1 + constants.k2 == 2.0
    assert constants.tail_bound <= asymptotics.K_TOL
    assert_allclose(asymptotics.constant_k2(), asymptotics.constant_k() - math.log2(math.e / 2), atol=1e-12)


def test_k_partial_sums_converge():
    partial = asymptotics.k_partial_sums(80)
    assert np.all(np.diff(partial) >= 0)
    assert_allclose(partial[-1], asymptotics.constant_k(), atol=2e-12)
    for terms in (5, 10, 20):
        assert asymptotics.constant_k() - partial[terms - 1] <= asymptotics.k_tail_bound(terms)


def test_constants_reject_bad_tolerance():
    with pytest.raises(DomainError):
        asymptotics.asymptotic_constants(0.0)


def test_geometric_tail_identity():
    assert_allclose(asymptotics.geometric_tail_identity(80), 1.0, atol=1e-15)


def test_bernoulli_klogk_residual_is_order_one_over_n():
    scaled = []
    for n in [16 * 2 ** k for k in range(9)]:
        exact, asymptotic = asymptotics.bernoulli_klogk(n, 0.5)
        scaled.append(n * abs(exact - asymptotic))
    assert max(scaled) / min(scaled) <= 3.0
    assert_allclose(scaled[-1], 0.18, atol=0.02)


@pytest.mark.parametrize('n,s', [(1, 0.5), (7, 0.3), (50, 0.5), (300, 0.9)])
def test_bernoulli_klogk_recurrence(n, s):
    exact, _ = asymptotics.bernoulli_klogk(n, s)
    assert_allclose(asymptotics.bernoulli_klogk_by_recurrence(n, s), exact, rtol=1e-10, atol=1e-12)


def test_bernoulli_klogk_domain():
    with pytest.raises(DomainError):
        asymptotics.bernoulli_klogk(0, 0.5)
    with pytest.raises(DomainError):
        asymptotics.bernoulli_klogk(10, 0.0)


def test_duplication_binomial_term():
    q, ell = 1.0, 256
    exact, approximation = asymptotics.duplication_binomial_term(ell, q)
    assert_allclose((exact - approximation) * ell ** 2, 0.5 * q * math.log2(math.e), atol=1e-2)


def test_expansion_sandwich_at_ell_10():
    params = ChannelParams(10, 0.01, 0.0)
    expansion = asymptotics.expansion_l_uniform(params)
    assert_allclose(expansion, 0.9969666, atol=1e-6)
    assert_allclose(bounds.lower_bound_uniform(params), 0.9967924, atol=1e-6)
    assert abs(bounds.lower_bound_uniform(params) - expansion) <= asymptotics.residual_budget(params)


def test_capacity_expansion_is_sandwiched_at_ell_10():
    params = ChannelParams(10, 0.01, 0.0)
    expansion = asymptotics.expansion_csi(params)
    slack = asymptotics.residual_budget(params)
    _, best = bounds.optimize_alpha(params)
    upper = bounds.upper_bound_u(params)
    assert best <= upper + 1e-12
    assert best - slack <= expansion <= upper + slack
    assert asymptotics.expansion_csi(ChannelParams(10, 0.0, 0.0)) == 1.0


def test_lower_bound_residual_is_second_order_in_ell():
    ells = [64, 128, 256, 512, 1024]
    residuals = [bounds.lower_bound_uniform(ChannelParams(ell, 0.1, 0.0))
                 - asymptotics.expansion_l_uniform(ChannelParams(ell, 0.1, 0.0)) for ell in ells]
    assert abs(asymptotics.loglog_slope(ells, residuals) + 2.0) <= 0.3


def test_upper_bound_residual_is_quadratic_in_p():
    ell = 1024
    ps = [0.04, 0.02, 0.01]
    curvature = []
    for p in ps:
        params = ChannelParams(ell, p, 0.0)
        upper = bounds.upper_bound_u(params)
        curvature.append(upper - asymptotics.u_first_order(params))
        assert abs(upper - asymptotics.expansion_u(params)) <= 4 * p / ell ** 2 + p * p * math.log2(ell) ** 2 / ell
    assert all(c > 0 for c in curvature)
    assert abs(asymptotics.loglog_slope(ps, curvature) - 2.0) <= 0.3


def test_first_order_upper_bound_is_below_the_bound():
    for p, q in [(0.1, 0.0), (0.05, 0.1), (0.3, 0.3)]:
        params = ChannelParams(8, p, q)
        assert asymptotics.u_first_order(params) <= bounds.upper_bound_u(params) + 1e-12


def test_mean_empirical_entropy_uniform():
    for ell in (2, 5, 9):
        assert_allclose(asymptotics.mean_empirical_entropy_uniform(ell), empirical_entropy_table(ell).mean(),
                        atol=1e-12)


@pytest.mark.parametrize('regime', ['del_small', 'dup_small'])
def test_small_error_regimes(regime):
    ells = [16, 32, 64, 128, 256, 512]
    scaled = []
    for ell in ells:
        p, q = (1.0 / ell, 0.0) if regime == 'del_small' else (0.0, 1.0 / ell)
        report = asymptotics.expansion_report(ChannelParams(ell, p, q), regime)
        scaled.append(report.residual * ell ** 3)
    assert all(np.sign(scaled) == np.sign(scaled[0]))
    assert max(np.abs(scaled)) / min(np.abs(scaled)) <= 3.0


def test_general_regime_expansion():
    params = ChannelParams(64, 0.1, 0.05)
    assert_allclose(asymptotics.expansion_segmented(params, 'general'), 1 - 0.15 * 6 / 64)
    with pytest.raises(DomainError):
        asymptotics.expansion_segmented(params, 'del_small')
    with pytest.raises(DomainError):
        asymptotics.expansion_segmented(params, 'dup_small')
    with pytest.raises(DomainError):
        asymptotics.expansion_segmented(params, 'tiny')


def test_expansion_report():
    params = ChannelParams(6, 0.05, 0.02)
    report = asymptotics.expansion_report(params, 'csi')
    assert_allclose(report.residual, report.exact_value - report.expansion_value)
    assert abs(report.residual) <= asymptotics.residual_budget(params, constant=8.0)
    row = report.to_row()
    assert row['kind'] == 'csi'
    with pytest.raises(DomainError):
        asymptotics.expansion_report(params, 'nope')
    with pytest.raises(DomainError):
        asymptotics.expansion_report(ChannelParams(1, 0.1, 0.0), 'u')


def test_documented_examples():
    assert asymptotics.bernoulli_klogk(1, 0.4)[0] == 0.0
    exact, asymptotic = asymptotics.bernoulli_klogk(20, 1.0)
    assert_allclose(exact, 20 * math.log2(20))
    assert_allclose(asymptotic, 20 * math.log2(20))

    noiseless = ChannelParams(16, 0.0, 0.0)
    assert asymptotics.expansion_l_uniform(noiseless) == 1.0
    assert asymptotics.expansion_u(noiseless) == 1.0
    assert asymptotics.expansion_csi(noiseless) == 1.0
    for regime in asymptotics.REGIMES:
        assert asymptotics.expansion_segmented(noiseless, regime) == 1.0
    assert_allclose(asymptotics.expansion_report(noiseless, 'u').residual, 0.0, atol=1e-12)
