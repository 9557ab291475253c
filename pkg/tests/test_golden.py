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
from unittest import mock

from numpy.testing import assert_allclose

from segcap.utils import golden
from segcap.utils.golden import grid_then_golden, maxgolden


def test_maxgolden_finds_the_peak():
    result = maxgolden(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, tol=1e-9)
    assert result['converged']
    assert_allclose(result['argmax'], 0.3, atol=1e-6)
    assert_allclose(result['maximum'], 0.0, atol=1e-12)


def test_maxgolden_reports_exhausted_iterations():
    result = maxgolden(math.sin, 0.0, math.pi, tol=1e-12, max_iterations=5)
    assert not result['converged']
    assert result['iterations'] == 5


def test_grid_then_golden_escapes_local_maxima():
    def f(x):
        return math.exp(-((x - 0.15) / 0.02) ** 2) + 0.5 * math.exp(-((x - 0.7) / 0.2) ** 2)

    x, fx = grid_then_golden(f, 0.0, 1.0, grid_points=65, tol=1e-9)
    assert_allclose(x, 0.15, atol=1e-5)
    assert_allclose(fx, 1.0, atol=1e-3)


def test_grid_then_golden_keeps_anchors():
    x, fx = grid_then_golden(lambda v: 1.0 if v == 0.5 else 0.0, 0.0, 1.0, grid_points=4, anchors=(0.5,))
    assert x == 0.5
    assert fx == 1.0


def test_grid_then_golden_warns_when_refinement_runs_out():
    with mock.patch.object(golden.logging, 'warning') as warning:
        x, fx = grid_then_golden(lambda v: -(v - 0.3) ** 2, 0.0, 1.0, grid_points=11, tol=1e-12, max_iterations=3)
    warning.assert_called_once()
    assert_allclose(x, 0.3, atol=0.1)
    assert fx <= 0.0

    with mock.patch.object(golden.logging, 'warning') as warning:
        grid_then_golden(lambda v: -(v - 0.3) ** 2, 0.0, 1.0, grid_points=11, tol=1e-9)
    warning.assert_not_called()
