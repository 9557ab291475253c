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
One-dimensional maximization.
"""
import math

import numpy as np
from absl import logging

PHI_RATIO = 2 / (1 + math.sqrt(5))


def maxgolden(f, x_lo, x_hi, tol=1e-8, max_iterations=200):
    """
    Golden-section search for the maximum of a unimodal f on [x_lo, x_hi].

    :return: dict(iterations, argmax, maximum, converged)
    """
    iteration = 0
    x1 = x_hi - PHI_RATIO * (x_hi - x_lo)
    x2 = x_lo + PHI_RATIO * (x_hi - x_lo)
    f1 = f(x1)
    f2 = f(x2)
    while iteration < max_iterations and abs(x_hi - x_lo) > tol:
        if f2 < f1:
            x_hi = x2
            x2 = x1
            f2 = f1
            x1 = x_hi - PHI_RATIO * (x_hi - x_lo)
            f1 = f(x1)
        else:
            x_lo = x1
            x1 = x2
            f1 = f2
            x2 = x_lo + PHI_RATIO * (x_hi - x_lo)
            f2 = f(x2)
        iteration += 1

    argmax, maximum = (x1, f1) if f1 >= f2 else (x2, f2)
    return dict(
        iterations=iteration,
        argmax=argmax,
        maximum=maximum,
        converged=not (math.isnan(f1) or math.isnan(f2) or iteration == max_iterations))


def grid_then_golden(f, x_lo, x_hi, grid_points=65, tol=1e-8, anchors=(), max_iterations=200):
    """
    Maximize f by a uniform grid, then golden-section inside the bracket of the
    best grid point. ``anchors`` are extra points that are always evaluated.

    :return: (argmax, maximum); the best of anchors, grid and refinement
    """
    best_x, best_f = None, -np.inf
    for x in anchors:
        fx = f(x)
        if fx > best_f:
            best_x, best_f = x, fx

    grid = np.linspace(x_lo, x_hi, grid_points)
    values = np.array([f(x) for x in grid])
    i = int(np.argmax(values))
    if values[i] > best_f:
        best_x, best_f = float(grid[i]), float(values[i])

    refined = maxgolden(f, float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid_points - 1)]),
                        tol=tol, max_iterations=max_iterations)
    if not refined['converged']:
        logging.warning('Golden-section refinement stopped after %d iterations near x=%g.', refined['iterations'],
                        refined['argmax'])
    if refined['maximum'] > best_f:
        best_x, best_f = refined['argmax'], refined['maximum']
    return best_x, best_f
