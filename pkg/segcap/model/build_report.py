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
Build a BoundsReport for one parameter point under an alpha mode.
"""
from segcap.base.channel import ENUMERATION_CAP
from segcap.model import bounds

ALPHA_MODES = ('fixed', 'optimize', 'uniform')


def BuildReport(params, alpha_mode, alpha=None, tol=1e-6, cap=ENUMERATION_CAP):
    if alpha_mode == 'fixed':
        if alpha is None:
            raise ValueError('--alpha is required with alpha mode fixed.')
        chosen = alpha
    elif alpha_mode == 'optimize':
        chosen, _ = bounds.optimize_alpha(params, tol=tol)
    elif alpha_mode == 'uniform':
        chosen = 0.5
    else:
        raise ValueError('--alpha_mode {} was not found.'.format(alpha_mode))
    return bounds.bounds_report(params, chosen, cap=cap)
