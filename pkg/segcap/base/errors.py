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
Exceptions raised by segcap.

All of them are ValueErrors, so callers that only care about bad input can
catch ValueError.
"""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PackedOverflowError(DomainError):
    """Exact integer arithmetic was requested beyond the 63-bit packed limit."""


class EnumerationCapError(DomainError):
    """Full enumeration of {0,1}^ell was requested above the enumeration cap."""

    def __init__(self, ell, cap):
        super(EnumerationCapError, self).__init__(
            'ell={} is above the enumeration cap {} (raise --max_enum_ell).'.format(ell, cap))
        self.ell = ell
        self.cap = cap
