# -*- coding: utf-8 -*-
#
# License:      GPL-3.0-or-later
# Version:      0.1
#
# This file is part of MicroCal.
#
# MicroCal is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# any later version.
#
# MicroCal is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with MicroCal.  If not, see <https://www.gnu.org/licenses/>.

"""
Shared validation of command options
"""

from typing import List, Optional, Tuple

from microCal import exceptions as exp
from microCal.data import ModelParams

Errors = List[Tuple[str, str]]


def checkRequired(errors: Errors, key: str, value, what: str) -> None:
    if value is None or (isinstance(value, str) and not value.strip()):
        errors.append((key, 'Error: {} must be specified'.format(what)))


def checkSeed(errors: Errors, key: str, seed: Optional[int]) -> None:
    if seed is not None and not 0 <= seed < 2 ** 64:
        errors.append((key, 'Error: seed must be a 64-bit unsigned integer'))


def checkPositive(errors: Errors, key: str, value: Optional[int], allowZero: bool = False) -> None:
    if value is not None and (value < 0 or (value == 0 and not allowZero)):
        errors.append((key, 'Error: value must be {}'.format('non negative' if allowZero else 'positive')))


def parseParams(errors: Errors, key: str, text: Optional[str]) -> Optional[ModelParams]:
    """ Parses "rho,eps,lam,p_init". Returns None and records an error if malformed """
    if text is None:
        return None
    if isinstance(text, ModelParams):
        return text
    try:
        return ModelParams.parse(text)
    except exp.DomainError as e:
        errors.append((key, 'Error: {}'.format(e)))
        return None
