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

import json
from typing import Any, Dict

import numpy as np

from microCal import exceptions as exp
from microCal.utils import canonicalJson

REPORT_SCHEMA_VERSION = 1
SAMPLES_DTYPE = '<f8'


def writeJson(path: str, content: Dict[str, Any]) -> None:
    """ Writes a report with sorted keys. A missing schema version is added """
    content = {'schema_version': REPORT_SCHEMA_VERSION, **content}
    try:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(canonicalJson(content) + '\n')
    except OSError as e:
        raise exp.StoreError('Cannot write report {}: {}'.format(path, e))


def readJson(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise exp.StoreError('Cannot read report {}: {}'.format(path, e))
    except json.JSONDecodeError as e:
        raise exp.StoreError('Malformed report {}: {}'.format(path, e))


def withoutTiming(report: Dict[str, Any]) -> Dict[str, Any]:
    """ The reproducible part of a report """
    return {k: v for k, v in report.items() if k != 'timing'}


def writeSamples(path: str, samples: np.ndarray) -> None:
    """ Writes an (n, D) array as flat little-endian float64 """
    try:
        with open(path, 'wb') as f:
            f.write(np.ascontiguousarray(samples, dtype=SAMPLES_DTYPE).tobytes())
    except OSError as e:
        raise exp.StoreError('Cannot write samples {}: {}'.format(path, e))


def readSamples(path: str, nDims: int = 4) -> np.ndarray:
    try:
        values = np.fromfile(path, dtype=SAMPLES_DTYPE)
    except OSError as e:
        raise exp.StoreError('Cannot read samples {}: {}'.format(path, e))
    if values.size % nDims:
        raise exp.StoreError('{} holds {:d} values, not a multiple of {:d}'.format(path, values.size, nDims))
    return values.reshape(-1, nDims)
