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

import hashlib
import json
from typing import Any, Dict

import numpy as np
import torch

# Spawn keys reserved for the streams drawn from one task seed
PRIOR_KEY = 1
TORCH_KEY = 2
SPLIT_KEY = 3
BATCH_KEY = 4
SBC_KEY = 5
PPC_KEY = 6


def deriveSeed(seed: int, *keys: int) -> int:
    """
    Derive a 64-bit seed from a root seed and a path of integer keys. Different key paths give
    statistically independent streams, and the same path always gives the same seed

    :param seed: the root seed (non-negative)
    :param keys: the spawn path

    :return: an integer in [0, 2**64)

    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def streamFor(seed: int, *keys: int) -> np.random.Generator:
    """ Returns a numpy generator for the stream identified by 'seed' and the spawn path 'keys' """
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))))


def torchGenerator(seed: int, *keys: int) -> torch.Generator:
    """ Returns a CPU torch generator seeded from the stream identified by 'seed' and 'keys' """
    g = torch.Generator()
    # torch seeds must fit in a signed 64 bit integer
    g.manual_seed(deriveSeed(seed, *keys) >> 1)
    return g


def canonicalJson(obj: Any, indent: int = 2) -> str:
    """ Dumps an object with sorted keys, so the text is stable across runs """
    return json.dumps(obj, sort_keys=True, indent=indent, ensure_ascii=False, allow_nan=False)


def configHash(section: Dict[str, Any]) -> str:
    """ SHA-256 hex digest of the canonical JSON of a configuration section """
    text = json.dumps(section, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()
