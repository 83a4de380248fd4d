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
Samplers of parameter vectors given an observation. Any object with a 'draw' method can be
diagnosed; the two samplers here have a known calibration and validate the diagnostics themselves
"""

from typing import Optional, Protocol, Sequence

import numpy as np

from microCal.abm import samplePriorArray
from microCal.data import DEFAULT_BOX, GraphTrace, PriorBox


class Sampler(Protocol):
    def draw(self, observation: GraphTrace, n: int, rng: np.random.Generator) -> np.ndarray:
        """ Returns n parameter vectors as an (n, D) array """
        ...


class PriorSampler:
    """ Ignores the observation and samples the prior. Calibrated by construction """

    def __init__(self, box: PriorBox = DEFAULT_BOX):
        self.box = box

    def draw(self, observation: Optional[GraphTrace], n: int, rng: np.random.Generator) -> np.ndarray:
        return samplePriorArray(rng, n, self.box)


class ShrunkSampler:
    """
    Ignores the observation and samples a copy of the prior shrunk by 'scale' around a fixed point.
    Overconfident and biased whenever the point is not the truth
    """

    def __init__(self, center: Sequence[float], scale: float = 0.1, box: PriorBox = DEFAULT_BOX):
        self.center = np.asarray(center, dtype=np.float64)
        self.scale = scale
        self.box = box

    def draw(self, observation: Optional[GraphTrace], n: int, rng: np.random.Generator) -> np.ndarray:
        draws = self.center + self.scale * (samplePriorArray(rng, n, self.box) - self.box.center)
        lower, upper = np.asarray(self.box.lower), np.asarray(self.box.upper)
        return np.clip(draws, np.nextafter(lower, upper), np.nextafter(upper, lower))
