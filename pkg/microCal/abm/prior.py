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

import numpy as np

from microCal.data import DEFAULT_BOX, ModelParams, PriorBox


def samplePriorArray(rng: np.random.Generator, n: int, box: PriorBox = DEFAULT_BOX) -> np.ndarray:
    """
    Draw 'n' independent parameter vectors from the uniform prior over 'box'

    :return: array with shape (n, D), every row strictly inside the box

    """
    lower = np.asarray(box.lower, dtype=np.float64)
    upper = np.asarray(box.upper, dtype=np.float64)
    draws = rng.uniform(lower, upper, size=(n, box.nDims))
    # uniform() may return the lower bound, the support is open
    return np.clip(draws, np.nextafter(lower, upper), np.nextafter(upper, lower))


def samplePrior(rng: np.random.Generator, box: PriorBox = DEFAULT_BOX) -> ModelParams:
    """ Draw one parameter vector (rho, eps, lam, p_init) from the uniform prior """
    return ModelParams.fromArray(samplePriorArray(rng, 1, box)[0])
