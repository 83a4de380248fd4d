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

from typing import Tuple

import numpy as np

from microCal import exceptions as exp
from microCal.data.Shape import Shape


class GraphTrace:
    """
    Full microdata of one simulation: opinions z with shape (T+1, N, K) and entries in {-1, +1},
    and tie weights w with shape (T+1, N, N), symmetric with zero diagonal and entries in [-1, 1].
    Step 0 is the initial snapshot
    """

    def __init__(self, z: np.ndarray, w: np.ndarray):
        z = np.asarray(z)
        w = np.asarray(w)
        if z.ndim != 3 or w.ndim != 3:
            raise exp.TraceValidationError('Trace arrays must be 3-dimensional, got z{} and w{}'
                                           .format(z.shape, w.shape))
        if z.shape[:2] != w.shape[:2] or w.shape[1] != w.shape[2]:
            raise exp.TraceValidationError('Inconsistent trace shapes z{} and w{}'
                                           .format(z.shape, w.shape))
        self.__z: np.ndarray = z.astype(np.int8, copy=False)
        self.__w: np.ndarray = w

    @property
    def z(self) -> np.ndarray:
        return self.__z

    @property
    def w(self) -> np.ndarray:
        return self.__w

    @property
    def nAgents(self) -> int:
        return self.__z.shape[1]

    @property
    def nTopics(self) -> int:
        return self.__z.shape[2]

    @property
    def nSteps(self) -> int:
        return self.__z.shape[0] - 1

    @property
    def shape(self) -> Shape:
        """ The (N, K, T) fingerprint of the trace """
        return Shape(self.nAgents, self.nTopics, self.nSteps)

    def snapshot(self, t: int) -> Tuple[np.ndarray, np.ndarray]:
        """ Opinions and ties at step t """
        return self.__z[t], self.__w[t]

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphTrace) and np.array_equal(self.__z, other.__z) and \
            np.array_equal(self.__w, other.__w)

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def validate(self, atol: float = 0.0) -> 'GraphTrace':
        """
        Check every invariant at every step: opinions in {-1, +1}, ties symmetric with zero
        diagonal and entries in [-1, 1]

        :param atol: tolerance on symmetry and bounds (0 means exact)

        :return: self, to allow chaining
        :raise TraceValidationError: at the first offending step

        """
        for t in range(self.nSteps + 1):
            zt, wt = self.snapshot(t)
            if not np.all(np.abs(zt) == 1):
                raise exp.TraceValidationError('Opinions outside {{-1, +1}} at step {:d}'.format(t), t)
            if not np.all(np.isfinite(wt)):
                raise exp.TraceValidationError('Non finite tie weights at step {:d}'.format(t), t)
            if np.max(np.abs(wt - wt.T)) > atol:
                raise exp.TraceValidationError('Tie matrix is not symmetric at step {:d}'.format(t), t)
            if np.any(np.diagonal(wt) != 0):
                raise exp.TraceValidationError('Tie matrix has non zero diagonal at step {:d}'
                                               .format(t), t)
            if np.max(np.abs(wt)) > 1 + atol:
                raise exp.TraceValidationError('Tie weights outside [-1, 1] at step {:d}'.format(t), t)
        return self
