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

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from microCal import exceptions as exp
from microCal.data import DEFAULT_BOX, ModelParams, PriorBox

CORNER_SCHEMA_VERSION = 1


@dataclass
class CornerData:
    """
    Histograms of posterior samples over the prior box: one per dimension and one per pair of
    dimensions (i < j). counts2d[(i, j)][a, b] counts samples in bin a of dimension i and bin b of j
    """
    names: Tuple[str, ...]
    ranges: List[Tuple[float, float]]
    edges: List[np.ndarray]
    counts: List[np.ndarray]
    counts2d: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    truth: Optional[np.ndarray] = None
    nSamples: int = 0

    @property
    def bins(self) -> int:
        return len(self.counts[0]) if self.counts else 0

    def serialize(self) -> Dict[str, Any]:
        return {
            'schema_version': CORNER_SCHEMA_VERSION,
            'n_samples': self.nSamples,
            'bins': self.bins,
            'parameters': [{'name': name, 'range': [float(a), float(b)],
                            'edges': [float(e) for e in edges], 'counts': [int(c) for c in counts],
                            'truth': None if self.truth is None else float(self.truth[i])}
                           for i, (name, (a, b), edges, counts)
                           in enumerate(zip(self.names, self.ranges, self.edges, self.counts))],
            'pairs': [{'x': self.names[i], 'y': self.names[j], 'counts': c.astype(int).tolist()}
                      for (i, j), c in sorted(self.counts2d.items())],
            'truth': None if self.truth is None else [float(v) for v in self.truth]
        }


def cornerData(samples: np.ndarray, bins: int = 30, truth: Optional[ModelParams] = None,
               box: PriorBox = DEFAULT_BOX) -> CornerData:
    """
    Bins the samples over exactly the ranges of the prior box

    :param samples: array (n, D) with n > 0
    :param bins: number of bins per dimension
    :param truth: optional true parameters, copied through as markers
    :param box: the prior box giving the histogram ranges

    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0 or samples.shape[1] != box.nDims:
        raise exp.UsageError('Corner data needs a non empty (n, {:d}) array of samples'.format(box.nDims))
    if bins < 1:
        raise exp.UsageError('Number of bins must be positive')
    ranges = list(zip(box.lower, box.upper))
    edges, counts = list(), list()
    for d, r in enumerate(ranges):
        c, e = np.histogram(samples[:, d], bins=bins, range=r)
        counts.append(c)
        edges.append(e)
    counts2d = dict()
    for i in range(box.nDims):
        for j in range(i + 1, box.nDims):
            c, _, _ = np.histogram2d(samples[:, i], samples[:, j], bins=bins, range=[ranges[i], ranges[j]])
            counts2d[(i, j)] = c.astype(np.int64)
    return CornerData(names=box.names, ranges=ranges, edges=edges, counts=counts, counts2d=counts2d,
                      truth=None if truth is None else truth.toArray(), nSamples=samples.shape[0])
