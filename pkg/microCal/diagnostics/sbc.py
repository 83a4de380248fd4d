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
Simulation-based calibration. For each run a parameter vector is drawn from the prior and simulated;
the rank of each true coordinate among the posterior draws for that observation is uniform on
{0, ..., n_draws} when the sampler is calibrated
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy.stats import kstest

from microCal import exceptions as exp, flogging
from microCal.abm import samplePrior, simulate
from microCal.data import DEFAULT_BOX, PriorBox, SimConfig
from microCal.diagnostics.samplers import Sampler
from microCal.utils import PRIOR_KEY, SBC_KEY, TORCH_KEY, deriveSeed, streamFor

MIN_RUNS = 20
MIN_DRAWS = 20


@dataclass
class SbcResult:
    names: Tuple[str, ...]
    ranks: np.ndarray
    nDraws: int
    ksStatistic: np.ndarray
    pValue: np.ndarray

    @property
    def nRuns(self) -> int:
        return self.ranks.shape[0]

    def rankHistogram(self, bins: int = 20) -> np.ndarray:
        """ Counts of the ranks of each dimension in 'bins' equal bins over [0, nDraws] """
        return np.stack([np.histogram(r, bins=bins, range=(0, self.nDraws + 1))[0] for r in self.ranks.T])

    def serialize(self) -> Dict[str, Any]:
        return {'n_runs': self.nRuns, 'n_draws': self.nDraws,
                'parameters': [{'name': n, 'ks_statistic': float(ks), 'p_value': float(p),
                                'ranks': [int(r) for r in self.ranks[:, d]]}
                               for d, (n, ks, p) in enumerate(zip(self.names, self.ksStatistic, self.pValue))]}


def rankUniformity(ranks: np.ndarray, nDraws: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Kolmogorov-Smirnov test of the ranks against the uniform distribution. Ranks are spread to
    (rank + U) / (nDraws + 1) with U ~ U(0, 1), which is exactly U(0, 1) under calibration

    :return: the KS statistic and the p-value of each dimension

    """
    pit = (ranks + rng.random(ranks.shape)) / (nDraws + 1)
    tests = [kstest(col, 'uniform') for col in pit.T]
    return np.array([t[0] for t in tests]), np.array([t[1] for t in tests])


def sbc(sampler: Sampler, simConfig: SimConfig, nRuns: int, nDraws: int, seed: int,
        box: PriorBox = DEFAULT_BOX) -> SbcResult:
    """
    Runs simulation-based calibration of an amortised sampler. The sampler is never retrained

    :param sampler: object with a draw(observation, n, rng) method
    :param simConfig: size of the simulated observations
    :param nRuns: number of prior draws (at least 20)
    :param nDraws: posterior draws per run (at least 20)
    :param seed: root seed. Run r uses streams derived from (seed, r)
    :param box: the prior box

    """
    if nRuns < MIN_RUNS or nDraws < MIN_DRAWS:
        raise exp.UsageError('SBC needs at least {:d} runs and {:d} draws'.format(MIN_RUNS, MIN_DRAWS))
    ranks = np.zeros((nRuns, box.nDims), dtype=np.int64)
    for r in range(nRuns):
        runSeed = deriveSeed(seed, SBC_KEY, r)
        truth = samplePrior(streamFor(runSeed, PRIOR_KEY), box)
        observation = simulate(truth, simConfig.withSeed(runSeed))
        draws = sampler.draw(observation, nDraws, streamFor(runSeed, TORCH_KEY))
        ranks[r] = np.sum(draws < truth.toArray(), axis=0)
    ks, p = rankUniformity(ranks, nDraws, streamFor(seed, SBC_KEY))
    result = SbcResult(names=box.names, ranks=ranks, nDraws=nDraws, ksStatistic=ks, pValue=p)
    flogging.appLogger.info('SBC over {:d} runs\n'.format(nRuns) + flogging.logSbcResult(result))
    return result
