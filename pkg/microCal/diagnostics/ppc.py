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
Posterior predictive checks: summaries of the observation against their distribution over
simulations at posterior draws
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from microCal import exceptions as exp, flogging
from microCal.abm import simulate
from microCal.data import GraphTrace, ModelParams, SimConfig
from microCal.diagnostics.samplers import Sampler
from microCal.threads import runTasks
from microCal.utils import PPC_KEY, deriveSeed, streamFor

SummaryFn = Callable[[GraphTrace], float]


def meanOpinion(trace: GraphTrace) -> float:
    """ Mean of all opinions over steps 1..T """
    return float(np.mean(trace.z[1:], dtype=np.float64))


def meanAbsTie(trace: GraphTrace) -> float:
    """ Mean absolute tie weight over steps 1..T, diagonal excluded """
    n = trace.nAgents
    offDiagonal = ~np.eye(n, dtype=bool)
    return float(np.mean(np.abs(trace.w[1:][:, offDiagonal].astype(np.float64))))


def polarization(trace: GraphTrace) -> float:
    """
    Fraction of agent pairs whose majority opinions at the last step have opposite signs. The
    majority of an agent is the sign of the sum of its opinions; a draw has no sign
    """
    majority = np.sign(trace.z[-1].astype(np.int64).sum(axis=1))
    n = trace.nAgents
    i, j = np.triu_indices(n, k=1)
    return float(np.mean(majority[i] * majority[j] < 0))


DEFAULT_SUMMARIES: Dict[str, SummaryFn] = {
    'mean_opinion': meanOpinion,
    'mean_abs_tie': meanAbsTie,
    'polarization': polarization,
}


@dataclass
class PpcSummary:
    name: str
    observed: float
    simulated: np.ndarray
    q05: float = 0.0
    q50: float = 0.0
    q95: float = 0.0
    quantile: float = 0.0

    @property
    def insideBand(self) -> bool:
        """ Whether the observed value lies between the 5% and 95% simulated quantiles """
        return self.q05 <= self.observed <= self.q95

    def serialize(self) -> Dict[str, Any]:
        return {'name': self.name, 'observed': self.observed, 'q05': self.q05, 'q50': self.q50,
                'q95': self.q95, 'quantile': self.quantile, 'inside_band': self.insideBand,
                'simulated': [float(v) for v in self.simulated]}


@dataclass
class PpcResult:
    summaries: List[PpcSummary] = field(default_factory=list)

    def toFrame(self) -> pd.DataFrame:
        return pd.DataFrame([{k: v for k, v in s.serialize().items() if k != 'simulated'}
                             for s in self.summaries]).set_index('name')

    def serialize(self) -> Dict[str, Any]:
        return {'summaries': [s.serialize() for s in self.summaries]}


def _summarize(observed: float, name: str, simulated: np.ndarray) -> PpcSummary:
    q05, q50, q95 = np.quantile(simulated, [0.05, 0.5, 0.95])
    # mid-rank, so an observation equal to every simulation sits at 0.5
    quantile = (np.sum(simulated < observed) + 0.5 * np.sum(simulated == observed)) / len(simulated)
    return PpcSummary(name=name, observed=observed, simulated=simulated, q05=float(q05), q50=float(q50),
                      q95=float(q95), quantile=float(quantile))


def _ppcTask(theta: np.ndarray, config: SimConfig, names: Sequence[str],
             summaries: Dict[str, SummaryFn]) -> List[float]:
    trace = simulate(ModelParams.fromArray(theta), config)
    return [summaries[n](trace) for n in names]


def ppc(sampler: Sampler, observation: GraphTrace, n: int, summaries: Optional[Dict[str, SummaryFn]] = None,
        seed: int = 0, simSeeds: Optional[Sequence[int]] = None, jobs: int = 1) -> PpcResult:
    """
    Simulates the model at n posterior draws and compares the summaries of the observation with
    the simulated ones

    :param sampler: object with a draw(observation, n, rng) method
    :param observation: the observed trace
    :param n: number of posterior draws
    :param summaries: summary functions by name. Defaults to mean opinion, mean absolute tie
        and final polarization
    :param seed: root seed of the draws and of the simulations
    :param simSeeds: explicit seed of each simulation. Defaults to seeds derived from (seed, i)
    :param jobs: number of parallel processes for the simulations

    """
    summaries = DEFAULT_SUMMARIES if summaries is None else summaries
    if not summaries:
        raise exp.UsageError('At least one summary is required')
    if n < 1:
        raise exp.UsageError('Posterior predictive checks need at least one draw')
    if simSeeds is not None and len(simSeeds) != n:
        raise exp.UsageError('Expected {:d} simulation seeds, got {:d}'.format(n, len(simSeeds)))
    thetas = sampler.draw(observation, n, streamFor(seed, PPC_KEY))
    shape = observation.shape
    seeds = list(simSeeds) if simSeeds is not None else [deriveSeed(seed, PPC_KEY, i) for i in range(n)]
    names = list(summaries.keys())
    args = [(thetas[i], SimConfig(shape.nAgents, shape.nTopics, shape.nSteps, int(seeds[i])), names, summaries)
            for i in range(n)]
    values = np.asarray(runTasks(_ppcTask, args, jobs), dtype=np.float64)
    result = PpcResult([_summarize(summaries[name](observation), name, values[:, k])
                        for k, name in enumerate(names)])
    flogging.appLogger.info('Posterior predictive check over {:d} draws\n'.format(n) +
                            flogging.logPpcResult(result))
    return result
