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
from typing import List, Tuple

import numpy as np

from microCal import exceptions as exp, flogging
from microCal.abm import samplePrior, simulate
from microCal.data import DEFAULT_BOX, GraphTrace, ModelParams, PriorBox, Shape, SimConfig
from microCal.threads import runTasks
from microCal.utils import PRIOR_KEY, deriveSeed, streamFor


@dataclass
class Corpus:
    """ Pairs (parameters, trace) drawn from the prior predictive, with the settings that produced
    them. simSeeds[i] is the seed of the stream of simulation i """
    params: List[ModelParams]
    traces: List[GraphTrace]
    simConfig: SimConfig
    seed: int
    simSeeds: List[int] = field(default_factory=list)
    box: PriorBox = DEFAULT_BOX

    def __post_init__(self):
        if len(self.params) != len(self.traces):
            raise exp.UsageError('Corpus has {:d} parameter vectors but {:d} traces'
                                 .format(len(self.params), len(self.traces)))

    def __len__(self) -> int:
        return len(self.params)

    def __getitem__(self, i: int) -> Tuple[ModelParams, GraphTrace]:
        return self.params[i], self.traces[i]

    @property
    def shape(self) -> Shape:
        return Shape.fromConfig(self.simConfig)

    @property
    def paramNames(self) -> Tuple[str, ...]:
        return self.box.names

    def thetaArray(self) -> np.ndarray:
        """ Parameters as an (n, 4) float64 array """
        if not self.params:
            return np.empty((0, self.box.nDims), dtype=np.float64)
        return np.stack([p.toArray() for p in self.params])

    def validate(self) -> 'Corpus':
        """ Checks the invariants of every trace and that every parameter vector is inside the box """
        shape = self.shape
        for i, (theta, trace) in enumerate(zip(self.params, self.traces)):
            if trace.shape != shape:
                raise exp.TraceValidationError('Trace {:d} has shape {}, expected {}'.format(i, trace.shape, shape))
            trace.validate()
            theta.validate(self.box)
        return self


def _simulationTask(index: int, simConfig: SimConfig, seed: int, box: PriorBox) \
        -> Tuple[ModelParams, GraphTrace, int]:
    taskSeed = deriveSeed(seed, index)
    theta = samplePrior(streamFor(taskSeed, PRIOR_KEY), box)
    trace = simulate(theta, simConfig.withSeed(taskSeed))
    return theta, trace, taskSeed


def generateCorpus(simConfig: SimConfig, nSims: int, seed: int, jobs: int = 1,
                   box: PriorBox = DEFAULT_BOX) -> Corpus:
    """
    Samples nSims parameter vectors from the prior and simulates each of them. Task i draws from
    streams derived from (seed, i) only, so the corpus does not depend on 'jobs'

    :param simConfig: simulation size. Its seed is not used
    :param nSims: number of pairs
    :param seed: root seed of the corpus
    :param jobs: number of parallel processes
    :param box: the prior box

    :raise SimulationError: carrying the index of the first failed task

    """
    if nSims < 1:
        raise exp.ConfigError([('n_sims', 'must be at least 1')])
    flogging.appLogger.info('Generating {:d} simulations {} with seed {:d} on {:d} jobs'.format(
        nSims, Shape.fromConfig(simConfig), seed, jobs))
    results = runTasks(_simulationTask, [(i, simConfig, seed, box) for i in range(nSims)], jobs)
    corpus = Corpus(params=[r[0] for r in results], traces=[r[1] for r in results],
                    simConfig=simConfig, seed=int(seed),
                    simSeeds=[int(r[2]) for r in results], box=box)
    flogging.appLogger.info('Corpus generated\n' + flogging.logCorpusInfo(corpus))
    return corpus


def regenerateTrace(corpus: Corpus, index: int) -> GraphTrace:
    """ Simulates pair 'index' again from its stored parameters and seed """
    return simulate(corpus.params[index], corpus.simConfig.withSeed(corpus.simSeeds[index]))
