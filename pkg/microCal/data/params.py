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

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from microCal import exceptions as exp

PARAM_NAMES: Tuple[str, ...] = ('rho', 'eps', 'lam', 'p_init')


@dataclass(frozen=True)
class PriorBox:
    """
    Product of independent uniform priors. The default is the support of
    (rho, eps, lam, p_init): (0,5) x (0,1) x (0,1) x (0,1)
    """
    lower: Tuple[float, ...] = (0.0, 0.0, 0.0, 0.0)
    upper: Tuple[float, ...] = (5.0, 1.0, 1.0, 1.0)
    names: Tuple[str, ...] = PARAM_NAMES

    def __post_init__(self):
        invalid = list()
        if not (len(self.lower) == len(self.upper) == len(self.names)):
            invalid.append(('prior', 'bounds and names must have the same length'))
        for name, a, b in zip(self.names, self.lower, self.upper):
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                invalid.append((name, 'lower bound must be smaller than upper bound'))
        if invalid:
            raise exp.ConfigError(invalid)

    @property
    def nDims(self) -> int:
        return len(self.lower)

    @property
    def width(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=np.float64) - np.asarray(self.lower, dtype=np.float64)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.upper, dtype=np.float64) + np.asarray(self.lower, dtype=np.float64)) / 2

    def logVolume(self) -> float:
        return float(np.sum(np.log(self.width)))

    def logDensity(self) -> float:
        """ Log density of the uniform prior inside the box """
        return -self.logVolume()

    def contains(self, theta: np.ndarray) -> np.ndarray:
        """ Whether each row of 'theta' lies strictly inside the box """
        theta = np.atleast_2d(np.asarray(theta, dtype=np.float64))
        return np.all((theta > np.asarray(self.lower)) & (theta < np.asarray(self.upper)), axis=-1)

    def serialize(self) -> Dict[str, List[float]]:
        return {n: [float(a), float(b)] for n, a, b in zip(self.names, self.lower, self.upper)}

    @staticmethod
    def deserialize(state: Dict[str, Sequence[float]]) -> 'PriorBox':
        names = tuple(n for n in PARAM_NAMES if n in state)
        if len(names) != len(state):
            raise exp.ConfigError([('prior', 'unknown parameters {}'.format(
                sorted(set(state) - set(PARAM_NAMES))))])
        return PriorBox(lower=tuple(float(state[n][0]) for n in names),
                        upper=tuple(float(state[n][1]) for n in names), names=names)


DEFAULT_BOX = PriorBox()


@dataclass(frozen=True)
class ModelParams:
    """ The parameter vector (rho, eps, lam, p_init) of the opinion model """
    rho: float
    eps: float
    lam: float
    pInit: float

    def toArray(self) -> np.ndarray:
        return np.array([self.rho, self.eps, self.lam, self.pInit], dtype=np.float64)

    @staticmethod
    def fromArray(values: Sequence[float]) -> 'ModelParams':
        if len(values) != 4:
            raise exp.DomainError('Expected 4 parameters, got {:d}'.format(len(values)))
        return ModelParams(*(float(v) for v in values))

    @staticmethod
    def parse(text: str) -> 'ModelParams':
        """ Parse a comma separated string like "1,0.8,0.5,0.5" """
        parts = [p.strip() for p in text.split(',')]
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise exp.DomainError('Cannot parse parameters "{}"'.format(text))
        return ModelParams.fromArray(values)

    def validate(self, box: PriorBox = DEFAULT_BOX) -> 'ModelParams':
        """
        Check that every field lies strictly inside the prior support

        :return: self, to allow chaining
        :raise DomainError: on the first field outside the box

        """
        for name, v, a, b in zip(box.names, self.toArray(), box.lower, box.upper):
            if not (a < v < b):
                raise exp.DomainError('{} = {:G} is outside the prior support ({:G}, {:G})'
                                      .format(name, v, a, b))
        return self

    def __str__(self) -> str:
        return ','.join('{:G}'.format(v) for v in self.toArray())


@dataclass(frozen=True)
class SimConfig:
    """ Size of a simulation and the seed of its random stream """
    nAgents: int = 20
    nTopics: int = 3
    nSteps: int = 25
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        invalid = list()
        if self.nAgents < 2:
            invalid.append(('n_agents', 'at least 2 agents are required'))
        if self.nTopics < 1:
            invalid.append(('n_topics', 'at least 1 topic is required'))
        if self.nSteps < 1:
            invalid.append(('n_steps', 'at least 1 step is required'))
        if not 0 <= self.seed < 2 ** 64:
            invalid.append(('seed', 'seed must be a 64-bit unsigned integer'))
        if invalid:
            raise exp.ConfigError(invalid)

    def withSeed(self, seed: int) -> 'SimConfig':
        return SimConfig(self.nAgents, self.nTopics, self.nSteps, int(seed))

    def serialize(self) -> Dict[str, int]:
        return {'n_agents': self.nAgents, 'n_topics': self.nTopics, 'n_steps': self.nSteps,
                'seed': self.seed}

    @staticmethod
    def deserialize(state: Dict[str, int]) -> 'SimConfig':
        return SimConfig(nAgents=int(state['n_agents']), nTopics=int(state['n_topics']),
                         nSteps=int(state['n_steps']), seed=int(state.get('seed', 0)))
