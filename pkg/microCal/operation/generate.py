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

import argparse
from typing import Any, Dict, Optional

from microCal import exceptions as exp, flogging
from microCal.operation.interface import Operation
from microCal.operation.options import checkPositive, checkRequired, checkSeed
from microCal.operation.readwrite import writeCorpus
from microCal.runconfig import RunConfig
from microCal.training import generateCorpus


class GenerateData(Operation):
    """ Generates the training corpus from the prior predictive """

    def __init__(self):
        super().__init__()
        self.__config: Optional[str] = None
        self.__n: Optional[int] = None
        self.__seed: Optional[int] = None
        self.__out: Optional[str] = None
        self.__jobs: int = 1

    @staticmethod
    def name() -> str:
        return 'gen-data'

    @staticmethod
    def shortDescription() -> str:
        return 'Sample parameters from the prior, simulate each of them and write a corpus store'

    @staticmethod
    def addArguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--config', help='TOML run configuration')
        parser.add_argument('--n', type=int, help='number of simulations (default: [train] n_sims)')
        parser.add_argument('--seed', type=int, help='corpus seed (default: [sim] seed)')
        parser.add_argument('--out', required=True, help='output corpus folder')
        parser.add_argument('--jobs', type=int, default=1, help='parallel processes (-1 uses all cores)')

    def getOptions(self) -> Dict[str, Any]:
        return {'config': self.__config, 'n': self.__n, 'seed': self.__seed, 'out': self.__out,
                'jobs': self.__jobs}

    def hasOptions(self) -> bool:
        return self.__out is not None

    def setOptions(self, config: Optional[str] = None, n: Optional[int] = None, seed: Optional[int] = None,
                   out: Optional[str] = None, jobs: int = 1) -> None:
        errors = list()
        checkPositive(errors, 'n', n)
        checkSeed(errors, 'seed', seed)
        checkRequired(errors, 'out', out, 'the output folder')
        if jobs is None or jobs == 0 or jobs < -1:
            errors.append(('jobs', 'Error: jobs must be positive or -1'))
        if errors:
            raise exp.OptionValidationError(errors)
        self.__config = config
        self.__n = n
        self.__seed = seed
        self.__out = out
        self.__jobs = jobs
        self._logOptionsString = 'Simulations: {}\nSeed: {}\nJobs: {}\nConfiguration: {}\nOutput: {}'.format(
            n, seed, jobs, config, out)

    def execute(self) -> str:
        cfg = RunConfig.load(self.__config)
        n = cfg.train.nSims if self.__n is None else self.__n
        seed = cfg.sim.seed if self.__seed is None else self.__seed
        corpus = generateCorpus(cfg.sim, n, seed, jobs=self.__jobs, box=cfg.prior)
        writeCorpus(corpus, self.__out, cfg.dataHash())
        self._logExecutionString = flogging.logCorpusInfo(corpus)
        return self.__out


export = GenerateData
