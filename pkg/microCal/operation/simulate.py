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

from microCal import exceptions as exp
from microCal.abm import simulate
from microCal.data import ModelParams
from microCal.operation.interface import Operation
from microCal.operation.options import checkRequired, checkSeed, parseParams
from microCal.operation.readwrite import writeCorpus
from microCal.runconfig import RunConfig
from microCal.training import Corpus


class Simulate(Operation):
    """ Simulates the model once at given parameters """

    def __init__(self):
        super().__init__()
        self.__config: Optional[str] = None
        self.__theta: Optional[ModelParams] = None
        self.__seed: Optional[int] = None
        self.__out: Optional[str] = None

    @staticmethod
    def name() -> str:
        return 'simulate'

    @staticmethod
    def shortDescription() -> str:
        return 'Simulate the opinion model at given parameters and write a single-trace corpus store'

    @staticmethod
    def addArguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--config', help='TOML run configuration')
        parser.add_argument('--theta', required=True, help='parameters as rho,eps,lam,p_init')
        parser.add_argument('--seed', type=int, help='simulation seed (default: [sim] seed)')
        parser.add_argument('--out', required=True, help='output corpus folder')

    def getOptions(self) -> Dict[str, Any]:
        return {'config': self.__config, 'theta': self.__theta, 'seed': self.__seed, 'out': self.__out}

    def hasOptions(self) -> bool:
        return self.__theta is not None and self.__out is not None

    def setOptions(self, config: Optional[str] = None, theta: Optional[str] = None, seed: Optional[int] = None,
                   out: Optional[str] = None) -> None:
        errors = list()
        checkRequired(errors, 'theta', theta, 'parameters')
        params = parseParams(errors, 'theta', theta)
        checkSeed(errors, 'seed', seed)
        checkRequired(errors, 'out', out, 'the output folder')
        if errors:
            raise exp.OptionValidationError(errors)
        self.__config = config
        self.__theta = params
        self.__seed = seed
        self.__out = out
        self._logOptionsString = 'Parameters: {}\nSeed: {}\nConfiguration: {}\nOutput: {}'.format(
            params, seed, config, out)

    def execute(self) -> str:
        cfg = RunConfig.load(self.__config)
        seed = cfg.sim.seed if self.__seed is None else self.__seed
        theta = self.__theta.validate(cfg.prior)
        simConfig = cfg.sim.withSeed(seed)
        trace = simulate(theta, simConfig).validate()
        corpus = Corpus(params=[theta], traces=[trace], simConfig=simConfig, seed=seed, simSeeds=[seed],
                        box=cfg.prior)
        writeCorpus(corpus, self.__out, cfg.dataHash())
        self._logExecutionString = 'Simulated trace with shape {}'.format(trace.shape)
        return self.__out


export = Simulate
