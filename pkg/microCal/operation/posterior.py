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
from microCal.data import ModelParams
from microCal.diagnostics import cornerData, posteriorSample, posteriorSummary
from microCal.operation.interface import Operation
from microCal.operation.options import checkPositive, checkRequired, checkSeed, parseParams
from microCal.operation.readwrite import readCheckpoint, readCorpus, writeJson, writeSamples
from microCal.utils import streamFor


class Posterior(Operation):
    """ Samples the posterior of an observation with a trained model """

    def __init__(self):
        super().__init__()
        self.__ckpt: Optional[str] = None
        self.__obs: Optional[str] = None
        self.__n: int = 10000
        self.__seed: int = 0
        self.__out: Optional[str] = None
        self.__corner: Optional[str] = None
        self.__truth: Optional[ModelParams] = None
        self.__index: int = 0
        self.__bins: int = 30

    @staticmethod
    def name() -> str:
        return 'posterior'

    @staticmethod
    def shortDescription() -> str:
        return 'Draw posterior samples for an observation and optionally write corner plot data'

    @staticmethod
    def addArguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--ckpt', required=True, help='checkpoint file')
        parser.add_argument('--obs', required=True, help='corpus folder holding the observation')
        parser.add_argument('--index', type=int, default=0, help='which trace of the folder is observed')
        parser.add_argument('--n', type=int, default=10000, help='number of samples')
        parser.add_argument('--seed', type=int, default=0, help='sampling seed')
        parser.add_argument('--out', required=True, help='output file of float64 samples')
        parser.add_argument('--corner', help='output JSON file of corner plot data')
        parser.add_argument('--bins', type=int, default=30, help='histogram bins per parameter')
        parser.add_argument('--truth', help='true parameters rho,eps,lam,p_init, used as markers')

    def getOptions(self) -> Dict[str, Any]:
        return {'ckpt': self.__ckpt, 'obs': self.__obs, 'index': self.__index, 'n': self.__n,
                'seed': self.__seed, 'out': self.__out, 'corner': self.__corner, 'bins': self.__bins,
                'truth': self.__truth}

    def hasOptions(self) -> bool:
        return None not in (self.__ckpt, self.__obs, self.__out)

    def setOptions(self, ckpt: Optional[str] = None, obs: Optional[str] = None, index: int = 0, n: int = 10000,
                   seed: int = 0, out: Optional[str] = None, corner: Optional[str] = None, bins: int = 30,
                   truth: Optional[str] = None) -> None:
        errors = list()
        checkRequired(errors, 'ckpt', ckpt, 'the checkpoint')
        checkRequired(errors, 'obs', obs, 'the observation')
        checkRequired(errors, 'out', out, 'the samples file')
        checkPositive(errors, 'n', n, allowZero=True)
        checkPositive(errors, 'index', index, allowZero=True)
        checkPositive(errors, 'bins', bins)
        checkSeed(errors, 'seed', seed)
        params = parseParams(errors, 'truth', truth)
        if corner and n == 0:
            errors.append(('corner', 'Error: corner data needs at least one sample'))
        if errors:
            raise exp.OptionValidationError(errors)
        self.__ckpt, self.__obs, self.__index, self.__n = ckpt, obs, index, n
        self.__seed, self.__out, self.__corner, self.__bins = seed, out, corner, bins
        self.__truth = params
        self._logOptionsString = 'Checkpoint: {}\nObservation: {} (trace {})\nSamples: {}\nSeed: {}\n' \
                                 'Output: {}\nCorner: {}\nTruth: {}'.format(ckpt, obs, index, n, seed, out,
                                                                            corner, params)

    def execute(self) -> str:
        model, _ = readCheckpoint(self.__ckpt)
        observations, _ = readCorpus(self.__obs)
        if self.__index >= len(observations):
            raise exp.OptionValidationError([('index', 'Error: the observation folder holds {:d} traces'
                                              .format(len(observations)))])
        trace = observations.traces[self.__index]
        samples, _ = posteriorSample(model, trace, self.__n, streamFor(self.__seed))
        writeSamples(self.__out, samples)
        if self.__corner:
            writeJson(self.__corner, cornerData(samples, self.__bins, self.__truth, model.box.box).serialize())
        if self.__n:
            summary = posteriorSummary(samples, self.__truth, names=model.box.box.names)
            self._logExecutionString = flogging.logPosteriorSummary(summary)
        return self.__out


export = Posterior
