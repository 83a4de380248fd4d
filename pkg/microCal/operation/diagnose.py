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
import time
from typing import Any, Dict, Optional

import numpy as np

from microCal import exceptions as exp, flogging
from microCal.data import ModelParams, SimConfig
from microCal.diagnostics import PriorSampler, ShrunkSampler, ppc, sbc, truthDensityCheck
from microCal.operation.interface import Operation
from microCal.operation.options import checkPositive, checkRequired, checkSeed, parseParams
from microCal.operation.readwrite import readCheckpoint, readCorpus, writeJson
from microCal.runconfig import RunConfig

SIGNIFICANCE = 0.01


class Diagnose(Operation):
    """
    Judges a trained model with simulation-based calibration and posterior predictive checks.
    SBC of the model is preceded by SBC of a calibrated and of an overconfident sampler, which
    validates the test itself
    """

    def __init__(self):
        super().__init__()
        self.__ckpt: Optional[str] = None
        self.__config: Optional[str] = None
        self.__seed: int = 0
        self.__out: Optional[str] = None
        self.__sbc: Optional[int] = None
        self.__sbcDraws: int = 100
        self.__ppc: Optional[int] = None
        self.__obs: Optional[str] = None
        self.__index: int = 0
        self.__truth: Optional[ModelParams] = None

    @staticmethod
    def name() -> str:
        return 'diagnose'

    @staticmethod
    def shortDescription() -> str:
        return 'Run calibration and predictive diagnostics of a trained model and write a JSON report'

    @staticmethod
    def addArguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--ckpt', required=True, help='checkpoint file')
        parser.add_argument('--config', help='TOML run configuration')
        parser.add_argument('--seed', type=int, default=0, help='diagnostics seed')
        parser.add_argument('--out', required=True, help='output JSON report')
        parser.add_argument('--sbc', type=int, help='number of simulation-based calibration runs')
        parser.add_argument('--sbc-draws', dest='sbcDraws', type=int, default=100,
                            help='posterior draws per calibration run')
        parser.add_argument('--ppc', type=int, help='number of posterior predictive simulations')
        parser.add_argument('--obs', help='corpus folder holding the observation for --ppc and --truth')
        parser.add_argument('--index', type=int, default=0, help='which trace of the folder is observed')
        parser.add_argument('--truth', help='true parameters rho,eps,lam,p_init of the observation')

    def getOptions(self) -> Dict[str, Any]:
        return {'ckpt': self.__ckpt, 'config': self.__config, 'seed': self.__seed, 'out': self.__out,
                'sbc': self.__sbc, 'sbcDraws': self.__sbcDraws, 'ppc': self.__ppc, 'obs': self.__obs,
                'index': self.__index, 'truth': self.__truth}

    def hasOptions(self) -> bool:
        return self.__ckpt is not None and self.__out is not None

    def setOptions(self, ckpt: Optional[str] = None, config: Optional[str] = None, seed: int = 0,
                   out: Optional[str] = None, sbc: Optional[int] = None, sbcDraws: int = 100,
                   ppc: Optional[int] = None, obs: Optional[str] = None, index: int = 0,
                   truth: Optional[str] = None) -> None:
        errors = list()
        checkRequired(errors, 'ckpt', ckpt, 'the checkpoint')
        checkRequired(errors, 'out', out, 'the report file')
        checkSeed(errors, 'seed', seed)
        if sbc is not None and sbc < 20:
            errors.append(('sbc', 'Error: at least 20 calibration runs are required'))
        if sbcDraws is None or sbcDraws < 20:
            errors.append(('sbcDraws', 'Error: at least 20 draws per run are required'))
        checkPositive(errors, 'ppc', ppc)
        checkPositive(errors, 'index', index, allowZero=True)
        params = parseParams(errors, 'truth', truth)
        if (ppc is not None or params is not None) and not obs:
            errors.append(('obs', 'Error: an observation is required by --ppc and --truth'))
        if errors:
            raise exp.OptionValidationError(errors)
        self.__ckpt, self.__config, self.__seed, self.__out = ckpt, config, seed, out
        self.__sbc, self.__sbcDraws, self.__ppc = sbc, sbcDraws, ppc
        self.__obs, self.__index, self.__truth = obs, index, params
        self._logOptionsString = 'Checkpoint: {}\nConfiguration: {}\nSeed: {}\nSBC runs: {} x {} draws\n' \
                                 'PPC draws: {}\nObservation: {} (trace {})\nTruth: {}\nOutput: {}'.format(
                                  ckpt, config, seed, sbc, sbcDraws, ppc, obs, index, params, out)

    def _sbcSection(self, model, simConfig: SimConfig) -> Dict[str, Any]:
        box = model.box.box
        calibrated = sbc(PriorSampler(box), simConfig, self.__sbc, self.__sbcDraws, self.__seed, box)
        wrongPoint = np.asarray(box.lower) + 0.1 * box.width
        overconfident = sbc(ShrunkSampler(wrongPoint, 0.1, box), simConfig, self.__sbc, self.__sbcDraws,
                            self.__seed, box)
        selfCheck = {
            'calibrated': {**calibrated.serialize(), 'passes': bool(np.min(calibrated.pValue) > SIGNIFICANCE)},
            'overconfident': {**overconfident.serialize(),
                              'rejected': bool(np.min(overconfident.pValue) < SIGNIFICANCE)}
        }
        result = sbc(model, simConfig, self.__sbc, self.__sbcDraws, self.__seed, box)
        for name, p in zip(result.names, result.pValue):
            if p < SIGNIFICANCE:
                flogging.appLogger.warning('SBC rejects uniformity of the ranks of {} (p = {:.4g})'.format(name, p))
        self._logExecutionString = (self._logExecutionString or '') + flogging.logSbcResult(result) + '\n'
        return {'self_check': selfCheck, 'model': result.serialize()}

    def execute(self) -> str:
        start = time.perf_counter()
        cfg = RunConfig.load(self.__config)
        model, header = readCheckpoint(self.__ckpt)
        if header.get('data_hash') and header['data_hash'] != cfg.dataHash():
            raise exp.ConfigError([('ckpt', 'the checkpoint was trained with a different data configuration')])
        shape = model.shape
        simConfig = SimConfig(shape.nAgents, shape.nTopics, shape.nSteps, self.__seed)
        report: Dict[str, Any] = {'checkpoint': {k: header[k] for k in ('arch', 'shape', 'prior', 'seed',
                                                                         'epoch', 'val_loss')},
                                  'seed': self.__seed}
        self._logExecutionString = ''
        if self.__sbc is not None:
            report['sbc'] = self._sbcSection(model, simConfig)
        if self.__obs:
            observations, _ = readCorpus(self.__obs)
            if self.__index >= len(observations):
                raise exp.OptionValidationError([('index', 'Error: the observation folder holds {:d} traces'
                                                  .format(len(observations)))])
            trace = observations.traces[self.__index]
            if self.__ppc is not None:
                result = ppc(model, trace, self.__ppc, seed=self.__seed)
                report['ppc'] = result.serialize()
                self._logExecutionString += flogging.logPpcResult(result) + '\n'
            if self.__truth is not None:
                report['truth_check'] = truthDensityCheck(model, trace, self.__truth).serialize()
        report['timing'] = {'wall_clock_s': time.perf_counter() - start}
        writeJson(self.__out, report)
        return self.__out


export = Diagnose
