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
from microCal.operation.options import checkRequired
from microCal.operation.readwrite import readCorpus, writeCheckpoint, writeJson
from microCal.runconfig import RunConfig
from microCal.training import Trainer


def reportPath(checkpoint: str) -> str:
    """ Path of the training report written next to a checkpoint """
    return checkpoint + '.report.json'


class Train(Operation):
    """ Trains the posterior model on a corpus store """

    def __init__(self):
        super().__init__()
        self.__corpus: Optional[str] = None
        self.__config: Optional[str] = None
        self.__out: Optional[str] = None

    @staticmethod
    def name() -> str:
        return 'train'

    @staticmethod
    def shortDescription() -> str:
        return 'Fit the embedder and the flow on a corpus and write the best checkpoint with its report'

    @staticmethod
    def addArguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--corpus', required=True, help='corpus folder')
        parser.add_argument('--config', help='TOML run configuration')
        parser.add_argument('--out', required=True, help='output checkpoint file')

    def getOptions(self) -> Dict[str, Any]:
        return {'corpus': self.__corpus, 'config': self.__config, 'out': self.__out}

    def hasOptions(self) -> bool:
        return self.__corpus is not None and self.__out is not None

    def setOptions(self, corpus: Optional[str] = None, config: Optional[str] = None,
                   out: Optional[str] = None) -> None:
        errors = list()
        checkRequired(errors, 'corpus', corpus, 'the corpus folder')
        checkRequired(errors, 'out', out, 'the checkpoint file')
        if errors:
            raise exp.OptionValidationError(errors)
        self.__corpus = corpus
        self.__config = config
        self.__out = out
        self._logOptionsString = 'Corpus: {}\nConfiguration: {}\nOutput: {}'.format(corpus, config, out)

    def execute(self) -> str:
        cfg = RunConfig.load(self.__config)
        corpus, _ = readCorpus(self.__corpus, expectedHash=cfg.dataHash())
        flogging.appLogger.info('Training on corpus {}\n{}'.format(self.__corpus, flogging.logCorpusInfo(corpus)))
        try:
            model, report = Trainer(corpus, cfg.train, cfg.arch).fit()
        except exp.TrainingError as e:
            if e.report is not None:
                writeJson(reportPath(self.__out), e.report.serialize())
            raise
        writeCheckpoint(model, self.__out, seed=cfg.train.seed, epoch=report.bestEpoch,
                        valLoss=report.bestValLoss, dataHash=cfg.dataHash())
        writeJson(reportPath(self.__out), report.serialize())
        self._logExecutionString = flogging.logTrainHistory(report)
        return self.__out


export = Train
