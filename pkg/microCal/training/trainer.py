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
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import torch

from microCal import exceptions as exp, flogging
from microCal.nn import PosteriorModel, buildModel, prepareBatch
from microCal.numerics import AdamState, adamStep, backward
from microCal.runconfig import ArchConfig, TrainConfig
from microCal.status import StopReason
from microCal.training.corpus import Corpus
from microCal.training.earlystopping import EarlyStopping
from microCal.utils import BATCH_KEY, SPLIT_KEY, TORCH_KEY, streamFor, torchGenerator

REPORT_SCHEMA_VERSION = 1

Tensor = torch.Tensor


class Batch(NamedTuple):
    """ Parameters (B, D), node features (B, T+1, N, K) and Laplacians (B, T+1, N, N) """
    theta: Tensor
    x: Tensor
    lt: Tensor


@dataclass
class TrainReport:
    """
    Loss history of a training run. valLosses[e] is the validation loss after epoch e, where epoch 0
    is the untrained model; trainLosses[e - 1] is the mean training loss of epoch e
    """
    trainLosses: List[float] = field(default_factory=list)
    valLosses: List[float] = field(default_factory=list)
    bestEpoch: int = 0
    bestValLoss: float = math.inf
    stopReason: StopReason = StopReason.NONE
    seed: int = 0
    wallClock: float = 0.0

    @property
    def initialValLoss(self) -> float:
        return self.valLosses[0] if self.valLosses else math.nan

    @property
    def epochs(self) -> int:
        return len(self.trainLosses)

    def toFrame(self) -> pd.DataFrame:
        """ One row per epoch, indexed by epoch """
        return pd.DataFrame({'train_loss': [math.nan] + list(self.trainLosses),
                             'val_loss': list(self.valLosses)[:self.epochs + 1]},
                            index=pd.RangeIndex(self.epochs + 1, name='epoch'))

    def serialize(self) -> Dict[str, Any]:
        """ Reproducible content first, wall clock under 'timing' """
        return {'schema_version': REPORT_SCHEMA_VERSION,
                'train_losses': [float(v) for v in self.trainLosses],
                'val_losses': [float(v) for v in self.valLosses],
                'initial_val_loss': float(self.initialValLoss),
                'best_epoch': self.bestEpoch,
                'best_val_loss': float(self.bestValLoss),
                'epochs': self.epochs,
                'stop_reason': self.stopReason.value,
                'seed': self.seed,
                'timing': {'wall_clock_s': self.wallClock}}

    @staticmethod
    def deserialize(state: Dict[str, Any]) -> 'TrainReport':
        return TrainReport(trainLosses=list(state['train_losses']), valLosses=list(state['val_losses']),
                           bestEpoch=int(state['best_epoch']), bestValLoss=float(state['best_val_loss']),
                           stopReason=StopReason(state['stop_reason']), seed=int(state.get('seed', 0)),
                           wallClock=float(state.get('timing', dict()).get('wall_clock_s', 0.0)))


def nllLoss(model: PosteriorModel, batch: Batch, batchIndex: Optional[int] = None) -> Tensor:
    """
    Mean negative log posterior density of the batch parameters given the embedding of their traces

    :raise TrainingError: if the loss is not finite

    """
    if batch.theta.shape[0] == 0:
        raise exp.UsageError('Cannot compute the loss of an empty batch')
    try:
        context = model.embedder(batch.x, batch.lt)
        loss = -model.logProb(batch.theta, context).mean()
    except exp.NumericError as e:
        raise exp.TrainingError('Non finite values in batch {}: {}'.format(batchIndex, e),
                                batchIndex=batchIndex) from e
    if not bool(torch.isfinite(loss)):
        raise exp.TrainingError('Non finite loss in batch {}'.format(batchIndex), batchIndex=batchIndex)
    return loss


class Trainer:
    """
    Fits the embedder and the flow jointly with Adam on a corpus. The corpus is shuffled with a
    stream of the training seed and its last ceil(valFraction * n) pairs are held out for
    validation. Training stops when the validation loss did not improve for 'patienceEpochs'
    epochs or after 'maxEpochs', and the model is left with the parameters of the best epoch
    """

    def __init__(self, corpus: Corpus, config: TrainConfig, arch: ArchConfig = ArchConfig(),
                 model: Optional[PosteriorModel] = None):
        config.validate(len(corpus))
        self.config: TrainConfig = config
        self.dtype: torch.dtype = config.torchDtype
        n = len(corpus)
        order = streamFor(config.seed, SPLIT_KEY).permutation(n)
        nVal = config.validationSize(n)
        self.trainIndices: np.ndarray = order[:n - nVal]
        self.valIndices: np.ndarray = order[n - nVal:]
        if model is None:
            seed = torchGenerator(config.seed, TORCH_KEY).initial_seed()
            model = buildModel(corpus.shape, arch, corpus.box, seed=seed, dtype=self.dtype)
        self.model: PosteriorModel = model
        self._batchRng = streamFor(config.seed, BATCH_KEY)
        self._theta = torch.as_tensor(corpus.thetaArray(), dtype=self.dtype)
        self._x, self._lt = prepareBatch(corpus.traces, self.dtype)
        self.params: Dict[str, Tensor] = model.namedTensors()
        self.state: AdamState = AdamState.forParameters(self.params, lr=config.lr, beta1=config.beta1,
                                                        beta2=config.beta2, epsStab=config.epsStab)
        self.stopping = EarlyStopping(config.patienceEpochs)

    def batch(self, indices: Sequence[int]) -> Batch:
        idx = torch.as_tensor(np.asarray(indices, dtype=np.int64))
        return Batch(self._theta[idx], self._x[idx], self._lt[idx])

    def trainStep(self, indices: Sequence[int], batchIndex: Optional[int] = None) -> float:
        """ One optimiser step on the given training pairs. Returns the loss before the step """
        loss = nllLoss(self.model, self.batch(indices), batchIndex)
        try:
            grads = backward(loss, self.params)
        except exp.NumericError as e:
            raise exp.TrainingError('Non finite gradient in batch {}: {}'.format(batchIndex, e),
                                    batchIndex=batchIndex) from e
        adamStep(self.params, grads, self.state)
        return float(loss.detach())

    def runEpoch(self, epoch: int) -> float:
        """ One pass over the shuffled training pairs. The last batch may be smaller """
        order = self.trainIndices[self._batchRng.permutation(len(self.trainIndices))]
        size = self.config.batchSize
        total = 0.0
        for b, start in enumerate(range(0, len(order), size)):
            indices = order[start:start + size]
            total += self.trainStep(indices, batchIndex=b) * len(indices)
        return total / len(order)

    def _validationLoss(self, epoch: int) -> float:
        total = 0.0
        size = self.config.batchSize
        with torch.no_grad():
            for start in range(0, len(self.valIndices), size):
                indices = self.valIndices[start:start + size]
                total += float(nllLoss(self.model, self.batch(indices))) * len(indices)
        return total / len(self.valIndices)

    def _snapshot(self) -> Dict[str, Tensor]:
        return {k: v.detach().clone() for k, v in self.model.state_dict().items()}

    def fit(self) -> Tuple[PosteriorModel, TrainReport]:
        """
        Runs the training loop

        :return: the model with the parameters of the best validation epoch, and the report

        :raise TrainingError: on divergence. The error carries the partial report

        """
        start = time.perf_counter()
        report = TrainReport(seed=self.config.seed)
        try:
            valLoss = self._validationLoss(0)
            report.valLosses.append(valLoss)
            self.stopping.update(valLoss, 0)
            best = self._snapshot()
            flogging.trainLogger.info(flogging.logEpoch(0, math.nan, valLoss, True))
            for epoch in range(1, self.config.maxEpochs + 1):
                trainLoss = self.runEpoch(epoch)
                valLoss = self._validationLoss(epoch)
                report.trainLosses.append(trainLoss)
                report.valLosses.append(valLoss)
                improved = self.stopping.update(valLoss, epoch)
                if improved:
                    best = self._snapshot()
                flogging.trainLogger.info(flogging.logEpoch(epoch, trainLoss, valLoss, improved))
                if self.stopping.shouldStop:
                    report.stopReason = StopReason.PATIENCE
                    break
            else:
                report.stopReason = StopReason.MAX_EPOCHS
        except exp.TrainingError as e:
            report.stopReason = StopReason.DIVERGED
            report.bestEpoch = self.stopping.bestEpoch or 0
            report.bestValLoss = self.stopping.bestLoss
            report.wallClock = time.perf_counter() - start
            e.report = report
            flogging.trainLogger.error('Training diverged: {}'.format(e))
            raise
        self.model.load_state_dict(best)
        report.bestEpoch = self.stopping.bestEpoch
        report.bestValLoss = self.stopping.bestLoss
        report.wallClock = time.perf_counter() - start
        flogging.trainLogger.info('Training finished\n' + flogging.logTrainHistory(report))
        return self.model, report


def train(corpus: Corpus, config: TrainConfig, arch: ArchConfig = ArchConfig()) \
        -> Tuple[PosteriorModel, TrainReport]:
    """ Trains a posterior model on a corpus """
    return Trainer(corpus, config, arch).fit()
