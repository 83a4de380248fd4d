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

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import torch

from microCal import exceptions as exp
from microCal.data import PARAM_NAMES, GraphTrace, ModelParams
from microCal.nn import PosteriorModel


def posteriorSample(model: PosteriorModel, observation: GraphTrace, n: int, rng: np.random.Generator) \
        -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw n parameter vectors from the posterior of an observation

    :return: samples (n, D) and their log densities (n,), both float64

    :raise FingerprintError: if the observation shape differs from the training shape

    """
    model.checkShape(observation)
    if n == 0:
        return np.empty((0, model.box.nDims), dtype=np.float64), np.empty(0, dtype=np.float64)
    generator = torch.Generator()
    generator.manual_seed(int(rng.integers(2 ** 63)))
    theta, logProb = model.sample(observation, n, generator)
    return theta.to(torch.float64).numpy(), logProb.to(torch.float64).numpy()


@dataclass
class TruthCheck:
    logPosterior: float
    logPrior: float
    exceeds: bool

    def serialize(self) -> Dict[str, Any]:
        return {'log_posterior': self.logPosterior, 'log_prior': self.logPrior, 'exceeds': self.exceeds}


def truthDensityCheck(model: PosteriorModel, observation: GraphTrace, truth: ModelParams) -> TruthCheck:
    """
    Compares the posterior density of the true parameters with their uniform prior density

    :raise DomainError: if the truth is not strictly inside the prior box

    """
    truth.validate(model.box.box)
    with torch.no_grad():
        context = model.embed(observation)
        theta = torch.as_tensor(truth.toArray(), dtype=model.dtype)
        logPosterior = float(model.logProb(theta, context, strict=True))
    logPrior = model.box.box.logDensity()
    return TruthCheck(logPosterior, logPrior, logPosterior > logPrior)


@dataclass
class PosteriorSummary:
    names: Sequence[str]
    mean: np.ndarray
    std: np.ndarray
    median: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    truth: Optional[np.ndarray] = None
    inside: Optional[np.ndarray] = None

    @property
    def nInside(self) -> int:
        return int(np.sum(self.inside)) if self.inside is not None else 0

    def serialize(self) -> Dict[str, Any]:
        out = dict()
        for i, name in enumerate(self.names):
            out[name] = {'mean': float(self.mean[i]), 'std': float(self.std[i]),
                         'median': float(self.median[i]), 'lower': float(self.lower[i]),
                         'upper': float(self.upper[i])}
            if self.truth is not None:
                out[name]['truth'] = float(self.truth[i])
                out[name]['inside'] = bool(self.inside[i])
        return out


def posteriorSummary(samples: np.ndarray, truth: Optional[ModelParams] = None, level: float = 0.95,
                     names: Sequence[str] = PARAM_NAMES) -> PosteriorSummary:
    """ Per-dimension moments and central interval of the samples, and whether the truth is inside """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise exp.UsageError('Posterior summary needs a non empty (n, D) array of samples')
    tail = (1.0 - level) / 2
    lower, median, upper = np.quantile(samples, [tail, 0.5, 1.0 - tail], axis=0)
    summary = PosteriorSummary(names=tuple(names), mean=samples.mean(axis=0), std=samples.std(axis=0),
                               median=median, lower=lower, upper=upper)
    if truth is not None:
        t = truth.toArray()
        summary.truth = t
        summary.inside = (lower <= t) & (t <= upper)
    return summary
