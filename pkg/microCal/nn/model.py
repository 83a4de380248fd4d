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

from typing import Dict, Optional, Tuple

import numpy as np
import torch
import torch.nn as nn

from microCal import exceptions as exp
from microCal.data import DEFAULT_BOX, GraphTrace, PriorBox, Shape
from microCal.nn.embedder import Embedder, prepareTrace
from microCal.nn.flow import BoxTransform, Maf, mafLogProb, mafSample
from microCal.nn.layers import glorotInit
from microCal.runconfig import ArchConfig

Tensor = torch.Tensor


class PosteriorModel(nn.Module):
    """
    Trained estimator of the posterior: an embedder for observations, a conditional flow over the
    parameters and the prior box. It only accepts observations with the shape it was built for
    """

    def __init__(self, shape: Shape, arch: ArchConfig = ArchConfig(), box: PriorBox = DEFAULT_BOX):
        super().__init__()
        self.shape: Shape = shape.clone()
        self.arch: ArchConfig = arch
        self.box = BoxTransform(box)
        self.embedder = Embedder(shape.nAgents, shape.nTopics, arch.hiddenDim, arch.chebOrder, arch.readout)
        self.flow = Maf(box.nDims, arch.contextDim, arch.flowTransforms, arch.flowHidden, arch.alphaClamp)

    @property
    def dtype(self) -> torch.dtype:
        return next(self.parameters()).dtype

    def initParameters(self, seed: int) -> 'PosteriorModel':
        """ Glorot initialisation from a generator seeded with 'seed' """
        generator = torch.Generator()
        generator.manual_seed(int(seed))
        glorotInit(self, generator)
        return self

    def namedTensors(self) -> Dict[str, Tensor]:
        """ Trainable tensors by name """
        return dict(self.named_parameters())

    def checkShape(self, trace: GraphTrace) -> None:
        if trace.shape != self.shape:
            raise exp.FingerprintError('Observation has shape {} but the model was trained on {}'
                                       .format(trace.shape, self.shape))

    def embed(self, trace: GraphTrace) -> Tensor:
        self.checkShape(trace)
        return self.embedder(*prepareTrace(trace, self.dtype))

    def logProb(self, theta: Tensor, context: Tensor, strict: bool = False) -> Tensor:
        return mafLogProb(self.flow, self.box, theta, context, strict)

    def sample(self, trace: GraphTrace, n: int, generator: Optional[torch.Generator] = None) \
            -> Tuple[Tensor, Tensor]:
        """ n draws for an observation and their log densities. The embedding is computed once """
        with torch.no_grad():
            context = self.embed(trace)
        return mafSample(self.flow, self.box, context, n, generator)

    def draw(self, observation: GraphTrace, n: int, rng: np.random.Generator) -> np.ndarray:
        """ Sampler protocol used by the diagnostics """
        generator = torch.Generator()
        generator.manual_seed(int(rng.integers(2 ** 63)))
        theta, _ = self.sample(observation, n, generator)
        return theta.to(torch.float64).numpy()


def buildModel(shape: Shape, arch: ArchConfig = ArchConfig(), box: PriorBox = DEFAULT_BOX,
               seed: int = 0, dtype: torch.dtype = torch.float32) -> PosteriorModel:
    """ Creates an initialised model in the requested precision """
    return PosteriorModel(shape, arch, box).to(dtype).initParameters(seed)
