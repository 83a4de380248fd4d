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

"""
Neural networks of the posterior estimator: the graph embedder, the conditional flow and the
model combining them
"""

from microCal.nn.layers import affine, glorotInit
from microCal.nn.embedder import scaledLaplacian, ChebFilter, chebConv, GConvGRUCell, gruStep, Readout, \
    Embedder, prepareTrace, prepareBatch, embedTrace
from microCal.nn.flow import BoxTransform, MadeBlock, madeForward, Maf, mafLogProb, mafSample
from microCal.nn.model import PosteriorModel, buildModel
