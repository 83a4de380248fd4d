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
Graph embedding network. A Chebyshev graph-convolutional GRU runs over the sequence of snapshots of
a trace, then the final hidden state is reduced to one value per agent and mapped by a small
feedforward network to the embedding used as context by the flow.
Every function accepts leading batch dimensions
"""

from typing import Sequence, Tuple

import torch
import torch.nn as nn

from microCal import exceptions as exp
from microCal.data import GraphTrace
from microCal.nn.layers import affine
from microCal.numerics import matmul, elementwise

Tensor = torch.Tensor


def scaledLaplacian(w: Tensor, atol: float = 1e-6) -> Tensor:
    """
    Scaled Laplacian L - I of a signed weighted graph, with L = I - D^-1/2 w D^-1/2 and degrees
    taken on absolute weights. Rows of isolated agents are zero

    :param w: symmetric tie matrices with shape (..., N, N) and zero diagonal
    :param atol: tolerance of the symmetry check

    :raise TraceValidationError: if some matrix is not symmetric

    """
    if w.dim() < 2 or w.shape[-1] != w.shape[-2]:
        raise exp.DimensionError('Tie matrices must be square, got shape {}'.format(tuple(w.shape)))
    if w.numel() and float((w - w.transpose(-1, -2)).abs().max()) > atol:
        raise exp.TraceValidationError('Tie matrix is not symmetric')
    degree = w.abs().sum(dim=-1)
    isolated = degree <= 0
    invSqrt = torch.where(isolated, torch.zeros_like(degree), degree.masked_fill(isolated, 1.0).rsqrt())
    return -(invSqrt.unsqueeze(-1) * w * invSqrt.unsqueeze(-2))


class ChebFilter(nn.Module):
    """ Weights of a Chebyshev graph filter: Q stacked (in x out) matrices and a bias """

    def __init__(self, inDim: int, outDim: int, order: int = 3):
        super().__init__()
        if order < 1:
            raise exp.ConfigError([('cheb_order', 'must be at least 1')])
        self.theta = nn.Parameter(torch.zeros(order, inDim, outDim))
        self.bias = nn.Parameter(torch.zeros(outDim))

    @property
    def order(self) -> int:
        return self.theta.shape[0]

    def forward(self, x: Tensor, lt: Tensor) -> Tensor:
        return chebConv(x, lt, self)


def chebConv(x: Tensor, lt: Tensor, f: ChebFilter) -> Tensor:
    """
    Chebyshev graph convolution: sum over q of T_q(lt) x theta_q, plus bias. The polynomials are
    built by the recurrence T_q = 2 lt T_q-1 - T_q-2 applied to x, keeping only the last two terms

    :param x: node features (..., N, in)
    :param lt: scaled Laplacian (..., N, N)
    :param f: the filter

    :return: filtered features (..., N, out)

    """
    theta = f.theta
    if x.shape[-1] != theta.shape[1] or x.shape[-2] != lt.shape[-1]:
        raise exp.DimensionError('Cannot filter features {} on graph {} with weights {}'.format(
            tuple(x.shape), tuple(lt.shape), tuple(theta.shape)))
    txPrev = x
    out = matmul(txPrev, theta[0])
    if f.order > 1:
        tx = matmul(lt, x)
        out = elementwise('add', out, matmul(tx, theta[1]))
        for q in range(2, f.order):
            txNext = elementwise('sub', elementwise('mul', 2.0, matmul(lt, tx)), txPrev)
            out = elementwise('add', out, matmul(txNext, theta[q]))
            txPrev, tx = tx, txNext
    return elementwise('add', out, f.bias.expand_as(out))


class GConvGRUCell(nn.Module):
    """ Gated recurrent unit whose input and hidden transforms are Chebyshev graph filters """

    def __init__(self, inDim: int, hiddenDim: int = 64, order: int = 3):
        super().__init__()
        self.hiddenDim = hiddenDim
        self.convXr = ChebFilter(inDim, hiddenDim, order)
        self.convHr = ChebFilter(hiddenDim, hiddenDim, order)
        self.convXu = ChebFilter(inDim, hiddenDim, order)
        self.convHu = ChebFilter(hiddenDim, hiddenDim, order)
        self.convXc = ChebFilter(inDim, hiddenDim, order)
        self.convHc = ChebFilter(hiddenDim, hiddenDim, order)

    def forward(self, x: Tensor, lt: Tensor, h: Tensor) -> Tensor:
        return gruStep(self, x, lt, h)


def gruStep(cell: GConvGRUCell, x: Tensor, lt: Tensor, h: Tensor) -> Tensor:
    """
    One recurrent step. All six convolutions share the Laplacian of the current snapshot

    :param cell: the cell weights
    :param x: node features at this step (..., N, K)
    :param lt: scaled Laplacian at this step (..., N, N)
    :param h: previous hidden state (..., N, hidden)

    :return: the new hidden state (..., N, hidden)

    """
    if h.shape[-1] != cell.hiddenDim or h.shape[-2] != x.shape[-2]:
        raise exp.DimensionError('Hidden state {} does not fit features {}'.format(
            tuple(h.shape), tuple(x.shape)))
    r = elementwise('sigmoid', elementwise('add', cell.convXr(x, lt), cell.convHr(h, lt)))
    u = elementwise('sigmoid', elementwise('add', cell.convXu(x, lt), cell.convHu(h, lt)))
    c = elementwise('tanh', elementwise('add', cell.convXc(x, lt),
                                        cell.convHc(elementwise('mul', r, h), lt)))
    return elementwise('add', elementwise('mul', u, h), elementwise('mul', elementwise('sub', 1.0, u), c))


class Readout(nn.Module):
    """
    Reduces the (N, hidden) final state to an N-vector with one linear map shared by all agents,
    then applies a feedforward network N -> sizes[0] -> ... with ReLU between layers
    """

    def __init__(self, nAgents: int, hiddenDim: int = 64, sizes: Sequence[int] = (32, 16, 16)):
        super().__init__()
        self.reducer = nn.Linear(hiddenDim, 1)
        dims = [nAgents, *sizes]
        self.layers = nn.ModuleList([nn.Linear(a, b) for a, b in zip(dims[:-1], dims[1:])])

    @property
    def outDim(self) -> int:
        return self.layers[-1].out_features

    def forward(self, h: Tensor) -> Tensor:
        out = affine(h, self.reducer.weight, self.reducer.bias).squeeze(-1)
        for i, layer in enumerate(self.layers):
            if i > 0:
                out = elementwise('relu', out)
            out = affine(out, layer.weight, layer.bias)
        return out


class Embedder(nn.Module):
    """ Maps the snapshots of a trace to a fixed-size embedding """

    def __init__(self, nAgents: int, nTopics: int, hiddenDim: int = 64, order: int = 3,
                 readout: Sequence[int] = (32, 16, 16)):
        super().__init__()
        self.nAgents = nAgents
        self.nTopics = nTopics
        self.cell = GConvGRUCell(nTopics, hiddenDim, order)
        self.readout = Readout(nAgents, hiddenDim, readout)

    @property
    def outDim(self) -> int:
        return self.readout.outDim

    def forward(self, x: Tensor, lt: Tensor) -> Tensor:
        """
        :param x: opinions as reals, with shape (..., T+1, N, K)
        :param lt: scaled Laplacians with shape (..., T+1, N, N)

        :return: embeddings with shape (..., outDim)

        """
        if x.shape[-2:] != (self.nAgents, self.nTopics):
            raise exp.DimensionError('Expected {} agents and {} topics, got features {}'.format(
                self.nAgents, self.nTopics, tuple(x.shape)))
        h = x.new_zeros(x.shape[:-3] + (self.nAgents, self.cell.hiddenDim))
        for t in range(x.shape[-3]):
            h = self.cell(x[..., t, :, :], lt[..., t, :, :], h)
        return self.readout(h)


def prepareTrace(trace: GraphTrace, dtype: torch.dtype = torch.float32) -> Tuple[Tensor, Tensor]:
    """ Node features (T+1, N, K) and scaled Laplacians (T+1, N, N) of a trace """
    x = torch.as_tensor(trace.z, dtype=dtype)
    with torch.no_grad():
        lt = scaledLaplacian(torch.as_tensor(trace.w, dtype=dtype))
    return x, lt


def prepareBatch(traces: Sequence[GraphTrace], dtype: torch.dtype = torch.float32) -> Tuple[Tensor, Tensor]:
    """ Stacks the prepared traces along a new leading dimension """
    prepared = [prepareTrace(t, dtype) for t in traces]
    return torch.stack([p[0] for p in prepared]), torch.stack([p[1] for p in prepared])


def embedTrace(embedder: Embedder, trace: GraphTrace) -> Tensor:
    """ Embedding of a single trace, computed in the precision of the embedder weights """
    dtype = next(embedder.parameters()).dtype
    return embedder(*prepareTrace(trace, dtype))
