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
Conditional masked autoregressive flow over a box-supported parameter vector. The box is mapped to
the real space by a per-dimension logit, then a stack of MADE affine transforms maps it to a
standard normal
"""

import math
from typing import Tuple

import torch
import torch.nn as nn

from microCal import exceptions as exp
from microCal.data import DEFAULT_BOX, PriorBox
from microCal.nn.layers import affine
from microCal.numerics import elementwise

Tensor = torch.Tensor


class BoxTransform:
    """ Logit map from an open box to the real space, with its log Jacobian """

    def __init__(self, box: PriorBox = DEFAULT_BOX):
        self.box = box

    def _bounds(self, like: Tensor) -> Tuple[Tensor, Tensor]:
        lower = torch.tensor(self.box.lower, dtype=like.dtype, device=like.device)
        upper = torch.tensor(self.box.upper, dtype=like.dtype, device=like.device)
        return lower, upper

    @property
    def nDims(self) -> int:
        return self.box.nDims

    def contains(self, theta: Tensor) -> Tensor:
        """ Whether each vector lies strictly inside the box (shape of theta without last dim) """
        lower, upper = self._bounds(theta)
        return ((theta > lower) & (theta < upper)).all(dim=-1)

    def forward(self, theta: Tensor) -> Tuple[Tensor, Tensor]:
        """
        :return: u = logit((theta - a) / (b - a)) and the log Jacobian
            sum_d [log(b - a) - log(theta - a) - log(b - theta)]

        :raise DomainError: if some vector is on the boundary or outside the box

        """
        if not bool(self.contains(theta).all()):
            raise exp.DomainError('Parameters outside the open prior box')
        lower, upper = self._bounds(theta)
        u = torch.log(theta - lower) - torch.log(upper - theta)
        logJac = (torch.log(upper - lower) - torch.log(theta - lower) - torch.log(upper - theta)).sum(-1)
        return u, logJac

    def inverse(self, u: Tensor) -> Tensor:
        """ Maps back to the box. The logistic is clamped so results stay strictly inside """
        lower, upper = self._bounds(u)
        tiny = torch.finfo(u.dtype).eps
        s = torch.sigmoid(u).clamp(tiny, 1.0 - tiny)
        return torch.minimum(torch.maximum(lower + (upper - lower) * s, torch.nextafter(lower, upper)),
                             torch.nextafter(upper, lower))

    def logJacobianAt(self, u: Tensor) -> Tensor:
        """ Log Jacobian of the forward map, evaluated from the unconstrained value u """
        lower, upper = self._bounds(u)
        logSigmoids = nn.functional.logsigmoid(u) + nn.functional.logsigmoid(-u)
        return (-torch.log(upper - lower) - logSigmoids).sum(-1)


def _degreeMasks(nDims: int, nHidden: int) -> Tuple[Tensor, Tensor]:
    inDegrees = torch.arange(1, nDims + 1)
    hiddenDegrees = torch.arange(nHidden) % max(nDims - 1, 1) + 1
    inputMask = (hiddenDegrees.unsqueeze(-1) >= inDegrees.unsqueeze(0)).to(torch.get_default_dtype())
    outputMask = (inDegrees.unsqueeze(-1) > hiddenDegrees.unsqueeze(0)).to(torch.get_default_dtype())
    return inputMask, outputMask


class MadeBlock(nn.Module):
    """
    Masked feedforward network with one hidden layer. Output d (mu_d and alpha_d) depends only on
    inputs before d; the context reaches every hidden unit. alpha is soft clamped by
    c * tanh(raw / c)
    """

    def __init__(self, nDims: int = 4, contextDim: int = 16, nHidden: int = 50, alphaClamp: float = 7.0):
        super().__init__()
        self.nDims = nDims
        self.alphaClamp = alphaClamp
        self.inputWeight = nn.Parameter(torch.zeros(nHidden, nDims))
        self.inputBias = nn.Parameter(torch.zeros(nHidden))
        self.contextWeight = nn.Parameter(torch.zeros(nHidden, contextDim))
        self.outputWeight = nn.Parameter(torch.zeros(2 * nDims, nHidden))
        self.outputBias = nn.Parameter(torch.zeros(2 * nDims))
        inputMask, outputMask = _degreeMasks(nDims, nHidden)
        self.register_buffer('inputMask', inputMask)
        self.register_buffer('outputMask', torch.cat([outputMask, outputMask], dim=0))

    def forward(self, u: Tensor, context: Tensor) -> Tuple[Tensor, Tensor]:
        """
        :param u: inputs (..., D)
        :param context: context with the same leading shape (..., C)

        :return: mu and alpha, both (..., D)

        """
        hidden = elementwise('add', affine(u, elementwise('mul', self.inputWeight, self.inputMask),
                                           self.inputBias),
                             affine(context, self.contextWeight))
        hidden = elementwise('relu', hidden)
        out = affine(hidden, elementwise('mul', self.outputWeight, self.outputMask), self.outputBias)
        mu, raw = out[..., :self.nDims], out[..., self.nDims:]
        alpha = elementwise('mul', self.alphaClamp,
                            elementwise('tanh', elementwise('mul', 1.0 / self.alphaClamp, raw)))
        return mu, alpha


def madeForward(block: MadeBlock, u: Tensor, context: Tensor) -> Tuple[Tensor, Tensor]:
    """ mu and alpha of a block """
    return block(u, context)


class Maf(nn.Module):
    """
    Stack of MADE affine transforms. The order of the dimensions is reversed between consecutive
    blocks. forward maps the unconstrained parameters to the base space
    """

    def __init__(self, nDims: int = 4, contextDim: int = 16, nTransforms: int = 5, nHidden: int = 50,
                 alphaClamp: float = 7.0):
        super().__init__()
        self.nDims = nDims
        self.contextDim = contextDim
        self.blocks = nn.ModuleList([MadeBlock(nDims, contextDim, nHidden, alphaClamp)
                                     for _ in range(nTransforms)])

    def _context(self, u: Tensor, context: Tensor) -> Tensor:
        if context.shape[-1] != self.contextDim:
            raise exp.DimensionError('Context has dimension {}, expected {}'.format(
                context.shape[-1], self.contextDim))
        return context.expand(u.shape[:-1] + (self.contextDim,))

    def forward(self, u: Tensor, context: Tensor) -> Tuple[Tensor, Tensor]:
        """
        :return: the base space value and the log determinant of the Jacobian, sum of -alpha

        """
        context = self._context(u, context)
        logDet = u.new_zeros(u.shape[:-1])
        for i, block in enumerate(self.blocks):
            if i > 0:
                u = u.flip(-1)
            mu, alpha = block(u, context)
            u = elementwise('mul', elementwise('sub', u, mu), elementwise('exp', -alpha))
            logDet = elementwise('sub', logDet, alpha.sum(-1))
        return u, logDet

    def inverse(self, v: Tensor, context: Tensor) -> Tuple[Tensor, Tensor]:
        """
        Inverts the blocks one dimension at a time, u_d = mu_d + v_d exp(alpha_d)

        :return: the unconstrained value and the log determinant of the forward Jacobian at it

        """
        context = self._context(v, context)
        logDet = v.new_zeros(v.shape[:-1])
        for i in reversed(range(len(self.blocks))):
            block = self.blocks[i]
            columns = list()
            for d in range(self.nDims):
                known = columns + [torch.zeros_like(v[..., 0])] * (self.nDims - d)
                mu, alpha = block(torch.stack(known, dim=-1), context)
                columns.append(mu[..., d] + v[..., d] * torch.exp(alpha[..., d]))
            u = torch.stack(columns, dim=-1)
            _, alpha = block(u, context)
            logDet = logDet - alpha.sum(-1)
            v = u.flip(-1) if i > 0 else u
        return v, logDet


def _logStandardNormal(v: Tensor) -> Tensor:
    return -0.5 * (v ** 2).sum(-1) - 0.5 * v.shape[-1] * math.log(2 * math.pi)


def mafLogProb(maf: Maf, box: BoxTransform, theta: Tensor, context: Tensor, strict: bool = False) -> Tensor:
    """
    Log density of theta given the context. Vectors outside the open box get -inf

    :param maf: the flow
    :param box: the support transform
    :param theta: parameters (..., D)
    :param context: embeddings (..., C) or a single (C,) embedding shared by all vectors
    :param strict: raise instead of returning -inf outside the box

    :raise DomainError: in strict mode, if some vector is outside the box

    """
    inside = box.contains(theta)
    if strict and not bool(inside.all()):
        raise exp.DomainError('Parameters outside the open prior box')
    center = torch.as_tensor(box.box.center, dtype=theta.dtype)
    safe = torch.where(inside.unsqueeze(-1), theta, center.expand_as(theta))
    u, logJac = box.forward(safe)
    v, logDet = maf(u, context)
    logProb = _logStandardNormal(v) + logDet + logJac
    return torch.where(inside, logProb, torch.full_like(logProb, -math.inf))


def mafSample(maf: Maf, box: BoxTransform, context: Tensor, n: int, generator: torch.Generator = None) \
        -> Tuple[Tensor, Tensor]:
    """
    Draw n vectors given a single context

    :return: samples (n, D) strictly inside the box and their log density along the sampling path

    """
    if n < 0:
        raise exp.UsageError('Number of samples must be non negative')
    with torch.no_grad():
        v = torch.randn(n, maf.nDims, generator=generator, dtype=context.dtype)
        u, logDet = maf.inverse(v, context)
        theta = box.inverse(u)
        logProb = _logStandardNormal(v) + logDet + box.logJacobianAt(u)
    return theta, logProb
