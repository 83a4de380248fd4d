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
from typing import Optional

import torch
import torch.nn as nn

from microCal import numerics

Tensor = torch.Tensor


def affine(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    """
    Applies x -> x W^T + b over the last dimension of 'x', like a linear layer

    :param x: input with shape (..., in)
    :param weight: matrix with shape (out, in)
    :param bias: optional vector with shape (out,)

    """
    out = numerics.matmul(x.unsqueeze(-2), weight.t()).squeeze(-2)
    if bias is not None:
        out = numerics.elementwise('add', out, bias.expand_as(out))
    return out


def glorotInit(module: nn.Module, generator: Optional[torch.Generator] = None) -> None:
    """
    Uniform Glorot initialisation of every weight of 'module', with zero biases. The fans are the
    last two dimensions of each weight, so stacked filters get the fans of a single matrix
    """
    with torch.no_grad():
        for name, p in module.named_parameters():
            if name.endswith('bias') or p.dim() < 2:
                p.zero_()
            else:
                bound = math.sqrt(6.0 / (p.shape[-1] + p.shape[-2]))
                p.uniform_(-bound, bound, generator=generator)
