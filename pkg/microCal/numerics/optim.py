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

from dataclasses import dataclass, field
from typing import Dict, Mapping, Tuple

import torch

from microCal import exceptions as exp

Tensor = torch.Tensor


@dataclass
class AdamState:
    """ Moment accumulators and hyperparameters of the Adam optimiser """
    lr: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsStab: float = 1e-8
    step: int = 0
    m: Dict[str, Tensor] = field(default_factory=dict)
    v: Dict[str, Tensor] = field(default_factory=dict)

    @staticmethod
    def forParameters(params: Mapping[str, Tensor], lr: float = 5e-4, beta1: float = 0.9,
                      beta2: float = 0.999, epsStab: float = 1e-8) -> 'AdamState':
        """ Creates a state with zero moments shaped like every parameter """
        return AdamState(lr=lr, beta1=beta1, beta2=beta2, epsStab=epsStab, step=0,
                         m={n: torch.zeros_like(p) for n, p in params.items()},
                         v={n: torch.zeros_like(p) for n, p in params.items()})


def adamStep(params: Mapping[str, Tensor], grads: Mapping[str, Tensor], state: AdamState) \
        -> Tuple[Mapping[str, Tensor], AdamState]:
    """
    One Adam update with bias correction. Parameters and moments are updated in place

    :param params: parameters by name
    :param grads: gradient of each parameter, by name
    :param state: optimiser state. Moments of parameters seen for the first time are created

    :return: the updated parameters and state

    :raise DimensionError: if gradients or moments do not have the shape of their parameter

    """
    if set(params.keys()) != set(grads.keys()):
        raise exp.DimensionError('Gradients do not match parameters: {}'
                                 .format(sorted(set(params.keys()) ^ set(grads.keys()))))
    for name, p in params.items():
        if grads[name].shape != p.shape:
            raise exp.DimensionError('Gradient of {} has shape {}, expected {}'
                                     .format(name, tuple(grads[name].shape), tuple(p.shape)))
        if name not in state.m:
            state.m[name] = torch.zeros_like(p)
            state.v[name] = torch.zeros_like(p)
        elif state.m[name].shape != p.shape or state.v[name].shape != p.shape:
            raise exp.DimensionError('Moments of {} do not have shape {}'.format(name, tuple(p.shape)))

    state.step += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1 - b1 ** state.step
    correction2 = 1 - b2 ** state.step
    with torch.no_grad():
        for name, p in params.items():
            g = grads[name]
            m = state.m[name].mul_(b1).add_(g, alpha=1 - b1)
            v = state.v[name].mul_(b2).addcmul_(g, g, value=1 - b2)
            mHat = m / correction1
            vHat = v / correction2
            p.sub_(state.lr * mHat / (vHat.sqrt() + state.epsStab))
    return params, state
