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
Dense tensor operations with reverse-mode differentiation. Tensors are torch tensors and the
gradient tape is the torch autograd graph; this module fixes the contract the networks rely on:
shape checks, restricted broadcasting and finiteness of every result
"""

import contextlib
from typing import Callable, Dict, Iterator, Mapping, Optional, Union

import torch

from microCal import exceptions as exp

Tensor = torch.Tensor
Scalar = Union[int, float]

_checksEnabled: bool = True

_UNARY: Dict[str, Callable[[Tensor], Tensor]] = {
    'sigmoid': torch.sigmoid,
    'tanh': torch.tanh,
    'relu': torch.relu,
    'exp': torch.exp,
    'log': torch.log,
}

_BINARY: Dict[str, Callable[[Tensor, Tensor], Tensor]] = {
    'add': torch.add,
    'sub': torch.sub,
    'mul': torch.mul,
}


@contextlib.contextmanager
def finiteChecks(enabled: bool) -> Iterator[None]:
    """ Temporarily enable or disable the finiteness check done after every operation """
    global _checksEnabled
    previous = _checksEnabled
    _checksEnabled = enabled
    try:
        yield
    finally:
        _checksEnabled = previous


def checkFinite(t: Tensor, what: str = 'tensor') -> Tensor:
    """
    Check that every element of 't' is finite

    :return: t, to allow chaining
    :raise NumericError: if some element is NaN or infinite

    """
    if _checksEnabled and not bool(torch.isfinite(t).all()):
        raise exp.NumericError('Non finite values produced by {}'.format(what))
    return t


def _isScalar(x) -> bool:
    return isinstance(x, (int, float)) or (isinstance(x, Tensor) and x.dim() == 0)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """
    Matrix product of a (..., m, k) and b (..., k, n). Leading dimensions follow torch
    broadcasting, the 2-dimensional case is the plain matrix product

    :raise DimensionError: if inner dimensions disagree or an operand has less than 2 dimensions

    """
    if a.dim() < 2 or b.dim() < 2:
        raise exp.DimensionError('matmul needs operands with at least 2 dimensions, got {} and {}'
                                 .format(tuple(a.shape), tuple(b.shape)))
    if a.shape[-1] != b.shape[-2]:
        raise exp.DimensionError('matmul inner dimensions disagree: {} and {}'
                                 .format(tuple(a.shape), tuple(b.shape)))
    try:
        out = torch.matmul(a, b)
    except RuntimeError as e:
        raise exp.DimensionError('matmul batch dimensions disagree: {}'.format(e))
    return checkFinite(out, 'matmul')


def elementwise(op: str, *args: Union[Tensor, Scalar]) -> Tensor:
    """
    Apply an elementwise operation. Unary: sigmoid, tanh, relu, exp, log. Binary: add, sub, mul,
    where operands must have equal shapes or one of them must be a scalar

    :raise UsageError: on unknown operation or wrong number of arguments
    :raise DimensionError: if binary operands cannot be broadcast under the restricted rule
    :raise NumericError: on log of non positive values or overflow

    """
    if op in _UNARY:
        if len(args) != 1 or not isinstance(args[0], Tensor):
            raise exp.UsageError('{} takes a single tensor argument'.format(op))
        x = args[0]
        if op == 'log' and _checksEnabled and not bool((x > 0).all()):
            raise exp.NumericError('log of non positive values')
        return checkFinite(_UNARY[op](x), op)
    if op in _BINARY:
        if len(args) != 2:
            raise exp.UsageError('{} takes two arguments'.format(op))
        a, b = args
        if not (_isScalar(a) or _isScalar(b) or a.shape == b.shape):
            raise exp.DimensionError('{} operands must have equal shapes or one must be scalar, got {} '
                                     'and {}'.format(op, tuple(a.shape), tuple(b.shape)))
        if isinstance(a, (int, float)):
            # torch.sub/mul need a tensor as first argument
            a = torch.as_tensor(a, dtype=b.dtype)
        return checkFinite(_BINARY[op](a, b), op)
    raise exp.UsageError('Unknown elementwise operation "{}"'.format(op))


def backward(loss: Tensor, params: Mapping[str, Tensor], retainGraph: bool = False) -> Dict[str, Tensor]:
    """
    Accumulate the gradient of a scalar loss with respect to every named parameter. Parameters
    that do not contribute to the loss get an all-zero gradient

    :param loss: scalar tensor at the end of the tape
    :param params: parameters by name, each with requires_grad set
    :param retainGraph: keep the tape for another backward pass

    :return: the gradient of every parameter, by name

    :raise UsageError: if the loss is not a scalar or is not on a tape

    """
    if loss.numel() != 1:
        raise exp.UsageError('backward needs a scalar loss, got shape {}'.format(tuple(loss.shape)))
    if not loss.requires_grad:
        raise exp.UsageError('The loss does not depend on any trainable parameter')
    names = list(params.keys())
    tensors = [params[n] for n in names]
    grads = torch.autograd.grad(loss.reshape(()), tensors, retain_graph=retainGraph, allow_unused=True)
    result = dict()
    for name, t, g in zip(names, tensors, grads):
        result[name] = torch.zeros_like(t) if g is None else checkFinite(g, 'gradient of ' + name)
    return result


def numericJacobian(fn: Callable[[Tensor], Tensor], x: Tensor, h: float = 1e-5) -> Tensor:
    """
    Jacobian of fn at x by central differences

    :return: matrix with shape (fn(x).numel(), x.numel())

    """
    x = x.detach().clone()
    flat = x.view(-1)
    columns = list()
    with torch.no_grad():
        for i in range(flat.numel()):
            orig = flat[i].item()
            flat[i] = orig + h
            fp = fn(x).reshape(-1).clone()
            flat[i] = orig - h
            fm = fn(x).reshape(-1).clone()
            flat[i] = orig
            columns.append((fp - fm) / (2 * h))
    return torch.stack(columns, dim=1)


def gradientCheck(fn: Callable[[], Tensor], params: Mapping[str, Tensor], h: float = 1e-5,
                  nCoords: Optional[int] = None, generator: Optional[torch.Generator] = None,
                  floor: float = 1e-5) -> float:
    """
    Compare the gradients returned by :func:`backward` with central finite differences

    :param fn: closure recomputing the scalar loss from the current parameter values
    :param params: parameters by name
    :param h: finite difference step
    :param nCoords: number of coordinates checked per parameter, chosen at random. None checks all
    :param generator: torch generator used to pick coordinates
    :param floor: lower bound of the denominator of the relative error

    :return: the maximum relative error |analytic - numeric| / max(|analytic|, |numeric|, floor)

    """
    grads = backward(fn(), params)
    worst = 0.0
    for name, p in params.items():
        flat = p.data.view(-1)
        if nCoords is None or nCoords >= flat.numel():
            coords = range(flat.numel())
        else:
            coords = torch.randperm(flat.numel(), generator=generator)[:nCoords].tolist()
        analytic = grads[name].reshape(-1)
        with torch.no_grad():
            for i in coords:
                orig = flat[i].item()
                flat[i] = orig + h
                fp = fn().item()
                flat[i] = orig - h
                fm = fn().item()
                flat[i] = orig
                numeric = (fp - fm) / (2 * h)
                a = analytic[i].item()
                worst = max(worst, abs(a - numeric) / max(abs(a), abs(numeric), floor))
    return worst
