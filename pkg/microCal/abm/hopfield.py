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
Hopfield model of coevolving opinions and ties. Each agent holds K binary opinions and a signed
tie to every other agent. At every step agents feel a social pressure, the tie-weighted mean of
the other agents' opinions, adopt the positive opinion when their propensity beats a noisy
threshold, and ties move towards the current agreement of the two agents
"""

from typing import Callable, Tuple

import numpy as np
from scipy.special import expit

from microCal import exceptions as exp
from microCal.data import GraphTrace, ModelParams, SimConfig
from microCal.utils import streamFor

TieInit = Callable[[np.random.Generator, int], np.ndarray]


def uniformTies(rng: np.random.Generator, nAgents: int) -> np.ndarray:
    """ Symmetric ties with entries U(-1, 1) above the diagonal and zero diagonal """
    upper = np.triu(rng.uniform(-1.0, 1.0, size=(nAgents, nAgents)), k=1)
    return upper + upper.T


def initState(params: ModelParams, config: SimConfig, rng: np.random.Generator,
              tieInit: TieInit = uniformTies) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw the initial snapshot. Every opinion is +1 with probability p_init and -1 otherwise

    :param params: model parameters
    :param config: simulation size
    :param rng: the stream of the simulation. Opinions are drawn first, then ties
    :param tieInit: builds the initial (N, N) tie matrix

    :return: opinions z0 (N, K) as int8 and ties w0 (N, N) as float64

    """
    n, k = config.nAgents, config.nTopics
    z0 = np.where(rng.random((n, k)) < params.pInit, 1, -1).astype(np.int8)
    w0 = np.asarray(tieInit(rng, n), dtype=np.float64)
    if w0.shape != (n, n):
        raise exp.DimensionError('Tie initialiser returned shape {}, expected {}'.format(w0.shape, (n, n)))
    return z0, w0


def socialPressure(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """
    Pressure felt by every agent on every topic: P[i, k] = sum over j != i of w[i, j] * z[j, k],
    divided by N - 1

    :param z: opinions (N, K)
    :param w: ties (N, N)

    :return: array (N, K) with entries in [-1, 1]

    :raise ConfigError: with less than 2 agents

    """
    n = w.shape[0]
    if n < 2:
        raise exp.ConfigError([('n_agents', 'social pressure needs at least 2 agents')])
    if w.shape != (n, n) or z.shape[0] != n:
        raise exp.DimensionError('Incompatible opinions {} and ties {}'.format(z.shape, w.shape))
    offDiagonal = np.array(w, dtype=np.float64)
    np.fill_diagonal(offDiagonal, 0.0)
    return offDiagonal @ z.astype(np.float64) / (n - 1)


def propensity(pressure: np.ndarray, rho: float) -> np.ndarray:
    """ Probability-like propensity of adopting the positive opinion: 1 / (1 + exp(-rho * P)) """
    if not rho > 0:
        raise exp.DomainError('rho must be positive, got {:G}'.format(rho))
    return expit(rho * pressure)


def stepOpinions(pi: np.ndarray, eps: float, rng: np.random.Generator) -> np.ndarray:
    """
    Synchronous opinion update. One noise value U ~ U(-0.5, 0.5) is drawn per agent and shared by
    all its topics; z[i, k] becomes +1 if pi[i, k] > 0.5 + eps * U[i] and -1 otherwise

    :return: the new opinions (N, K) as int8

    """
    noise = rng.uniform(-0.5, 0.5, size=pi.shape[0])
    return np.where(pi > 0.5 + eps * noise[:, np.newaxis], 1, -1).astype(np.int8)


def stepTies(w: np.ndarray, zNext: np.ndarray, lam: float, nTopics: int = None) -> np.ndarray:
    """
    Ties move towards the agreement of the new opinions:
    w'[i, j] = (1 - lam) * w[i, j] + lam / K * sum_k z'[i, k] * z'[j, k], with zero diagonal

    :param w: current ties (N, N)
    :param zNext: opinions after the update (N, K)
    :param lam: learning rate of the ties in [0, 1]
    :param nTopics: K. Defaults to the number of columns of 'zNext'

    """
    k = zNext.shape[1] if nTopics is None else nTopics
    zf = zNext.astype(np.float64)
    wNext = (1.0 - lam) * w + (lam / k) * (zf @ zf.T)
    np.fill_diagonal(wNext, 0.0)
    # rounding may leave the convex combination one ulp outside [-1, 1]
    return np.clip(wNext, -1.0, 1.0)


def simulate(params: ModelParams, config: SimConfig, tieInit: TieInit = uniformTies) -> GraphTrace:
    """
    Run the model for config.nSteps steps. The result is a deterministic function of the
    parameters and config.seed

    :return: the trace with T+1 snapshots, the initial one included

    """
    n, k, steps = config.nAgents, config.nTopics, config.nSteps
    rng = streamFor(config.seed)
    z = np.empty((steps + 1, n, k), dtype=np.int8)
    w = np.empty((steps + 1, n, n), dtype=np.float64)
    z[0], w[0] = initState(params, config, rng, tieInit)
    for t in range(steps):
        pi = propensity(socialPressure(z[t], w[t]), params.rho)
        z[t + 1] = stepOpinions(pi, params.eps, rng)
        w[t + 1] = stepTies(w[t], z[t + 1], params.lam, k)
    return GraphTrace(z, w)
