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
Run configuration: one TOML file with [sim], [train], [arch] and [prior] sections. Missing keys
take the packaged defaults
"""

import dataclasses
import math
import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

try:
    import tomllib
except ImportError:
    import tomli as tomllib

import torch

from microCal import exceptions as exp
from microCal.data import DEFAULT_BOX, PARAM_NAMES, PriorBox, SimConfig
from microCal.utils import configHash

DEFAULTS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config', 'defaults.toml')

_DTYPES = {'float32': torch.float32, 'float64': torch.float64}


def _snake(name: str) -> str:
    return ''.join('_' + c.lower() if c.isupper() else c for c in name)


def _fromSection(cls, section: Dict[str, Any], sectionName: str):
    """ Builds a dataclass from a section with snake_case keys, rejecting unknown keys """
    known = {_snake(f.name): f for f in fields(cls)}
    unknown = sorted(set(section) - set(known))
    if unknown:
        raise exp.ConfigError([('{}.{}'.format(sectionName, k), 'unknown key') for k in unknown])
    kwargs = dict()
    for key, value in section.items():
        f = known[key]
        kwargs[f.name] = tuple(value) if isinstance(value, list) else value
    return cls(**kwargs)


def _toSection(obj) -> Dict[str, Any]:
    return {_snake(f.name): (list(getattr(obj, f.name)) if isinstance(getattr(obj, f.name), tuple)
                             else getattr(obj, f.name)) for f in fields(obj)}


@dataclass(frozen=True)
class ArchConfig:
    """ Architecture constants of the embedder and of the flow """
    chebOrder: int = 3
    hiddenDim: int = 64
    readout: Tuple[int, ...] = (32, 16, 16)
    flowTransforms: int = 5
    flowHidden: int = 50
    alphaClamp: float = 7.0

    def invalid(self) -> List[Tuple[str, str]]:
        errors = list()
        if self.chebOrder < 1:
            errors.append(('arch.cheb_order', 'must be at least 1'))
        if self.hiddenDim < 1:
            errors.append(('arch.hidden_dim', 'must be positive'))
        if not self.readout or any(s < 1 for s in self.readout):
            errors.append(('arch.readout', 'must be a non empty list of positive sizes'))
        if self.flowTransforms < 1:
            errors.append(('arch.flow_transforms', 'must be at least 1'))
        if self.flowHidden < 1:
            errors.append(('arch.flow_hidden', 'must be positive'))
        if not self.alphaClamp > 0:
            errors.append(('arch.alpha_clamp', 'must be positive'))
        return errors

    @property
    def contextDim(self) -> int:
        return self.readout[-1]

    def serialize(self) -> Dict[str, Any]:
        return _toSection(self)

    @staticmethod
    def deserialize(state: Dict[str, Any]) -> 'ArchConfig':
        return _fromSection(ArchConfig, state, 'arch')


@dataclass(frozen=True)
class TrainConfig:
    """ Corpus size and optimisation settings """
    nSims: int = 1000
    batchSize: int = 50
    lr: float = 5e-4
    valFraction: float = 0.1
    patienceEpochs: int = 20
    maxEpochs: int = 500
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsStab: float = 1e-8
    dtype: str = 'float32'

    def validationSize(self, n: int) -> int:
        return int(math.ceil(self.valFraction * n))

    def trainingSize(self, n: int) -> int:
        return n - self.validationSize(n)

    @property
    def torchDtype(self) -> torch.dtype:
        return _DTYPES[self.dtype]

    def invalid(self, nPairs: Optional[int] = None) -> List[Tuple[str, str]]:
        """
        :param nPairs: size of the corpus to train on. Defaults to n_sims

        :return: the list of (key, message) of every invalid value

        """
        errors = list()
        n = self.nSims if nPairs is None else nPairs
        if self.nSims < 1:
            errors.append(('train.n_sims', 'must be at least 1'))
        if self.batchSize < 1:
            errors.append(('train.batch_size', 'must be positive'))
        if not 0 < self.valFraction < 1:
            errors.append(('train.val_fraction', 'must be in (0, 1)'))
        elif n >= 1 and self.trainingSize(n) < 1:
            errors.append(('train.val_fraction', 'leaves no training pairs'))
        elif n >= 1 and self.batchSize > self.trainingSize(n):
            errors.append(('train.batch_size', 'is larger than the training set ({:d} pairs)'
                           .format(self.trainingSize(n))))
        if not self.lr > 0:
            errors.append(('train.lr', 'must be positive'))
        if self.patienceEpochs < 1:
            errors.append(('train.patience_epochs', 'must be at least 1'))
        if self.maxEpochs < 1:
            errors.append(('train.max_epochs', 'must be at least 1'))
        if not 0 <= self.seed < 2 ** 64:
            errors.append(('train.seed', 'must be a 64-bit unsigned integer'))
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            errors.append(('train.beta1/beta2', 'must be in [0, 1)'))
        if not self.epsStab > 0:
            errors.append(('train.eps_stab', 'must be positive'))
        if self.dtype not in _DTYPES:
            errors.append(('train.dtype', 'must be one of {}'.format(', '.join(_DTYPES))))
        return errors

    def validate(self, nPairs: Optional[int] = None) -> 'TrainConfig':
        errors = self.invalid(nPairs)
        if errors:
            raise exp.ConfigError(errors)
        return self

    def withSeed(self, seed: int) -> 'TrainConfig':
        return dataclasses.replace(self, seed=int(seed))

    def serialize(self) -> Dict[str, Any]:
        return _toSection(self)

    @staticmethod
    def deserialize(state: Dict[str, Any]) -> 'TrainConfig':
        return _fromSection(TrainConfig, state, 'train')


@dataclass(frozen=True)
class RunConfig:
    """ The whole configuration of a run """
    sim: SimConfig = field(default_factory=SimConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    arch: ArchConfig = field(default_factory=ArchConfig)
    prior: PriorBox = DEFAULT_BOX

    def validate(self) -> 'RunConfig':
        """ Checks every section. Raises ConfigError listing all invalid keys """
        errors = self.arch.invalid() + self.train.invalid()
        if self.prior.names != PARAM_NAMES:
            errors.append(('prior', 'must define exactly {}'.format(', '.join(PARAM_NAMES))))
        if errors:
            raise exp.ConfigError(errors)
        return self

    def dataHash(self) -> str:
        """ Hash of the settings that determine the data distribution: [sim] without seed and [prior] """
        sim = self.sim.serialize()
        sim.pop('seed')
        return configHash({'sim': sim, 'prior': self.prior.serialize()})

    def serialize(self) -> Dict[str, Any]:
        return {'sim': self.sim.serialize(), 'train': self.train.serialize(),
                'arch': self.arch.serialize(), 'prior': self.prior.serialize()}

    @staticmethod
    def fromDict(state: Dict[str, Any]) -> 'RunConfig':
        """ Builds a configuration from parsed sections, filling missing keys with the defaults """
        defaults = _readToml(DEFAULTS_PATH)
        unknown = sorted(set(state) - set(defaults))
        errors = [(s, 'unknown section') for s in unknown]
        merged = {s: {**defaults[s], **state.get(s, dict())} for s in defaults}
        # the prior box is replaced as a whole
        if 'prior' in state:
            merged['prior'] = dict(state['prior'])
        parts = dict()
        builders = (('sim', SimConfig.deserialize), ('train', TrainConfig.deserialize),
                    ('arch', ArchConfig.deserialize), ('prior', PriorBox.deserialize))
        unknownSim = sorted(set(merged['sim']) - set(defaults['sim']))
        errors.extend(('sim.{}'.format(k), 'unknown key') for k in unknownSim)
        for name, build in builders:
            try:
                parts[name] = build(merged[name])
            except exp.ConfigError as e:
                errors.extend(e.invalid)
            except (TypeError, ValueError, KeyError, IndexError) as e:
                errors.append((name, 'malformed section: {}'.format(e)))
        for name in ('arch', 'train'):
            if name in parts:
                errors.extend(parts[name].invalid())
        if errors:
            raise exp.ConfigError(errors)
        return RunConfig(**parts).validate()

    @staticmethod
    def load(path: Optional[str] = None) -> 'RunConfig':
        """
        Reads a TOML configuration. Without a path, the packaged defaults are returned

        :raise ConfigError: on invalid values or malformed TOML
        :raise StoreError: if the file cannot be read

        """
        return RunConfig.fromDict(_readToml(path) if path else dict())


def _readToml(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'rb') as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise exp.ConfigError([('config', 'malformed TOML in {}: {}'.format(path, e))])
    except OSError as e:
        raise exp.StoreError('Cannot read configuration {}: {}'.format(path, e))
