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
Checkpoint file: an 8-byte little-endian header length, the header as UTF-8 JSON, then the
trainable tensors as flat little-endian float32 blocks. The header table gives name, shape and byte
offset of every block, relative to the end of the header
"""

import json
import struct
from typing import Any, Dict, Optional, Tuple

import numpy as np
import torch

from microCal import exceptions as exp, flogging
from microCal.data import PriorBox, Shape
from microCal.nn import PosteriorModel
from microCal.runconfig import ArchConfig
from microCal.utils import canonicalJson

CHECKPOINT_VERSION = 1
BLOCK_DTYPE = '<f4'
_LENGTH = struct.Struct('<Q')


def writeCheckpoint(model: PosteriorModel, path: str, seed: int = 0, epoch: int = 0,
                    valLoss: Optional[float] = None, dataHash: str = '') -> Dict[str, Any]:
    """
    Saves the trainable tensors of a model with its architecture and training metadata

    :return: the header

    :raise StoreError: if the file cannot be written

    """
    blocks = list()
    table = list()
    offset = 0
    for name, p in model.named_parameters():
        data = p.detach().to(torch.float32).cpu().numpy().astype(BLOCK_DTYPE).tobytes()
        table.append({'name': name, 'shape': list(p.shape), 'offset': offset})
        blocks.append(data)
        offset += len(data)
    header = {
        'format_version': CHECKPOINT_VERSION,
        'arch': model.arch.serialize(),
        'shape': model.shape.serialize(),
        'prior': model.box.box.serialize(),
        'seed': int(seed),
        'epoch': int(epoch),
        'val_loss': None if valLoss is None else float(valLoss),
        'data_hash': dataHash,
        'dtype': BLOCK_DTYPE,
        'tensors': table
    }
    text = canonicalJson(header).encode('utf-8')
    try:
        with open(path, 'wb') as f:
            f.write(_LENGTH.pack(len(text)))
            f.write(text)
            for data in blocks:
                f.write(data)
    except OSError as e:
        raise exp.StoreError('Cannot write checkpoint {}: {}'.format(path, e))
    flogging.appLogger.info('Checkpoint written to {} ({:d} tensors)'.format(path, len(table)))
    return header


def readCheckpoint(path: str) -> Tuple[PosteriorModel, Dict[str, Any]]:
    """
    Loads a model saved with :func:`writeCheckpoint`. The model is in float32

    :return: the model and the header

    :raise StoreError: if the file is unreadable, truncated or does not match the architecture

    """
    try:
        with open(path, 'rb') as f:
            content = f.read()
    except OSError as e:
        raise exp.StoreError('Cannot read checkpoint {}: {}'.format(path, e))
    if len(content) < _LENGTH.size:
        raise exp.StoreError('Checkpoint {} is truncated'.format(path))
    (length,) = _LENGTH.unpack_from(content)
    start = _LENGTH.size + length
    try:
        header = json.loads(content[_LENGTH.size:start].decode('utf-8'))
        model = PosteriorModel(Shape.deserialize(header['shape']), ArchConfig.deserialize(header['arch']),
                               PriorBox.deserialize(header['prior']))
        table = header['tensors']
    except (ValueError, KeyError, TypeError, exp.ConfigError) as e:
        raise exp.StoreError('Malformed checkpoint header in {}: {}'.format(path, e))
    params = dict(model.named_parameters())
    names = [entry['name'] for entry in table]
    if len(set(names)) != len(names) or set(names) != set(params):
        raise exp.StoreError('Checkpoint {} does not hold exactly the tensors of its architecture'
                             .format(path))
    itemSize = np.dtype(BLOCK_DTYPE).itemsize
    with torch.no_grad():
        for entry in table:
            p = params[entry['name']]
            if list(p.shape) != list(entry['shape']):
                raise exp.StoreError('Tensor {} has shape {}, expected {}'.format(
                    entry['name'], entry['shape'], list(p.shape)))
            begin = start + int(entry['offset'])
            end = begin + p.numel() * itemSize
            if end > len(content):
                raise exp.StoreError('Checkpoint {} is truncated'.format(path))
            values = np.frombuffer(content[begin:end], dtype=BLOCK_DTYPE).reshape(p.shape)
            p.copy_(torch.from_numpy(values.astype(np.float32)))
    return model, header
