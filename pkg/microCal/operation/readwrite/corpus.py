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
Corpus store: a directory with a JSON manifest and flat little-endian arrays. theta.f64 holds the
parameters (n, D), z.i8 the opinions (n, T+1, N, K) and w.f32 the ties (n, T+1, N, N)
"""

import json
import os
from typing import Any, Dict, Optional, Tuple

import numpy as np

from microCal import exceptions as exp, flogging
from microCal.data import GraphTrace, ModelParams, PriorBox, SimConfig
from microCal.training import Corpus
from microCal.utils import canonicalJson

STORE_VERSION = 1
MANIFEST = 'manifest.json'
ARRAYS = (('theta', 'theta.f64', '<f8'), ('z', 'z.i8', '|i1'), ('w', 'w.f32', '<f4'))


def _writeBytes(path: str, array: np.ndarray) -> None:
    with open(path, 'wb') as f:
        f.write(np.ascontiguousarray(array).tobytes())


def writeCorpus(corpus: Corpus, directory: str, configHash: str) -> Dict[str, Any]:
    """
    Writes a corpus store. Existing files of a store in 'directory' are overwritten

    :param corpus: the corpus
    :param directory: target folder, created if missing
    :param configHash: hash of the data generating configuration

    :return: the manifest

    :raise StoreError: if the files cannot be written

    """
    n = len(corpus)
    shape = corpus.shape
    arrays = {
        'theta': corpus.thetaArray(),
        'z': np.stack([t.z for t in corpus.traces]) if n else
        np.empty((0, shape.nSteps + 1, shape.nAgents, shape.nTopics)),
        'w': np.stack([t.w for t in corpus.traces]) if n else
        np.empty((0, shape.nSteps + 1, shape.nAgents, shape.nAgents))
    }
    manifest = {
        'format_version': STORE_VERSION,
        'n_sims': n,
        'sim': corpus.simConfig.serialize(),
        'prior': corpus.box.serialize(),
        'seed': corpus.seed,
        'sim_seeds': [int(s) for s in corpus.simSeeds],
        'config_hash': configHash,
        'arrays': {name: {'file': file, 'dtype': dtype, 'shape': list(arrays[name].shape)}
                   for name, file, dtype in ARRAYS}
    }
    try:
        os.makedirs(directory, exist_ok=True)
        for name, file, dtype in ARRAYS:
            _writeBytes(os.path.join(directory, file), arrays[name].astype(dtype))
        with open(os.path.join(directory, MANIFEST), 'w', encoding='utf-8') as f:
            f.write(canonicalJson(manifest) + '\n')
    except OSError as e:
        raise exp.StoreError('Cannot write corpus to {}: {}'.format(directory, e))
    flogging.appLogger.info('Corpus with {:d} traces written to {}'.format(n, directory))
    return manifest


def readManifest(directory: str) -> Dict[str, Any]:
    try:
        with open(os.path.join(directory, MANIFEST), 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise exp.StoreError('Cannot read corpus manifest in {}: {}'.format(directory, e))
    except json.JSONDecodeError as e:
        raise exp.StoreError('Malformed corpus manifest in {}: {}'.format(directory, e))


def _readArray(directory: str, spec: Dict[str, Any]) -> np.ndarray:
    path = os.path.join(directory, spec['file'])
    dtype = np.dtype(spec['dtype'])
    shape = tuple(int(s) for s in spec['shape'])
    expected = int(np.prod(shape)) * dtype.itemsize
    try:
        size = os.path.getsize(path)
    except OSError as e:
        raise exp.StoreError('Cannot read {}: {}'.format(path, e))
    if size != expected:
        raise exp.StoreError('{} has {:d} bytes, the manifest implies {:d}'.format(path, size, expected))
    return np.fromfile(path, dtype=dtype).reshape(shape)


def readCorpus(directory: str, expectedHash: Optional[str] = None, validate: bool = True) \
        -> Tuple[Corpus, Dict[str, Any]]:
    """
    Reads a corpus store

    :param directory: the store folder
    :param expectedHash: if given, the configuration hash the corpus must have been generated with
    :param validate: check the invariants of every trace

    :return: the corpus and its manifest

    :raise StoreError: on missing files or sizes inconsistent with the manifest
    :raise ConfigError: if the configuration hash differs from the expected one
    :raise TraceValidationError: if a trace is invalid

    """
    manifest = readManifest(directory)
    if expectedHash is not None and manifest.get('config_hash') != expectedHash:
        raise exp.ConfigError([('corpus', 'configuration hash {} does not match the current '
                                          'configuration {}'.format(manifest.get('config_hash'),
                                                                    expectedHash))])
    try:
        specs = manifest['arrays']
        theta, z, w = (_readArray(directory, specs[name]) for name, _, _ in ARRAYS)
        simConfig = SimConfig.deserialize(manifest['sim'])
        box = PriorBox.deserialize(manifest['prior'])
        n = int(manifest['n_sims'])
        seed = int(manifest['seed'])
        simSeeds = [int(s) for s in manifest['sim_seeds']]
    except (KeyError, TypeError, ValueError) as e:
        raise exp.StoreError('Malformed corpus manifest in {}: {}'.format(directory, e))
    if not (theta.shape[0] == z.shape[0] == w.shape[0] == n == len(simSeeds)):
        raise exp.StoreError('Corpus in {} has inconsistent sizes'.format(directory))
    corpus = Corpus(params=[ModelParams.fromArray(t) for t in theta],
                    traces=[GraphTrace(z[i], w[i]) for i in range(n)],
                    simConfig=simConfig, seed=seed, simSeeds=simSeeds, box=box)
    if validate:
        corpus.validate()
    return corpus, manifest
