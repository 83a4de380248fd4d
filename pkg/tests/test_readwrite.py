import os

import numpy as np
import pytest
import torch

from microCal import exceptions as exp
from microCal.data import Shape, SimConfig
from microCal.nn import PosteriorModel
from microCal.operation.readwrite import readCheckpoint, readCorpus, readJson, readManifest, readSamples, \
    withoutTiming, writeCheckpoint, writeCorpus, writeJson, writeSamples
from microCal.training import generateCorpus
from tests.utilities import TINY_ARCH, smallTrace


def storeBytes(directory):
    return {name: open(os.path.join(directory, name), 'rb').read() for name in sorted(os.listdir(directory))}


def test_corpus_store_round_trip(tmp_path):
    corpus = generateCorpus(SimConfig(4, 2, 3), 5, seed=2)
    first = str(tmp_path / 'a')
    manifest = writeCorpus(corpus, first, 'abc')
    assert manifest['n_sims'] == 5 and manifest['arrays']['w']['shape'] == [5, 4, 4, 4]
    assert os.path.getsize(os.path.join(first, 'z.i8')) == 5 * 4 * 4 * 2
    assert os.path.getsize(os.path.join(first, 'w.f32')) == 5 * 4 * 4 * 4 * 4
    loaded, readBack = readCorpus(first, expectedHash='abc')
    assert readBack == manifest
    assert loaded.params == corpus.params and loaded.simSeeds == corpus.simSeeds
    assert loaded.simConfig == corpus.simConfig and loaded.seed == 2
    for a, b in zip(loaded.traces, corpus.traces):
        assert np.array_equal(a.z, b.z)
        np.testing.assert_allclose(a.w, b.w, rtol=0, atol=1e-7)
    second = str(tmp_path / 'b')
    writeCorpus(loaded, second, 'abc')
    assert storeBytes(first) == storeBytes(second)


def test_corpus_store_errors(tmp_path):
    corpus = generateCorpus(SimConfig(4, 2, 3), 3, seed=0)
    directory = str(tmp_path / 'store')
    writeCorpus(corpus, directory, 'abc')
    with pytest.raises(exp.ConfigError):
        readCorpus(directory, expectedHash='other')
    with open(os.path.join(directory, 'theta.f64'), 'ab') as f:
        f.write(b'\0')
    with pytest.raises(exp.StoreError):
        readCorpus(directory)
    with pytest.raises(exp.StoreError):
        readManifest(str(tmp_path / 'missing'))


def test_corpus_store_invalid_trace(tmp_path):
    corpus = generateCorpus(SimConfig(4, 2, 3), 2, seed=0)
    directory = str(tmp_path / 'store')
    writeCorpus(corpus, directory, 'abc')
    path = os.path.join(directory, 'z.i8')
    z = np.fromfile(path, dtype='|i1')
    z[5] = 0
    z.tofile(path)
    with pytest.raises(exp.TraceValidationError):
        readCorpus(directory)
    assert len(readCorpus(directory, validate=False)[0]) == 2


def test_checkpoint_round_trip(tmp_path):
    model = PosteriorModel(Shape(4, 2, 3), TINY_ARCH).initParameters(3)
    path = str(tmp_path / 'model.ckpt')
    header = writeCheckpoint(model, path, seed=3, epoch=7, valLoss=1.25, dataHash='h')
    loaded, readHeader = readCheckpoint(path)
    assert readHeader == header
    assert readHeader['epoch'] == 7 and readHeader['data_hash'] == 'h'
    assert loaded.shape == model.shape and loaded.arch == model.arch
    for (name, a), (_, b) in zip(model.named_parameters(), loaded.named_parameters()):
        assert torch.equal(a, b), name
    trace = smallTrace(1)
    theta = torch.tensor([[1.0, 0.8, 0.5, 0.5], [3.0, 0.2, 0.1, 0.9]])
    with torch.no_grad():
        assert torch.equal(model.logProb(theta, model.embed(trace)), loaded.logProb(theta, loaded.embed(trace)))


def test_checkpoint_truncated(tmp_path):
    model = PosteriorModel(Shape(4, 2, 3), TINY_ARCH).initParameters(0)
    path = str(tmp_path / 'model.ckpt')
    writeCheckpoint(model, path)
    content = open(path, 'rb').read()
    with open(path, 'wb') as f:
        f.write(content[:-4])
    with pytest.raises(exp.StoreError):
        readCheckpoint(path)
    with open(path, 'wb') as f:
        f.write(content[:4])
    with pytest.raises(exp.StoreError):
        readCheckpoint(path)
    with pytest.raises(exp.StoreError):
        readCheckpoint(str(tmp_path / 'missing.ckpt'))


def test_json_report(tmp_path):
    path = str(tmp_path / 'report.json')
    writeJson(path, {'b': 1, 'timing': {'wall_clock_s': 2.0}})
    content = readJson(path)
    assert content['schema_version'] == 1
    assert withoutTiming(content) == {'schema_version': 1, 'b': 1}
    with open(path, 'w') as f:
        f.write('{')
    with pytest.raises(exp.StoreError):
        readJson(path)


def test_samples_file(tmp_path):
    path = str(tmp_path / 'samples.f64')
    samples = np.arange(12, dtype=np.float64).reshape(3, 4) / 7
    writeSamples(path, samples)
    assert os.path.getsize(path) == 96
    assert np.array_equal(readSamples(path), samples)
    with pytest.raises(exp.StoreError):
        readSamples(path, nDims=5)
