import numpy as np
import pytest

from microCal import exceptions as exp, flogging
from microCal.data import DEFAULT_BOX, ModelParams, Shape, SimConfig
from microCal.training import Corpus, generateCorpus, regenerateTrace

CONFIG = SimConfig(4, 2, 3)


def test_corpus_contents():
    corpus = generateCorpus(CONFIG, 6, seed=1)
    assert len(corpus) == 6 and len(corpus.simSeeds) == 6
    assert corpus.shape == Shape(4, 2, 3)
    assert corpus.thetaArray().shape == (6, 4)
    assert np.all(DEFAULT_BOX.contains(corpus.thetaArray()))
    assert corpus.validate() is corpus
    theta, trace = corpus[2]
    assert theta == corpus.params[2] and trace == corpus.traces[2]


def test_corpus_independent_of_jobs():
    serial = generateCorpus(CONFIG, 5, seed=9, jobs=1)
    parallel = generateCorpus(CONFIG, 5, seed=9, jobs=2)
    assert serial.params == parallel.params
    assert serial.simSeeds == parallel.simSeeds
    assert all(a == b for a, b in zip(serial.traces, parallel.traces))


def test_corpus_seeds():
    a = generateCorpus(CONFIG, 3, seed=0)
    b = generateCorpus(CONFIG, 3, seed=1)
    assert a.params != b.params
    prefix = generateCorpus(CONFIG, 2, seed=0)
    assert prefix.params == a.params[:2]


def test_regenerate_trace():
    corpus = generateCorpus(CONFIG, 4, seed=3)
    for i in range(4):
        assert regenerateTrace(corpus, i) == corpus.traces[i]


def test_corpus_errors():
    with pytest.raises(exp.ConfigError):
        generateCorpus(CONFIG, 0, seed=0)
    corpus = generateCorpus(CONFIG, 2, seed=0)
    with pytest.raises(exp.UsageError):
        Corpus(corpus.params, corpus.traces[:1], CONFIG, 0)
    bad = Corpus([ModelParams(6.0, .5, .5, .5)] + corpus.params[1:], corpus.traces, CONFIG, 0)
    with pytest.raises(exp.DomainError):
        bad.validate()


def test_corpus_table():
    table = flogging.logCorpusInfo(generateCorpus(CONFIG, 3, seed=0))
    assert 'rho' in table and 'p_init' in table
