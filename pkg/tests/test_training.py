import math

import numpy as np
import pytest
import torch

from microCal import exceptions as exp
from microCal.data import ModelParams, Shape, SimConfig
from microCal.nn import PosteriorModel, buildModel, prepareBatch
from microCal.numerics import AdamState, adamStep, backward
from microCal.runconfig import TrainConfig
from microCal.status import StopReason
from microCal.training import Batch, Corpus, EarlyStopping, TrainReport, Trainer, generateCorpus, nllLoss
from microCal.utils import TORCH_KEY, torchGenerator
from tests.mocks import ScriptedTrainer
from tests.utilities import TINY_ARCH, smallTrace, zeroParameters

SHAPE = Shape(4, 2, 3)


def tinyCorpus(n: int = 20, seed: int = 0) -> Corpus:
    return generateCorpus(SimConfig(4, 2, 3), n, seed)


def centerBatch(n: int) -> Batch:
    x, lt = prepareBatch([smallTrace(s) for s in range(n)], torch.float64)
    return Batch(torch.tensor([[2.5, 0.5, 0.5, 0.5]] * n, dtype=torch.float64), x, lt)


def test_loss_zero_model():
    model = zeroParameters(PosteriorModel(SHAPE).double())
    assert nllLoss(model, centerBatch(3)).item() == pytest.approx(-0.259986, abs=1e-6)


def test_loss_duplicated_batch():
    model = PosteriorModel(SHAPE, TINY_ARCH).double().initParameters(1)
    batch = centerBatch(2)
    doubled = Batch(*(torch.cat([t, t]) for t in batch))
    assert nllLoss(model, doubled).item() == pytest.approx(nllLoss(model, batch).item(), abs=1e-12)


def test_loss_not_finite():
    model = PosteriorModel(SHAPE, TINY_ARCH).double().initParameters(1)
    batch = centerBatch(2)
    theta = batch.theta.clone()
    theta[1, 0] = 7.0
    with pytest.raises(exp.TrainingError) as e:
        nllLoss(model, Batch(theta, batch.x, batch.lt), batchIndex=4)
    assert e.value.batchIndex == 4


def test_early_stopping():
    stopping = EarlyStopping(patience=2)
    assert stopping.update(3.0, 0)
    assert not stopping.update(3.0, 1)
    assert stopping.update(2.0, 2)
    assert not stopping.update(2.5, 3) and not stopping.shouldStop
    assert not stopping.update(2.0, 4) and stopping.shouldStop
    assert stopping.bestEpoch == 2 and stopping.bestLoss == 2.0


def test_split_disjoint():
    trainer = Trainer(tinyCorpus(), TrainConfig(nSims=20, batchSize=5, seed=2), TINY_ARCH)
    assert len(trainer.valIndices) == 2 and len(trainer.trainIndices) == 18
    assert sorted(np.concatenate([trainer.trainIndices, trainer.valIndices]).tolist()) == list(range(20))


def test_initial_model_from_training_seed():
    corpus = tinyCorpus()
    config = TrainConfig(nSims=20, batchSize=5, seed=4)
    trainer = Trainer(corpus, config, TINY_ARCH)
    expected = buildModel(corpus.shape, TINY_ARCH, corpus.box, seed=torchGenerator(4, TORCH_KEY).initial_seed())
    for name, value in expected.namedTensors().items():
        assert torch.equal(trainer.model.namedTensors()[name], value)
    other = Trainer(corpus, config.withSeed(5), TINY_ARCH)
    assert not torch.equal(other.model.namedTensors()['flow.blocks.0.inputWeight'],
                           trainer.model.namedTensors()['flow.blocks.0.inputWeight'])


def test_patience_returns_best_epoch():
    script = [10, 9, 8, 7, 6, 5] + [5] * 40
    config = TrainConfig(nSims=20, batchSize=5, patienceEpochs=20, maxEpochs=100)
    model, report = ScriptedTrainer(tinyCorpus(), config, TINY_ARCH, valLosses=script).fit()
    assert report.stopReason == StopReason.PATIENCE
    assert report.bestEpoch == 5 and report.bestValLoss == 5
    assert report.epochs == 25
    assert torch.all(next(model.parameters()) == 5)


def test_max_epochs():
    config = TrainConfig(nSims=20, batchSize=5, patienceEpochs=20, maxEpochs=4)
    _, report = ScriptedTrainer(tinyCorpus(), config, TINY_ARCH, valLosses=[5, 4, 3, 2, 1]).fit()
    assert report.stopReason == StopReason.MAX_EPOCHS
    assert report.bestEpoch == 4 and report.epochs == 4
    assert len(report.valLosses) == 5 and report.initialValLoss == 5


def test_initial_model_can_win():
    config = TrainConfig(nSims=20, batchSize=5, patienceEpochs=3, maxEpochs=10)
    model, report = ScriptedTrainer(tinyCorpus(), config, TINY_ARCH, valLosses=[1, 2, 2, 2]).fit()
    assert report.bestEpoch == 0 and report.epochs == 3
    assert not torch.all(next(model.parameters()) == 3)


def test_gradients_reach_both_networks():
    trainer = Trainer(tinyCorpus(), TrainConfig(nSims=20, batchSize=5, dtype='float64'), TINY_ARCH)
    before = {k: v.detach().clone() for k, v in trainer.params.items()}
    trainer.trainStep(trainer.trainIndices[:5])
    changed = [k for k, v in trainer.params.items() if not torch.equal(v, before[k])]
    assert any(k.startswith('embedder.') for k in changed)
    assert any(k.startswith('flow.') for k in changed)


def test_full_batch_epoch_is_one_step():
    corpus = tinyCorpus()
    config = TrainConfig(nSims=20, batchSize=18, dtype='float64')
    trainer = Trainer(corpus, config, TINY_ARCH)
    reference = Trainer(corpus, config, TINY_ARCH)
    trainer.runEpoch(1)
    loss = nllLoss(reference.model, reference.batch(np.sort(reference.trainIndices)))
    state = AdamState.forParameters(reference.params, lr=config.lr)
    adamStep(reference.params, backward(loss, reference.params), state)
    for name, p in trainer.params.items():
        torch.testing.assert_close(p, reference.params[name], rtol=0, atol=1e-10)


def test_training_deterministic():
    corpus = tinyCorpus()
    config = TrainConfig(nSims=20, batchSize=5, maxEpochs=3, dtype='float64', seed=4)
    modelA, reportA = Trainer(corpus, config, TINY_ARCH).fit()
    modelB, reportB = Trainer(corpus, config, TINY_ARCH).fit()
    assert reportA.trainLosses == reportB.trainLosses and reportA.valLosses == reportB.valLosses
    for (name, a), (_, b) in zip(modelA.named_parameters(), modelB.named_parameters()):
        assert torch.equal(a, b), name
    _, reportC = Trainer(corpus, config.withSeed(5), TINY_ARCH).fit()
    assert reportC.valLosses != reportA.valLosses


def test_loss_decreases():
    corpus = generateCorpus(SimConfig(6, 2, 5), 100, seed=0)
    config = TrainConfig(nSims=100, batchSize=10, maxEpochs=5, patienceEpochs=5)
    _, report = Trainer(corpus, config).fit()
    assert report.epochs == 5
    assert report.trainLosses[-1] < report.trainLosses[0]


def test_divergence_carries_report():
    corpus = tinyCorpus()
    corpus.params = [ModelParams(6.0, .5, .5, .5)] * len(corpus)
    with pytest.raises(exp.TrainingError) as e:
        Trainer(corpus, TrainConfig(nSims=20, batchSize=5), TINY_ARCH).fit()
    assert e.value.report.stopReason == StopReason.DIVERGED


def test_report_serialization():
    report = TrainReport(trainLosses=[2.0, 1.5], valLosses=[3.0, 2.0, 1.8], bestEpoch=2, bestValLoss=1.8,
                         stopReason=StopReason.MAX_EPOCHS, seed=1, wallClock=0.5)
    state = report.serialize()
    assert state['initial_val_loss'] == 3.0 and state['timing'] == {'wall_clock_s': 0.5}
    assert TrainReport.deserialize(state) == report
    frame = report.toFrame()
    assert frame.shape == (3, 2)
    assert math.isnan(frame['train_loss'][0]) and frame['val_loss'][2] == 1.8
