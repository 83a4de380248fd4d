import math

import numpy as np
import pytest

from microCal import exceptions as exp
from microCal.abm import samplePriorArray, simulate
from microCal.data import DEFAULT_BOX, GraphTrace, Shape, SimConfig
from microCal.diagnostics import PriorSampler, ShrunkSampler, cornerData, meanAbsTie, meanOpinion, \
    polarization, posteriorSample, posteriorSummary, ppc, rankUniformity, sbc, truthDensityCheck
from microCal.nn import PosteriorModel
from tests.mocks import PointMassSampler
from tests.utilities import TINY_ARCH, TRUTH, smallTrace, zeroParameters

SMALL = SimConfig(3, 1, 2)


def tinyModel() -> PosteriorModel:
    return PosteriorModel(Shape(4, 2, 3), TINY_ARCH).double().initParameters(0)


def test_corner_point_mass():
    samples = np.tile(TRUTH.toArray(), (100, 1))
    corner = cornerData(samples, bins=10, truth=TRUTH)
    assert corner.bins == 10 and corner.nSamples == 100
    for counts in corner.counts:
        assert counts.sum() == 100 and np.count_nonzero(counts) == 1
    assert len(corner.counts2d) == 6
    for counts in corner.counts2d.values():
        assert counts.sum() == 100 and np.count_nonzero(counts) == 1
    assert corner.ranges[0] == (0.0, 5.0)
    state = corner.serialize()
    assert state['truth'] == [1.0, 0.8, 0.5, 0.5]
    assert [p['name'] for p in state['parameters']] == ['rho', 'eps', 'lam', 'p_init']
    assert state['parameters'][0]['truth'] == 1.0


def test_corner_uniform_prior_flat():
    samples = samplePriorArray(np.random.default_rng(0), 100000)
    corner = cornerData(samples, bins=30)
    expected = 100000 / 30
    sigma = math.sqrt(expected * (1 - 1 / 30))
    for counts in corner.counts:
        assert np.all(np.abs(counts - expected) < 4 * sigma)
    assert corner.truth is None and corner.serialize()['truth'] is None


def test_corner_errors():
    with pytest.raises(exp.UsageError):
        cornerData(np.empty((0, 4)))
    with pytest.raises(exp.UsageError):
        cornerData(np.ones((5, 3)))
    with pytest.raises(exp.UsageError):
        cornerData(np.ones((5, 4)), bins=0)


def test_posterior_sample():
    model = tinyModel()
    observation = smallTrace(3)
    samples, logProb = posteriorSample(model, observation, 200, np.random.default_rng(1))
    assert samples.shape == (200, 4) and logProb.shape == (200,)
    assert samples.dtype == np.float64
    assert np.all(DEFAULT_BOX.contains(samples))
    again, _ = posteriorSample(model, observation, 200, np.random.default_rng(1))
    assert np.array_equal(samples, again)
    empty, emptyLogProb = posteriorSample(model, observation, 0, np.random.default_rng(1))
    assert empty.shape == (0, 4) and emptyLogProb.shape == (0,)


def test_posterior_fingerprint():
    with pytest.raises(exp.FingerprintError):
        posteriorSample(tinyModel(), smallTrace(0, n=5), 10, np.random.default_rng(0))


def test_truth_density_check():
    model = zeroParameters(PosteriorModel(Shape(4, 2, 3)).double())
    center = TRUTH.fromArray(DEFAULT_BOX.center)
    check = truthDensityCheck(model, smallTrace(0), center)
    assert check.logPosterior == pytest.approx(0.259986, abs=1e-6)
    assert check.logPrior == pytest.approx(-math.log(5.0))
    assert check.exceeds
    assert check.serialize()['exceeds'] is True
    with pytest.raises(exp.DomainError):
        truthDensityCheck(model, smallTrace(0), TRUTH.fromArray([1.0, 0.5, 1.0, 0.5]))


def test_posterior_summary():
    samples = samplePriorArray(np.random.default_rng(2), 20000)
    summary = posteriorSummary(samples, TRUTH)
    np.testing.assert_allclose(summary.median, DEFAULT_BOX.center, atol=0.05)
    np.testing.assert_allclose(summary.lower, 0.025 * DEFAULT_BOX.width, atol=0.03)
    assert summary.nInside == 4
    outside = posteriorSummary(np.tile([4.0, .5, .5, .5], (10, 1)), TRUTH)
    assert outside.inside.tolist() == [False, False, True, True]
    assert outside.serialize()['rho']['inside'] is False
    with pytest.raises(exp.UsageError):
        posteriorSummary(np.empty((0, 4)))


def test_sbc_calibrated_sampler():
    result = sbc(PriorSampler(), SMALL, nRuns=200, nDraws=50, seed=0)
    assert result.nRuns == 200 and result.ranks.shape == (200, 4)
    assert np.all((result.ranks >= 0) & (result.ranks <= 50))
    assert np.all(result.pValue > 0.01)
    assert result.rankHistogram(10).sum(axis=1).tolist() == [200] * 4


def test_sbc_overconfident_sampler():
    point = np.asarray(DEFAULT_BOX.lower) + 0.1 * DEFAULT_BOX.width
    result = sbc(ShrunkSampler(point), SMALL, nRuns=100, nDraws=50, seed=0)
    assert np.all(result.pValue < 0.01)


def test_sbc_deterministic():
    a = sbc(PriorSampler(), SMALL, 20, 20, seed=3)
    b = sbc(PriorSampler(), SMALL, 20, 20, seed=3)
    assert np.array_equal(a.ranks, b.ranks) and np.array_equal(a.pValue, b.pValue)
    state = a.serialize()
    assert state['n_runs'] == 20 and len(state['parameters'][0]['ranks']) == 20


def test_sbc_minimum_sizes():
    with pytest.raises(exp.UsageError):
        sbc(PriorSampler(), SMALL, 19, 50, seed=0)
    with pytest.raises(exp.UsageError):
        sbc(PriorSampler(), SMALL, 50, 19, seed=0)


def test_rank_uniformity_detects_bias():
    rng = np.random.default_rng(0)
    uniform = rng.integers(0, 101, size=(500, 1))
    assert rankUniformity(uniform, 100, rng)[1][0] > 0.001
    assert rankUniformity(np.zeros((500, 1)), 100, rng)[1][0] < 1e-6


def test_summaries():
    z = np.array([[[1, 1], [1, 1], [1, 1]],
                  [[1, 1], [1, 1], [-1, -1]]], dtype=np.int8)
    w = np.zeros((2, 3, 3))
    w[1] = [[0, .5, -.5], [.5, 0, 1], [-.5, 1, 0]]
    trace = GraphTrace(z, w)
    assert meanOpinion(trace) == pytest.approx(1 / 3)
    assert meanAbsTie(trace) == pytest.approx(4 / 6)
    assert polarization(trace) == pytest.approx(2 / 3)
    z[1, 2] = [1, -1]
    assert polarization(GraphTrace(z, w)) == 0.0


def test_ppc_point_mass_reproduces_observation():
    config = SimConfig(6, 2, 5, 17)
    observation = simulate(TRUTH, config)
    result = ppc(PointMassSampler(TRUTH), observation, 1, simSeeds=[17])
    for summary in result.summaries:
        assert summary.simulated[0] == summary.observed
        assert summary.quantile == 0.5
        assert summary.insideBand
    assert list(result.toFrame().index) == ['mean_opinion', 'mean_abs_tie', 'polarization']


def test_ppc_draws():
    observation = simulate(TRUTH, SimConfig(6, 2, 5, 1))
    result = ppc(PointMassSampler(TRUTH), observation, 20, seed=4)
    again = ppc(PointMassSampler(TRUTH), observation, 20, seed=4, jobs=2)
    for a, b in zip(result.summaries, again.summaries):
        assert np.array_equal(a.simulated, b.simulated)
        assert 0 <= a.quantile <= 1
        assert a.q05 <= a.q50 <= a.q95
    assert len(result.serialize()['summaries'][0]['simulated']) == 20


def test_ppc_custom_summary_and_errors():
    observation = simulate(TRUTH, SimConfig(4, 1, 3, 0))
    result = ppc(PriorSampler(), observation, 5, summaries={'final_mean': lambda t: float(t.z[-1].mean())})
    assert [s.name for s in result.summaries] == ['final_mean']
    with pytest.raises(exp.UsageError):
        ppc(PriorSampler(), observation, 5, summaries={})
    with pytest.raises(exp.UsageError):
        ppc(PriorSampler(), observation, 0)
    with pytest.raises(exp.UsageError):
        ppc(PriorSampler(), observation, 2, simSeeds=[1])
