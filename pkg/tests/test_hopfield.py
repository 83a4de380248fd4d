import numpy as np
import pytest

from microCal import exceptions as exp
from microCal.abm import initState, propensity, samplePriorArray, simulate, socialPressure, stepOpinions, \
    stepTies
from microCal.data import ModelParams, SimConfig
from tests.utilities import TRUTH, loopPressure, loopTies, randomOpinions, randomTies


def test_init_extreme_p():
    rng = np.random.default_rng(0)
    config = SimConfig(10, 3, 1)
    z, w = initState(ModelParams(1, .5, .5, 1.0), config, rng)
    assert np.all(z == 1)
    z, _ = initState(ModelParams(1, .5, .5, 0.0), config, rng)
    assert np.all(z == -1)
    assert z.dtype == np.int8
    assert np.array_equal(w, w.T)
    assert np.all(np.diagonal(w) == 0)
    assert np.all(np.abs(w) <= 1)


def test_init_half_p():
    config = SimConfig(20, 5, 1)
    positives = [np.mean(initState(ModelParams(1, .5, .5, .5), config, np.random.default_rng(s))[0] == 1)
                 for s in range(1000)]
    assert np.mean(positives) == pytest.approx(0.5, abs=0.05)


def test_init_bad_ties():
    with pytest.raises(exp.DimensionError):
        initState(TRUTH, SimConfig(4, 1, 1), np.random.default_rng(0), lambda rng, n: np.zeros((n, n + 1)))


def test_pressure_zero_ties():
    z = randomOpinions(np.random.default_rng(0), 5, 3)
    assert np.all(socialPressure(z, np.zeros((5, 5))) == 0)


def test_pressure_two_agents():
    z = np.array([[-1], [1]], dtype=np.int8)
    w = np.array([[0., .5], [.5, 0.]])
    np.testing.assert_array_equal(socialPressure(z, w), [[0.5], [-0.5]])


def test_pressure_loop_oracle():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n, k = rng.integers(2, 7), rng.integers(1, 4)
        z, w = randomOpinions(rng, n, k), randomTies(rng, n)
        np.testing.assert_allclose(socialPressure(z, w), loopPressure(z, w), rtol=0, atol=1e-12)


def test_pressure_ignores_diagonal():
    rng = np.random.default_rng(2)
    z, w = randomOpinions(rng, 4, 2), randomTies(rng, 4)
    wDiag = w.copy()
    np.fill_diagonal(wDiag, 0.7)
    np.testing.assert_array_equal(socialPressure(z, w), socialPressure(z, wDiag))


def test_pressure_single_agent():
    with pytest.raises(exp.ConfigError):
        socialPressure(np.ones((1, 2), dtype=np.int8), np.zeros((1, 1)))


def test_propensity():
    assert propensity(np.array([0.]), 3.0)[0] == 0.5
    assert propensity(np.array([1.]), 1.0)[0] == pytest.approx(0.7310586, abs=1e-7)
    p = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(propensity(p, 2.0) + propensity(-p, 2.0), 1.0)
    with pytest.raises(exp.DomainError):
        propensity(p, 0.0)


def test_opinions_without_noise():
    rng = np.random.default_rng(0)
    pi = np.array([[0.5, 0.7], [0.2, 0.51]])
    assert stepOpinions(pi, 0.0, rng).tolist() == [[-1, 1], [-1, 1]]
    assert np.all(stepOpinions(np.full((3, 2), 0.99), 0.5, rng) == 1)


def test_opinions_noise_frequency():
    pi = np.full((10000, 1), 0.6)
    z = stepOpinions(pi, 1.0, np.random.default_rng(4))
    sigma = np.sqrt(0.6 * 0.4 / 10000)
    assert abs(np.mean(z == 1) - 0.6) < 3 * sigma


def test_opinions_shared_noise():
    z = stepOpinions(np.full((500, 4), 0.6), 1.0, np.random.default_rng(8))
    assert np.all(z == z[:, :1])


def test_ties_extremes():
    rng = np.random.default_rng(1)
    w, z = randomTies(rng, 6), randomOpinions(rng, 6, 3)
    np.testing.assert_array_equal(stepTies(w, z, 0.0), w)
    agree = np.ones((3, 1), dtype=np.int8)
    wNext = stepTies(np.zeros((3, 3)), agree, 1.0)
    assert wNext.tolist() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_ties_loop_oracle():
    rng = np.random.default_rng(6)
    for _ in range(100):
        n, k = rng.integers(2, 7), rng.integers(1, 4)
        lam = rng.random()
        w, z = randomTies(rng, n), randomOpinions(rng, n, k)
        wNext = stepTies(w, z, lam)
        np.testing.assert_allclose(wNext, loopTies(w, z, lam), rtol=0, atol=1e-12)
        assert np.max(np.abs(wNext)) <= 1


def test_simulate_frozen_ties():
    trace = simulate(ModelParams(1, .5, 0.0, .5), SimConfig(6, 2, 5, 3))
    for t in range(1, 6):
        np.testing.assert_array_equal(trace.w[t], trace.w[0])


def test_simulate_consensus_fixed_point():
    def positiveTies(rng, n):
        w = np.full((n, n), 0.5)
        np.fill_diagonal(w, 0)
        return w
    trace = simulate(ModelParams(4.0, 0.01, 0.5, 1.0), SimConfig(8, 2, 5, 0), positiveTies)
    assert np.all(trace.z == 1)


def test_simulate_deterministic():
    config = SimConfig(10, 3, 8, 42)
    assert simulate(TRUTH, config) == simulate(TRUTH, config)
    assert simulate(TRUTH, config) != simulate(TRUTH, config.withSeed(43))


def test_simulate_invariants():
    rng = np.random.default_rng(12)
    for i, row in enumerate(samplePriorArray(rng, 100)):
        trace = simulate(ModelParams.fromArray(row), SimConfig(20, 3, 25, i))
        assert trace.z.shape == (26, 20, 3) and trace.w.shape == (26, 20, 20)
        trace.validate()
        bounds = np.max(np.abs(trace.w), axis=(1, 2))
        assert np.all(bounds[1:] <= np.maximum(bounds[:-1], 1.0))


def test_trace_validation_reports_step():
    trace = simulate(TRUTH, SimConfig(4, 2, 3, 0))
    z = trace.z.copy()
    z[2, 1, 0] = 0
    from microCal.data import GraphTrace
    with pytest.raises(exp.TraceValidationError) as e:
        GraphTrace(z, trace.w).validate()
    assert e.value.step == 2
