import pytest
import torch

from microCal import exceptions as exp
from microCal.numerics import AdamState, adamStep


def test_zero_gradient_keeps_parameters():
    p = {'a': torch.tensor([1., -2.], dtype=torch.float64)}
    state = AdamState.forParameters(p)
    adamStep(p, {'a': torch.zeros(2, dtype=torch.float64)}, state)
    assert p['a'].tolist() == [1., -2.]
    assert state.step == 1


def test_first_step():
    p = {'a': torch.tensor([0.], dtype=torch.float64)}
    state = AdamState.forParameters(p, lr=0.1)
    adamStep(p, {'a': torch.tensor([1.], dtype=torch.float64)}, state)
    assert p['a'].item() == pytest.approx(-0.1 / (1 + 1e-8), abs=1e-12)
    assert state.m['a'].item() == pytest.approx(0.1)
    assert state.v['a'].item() == pytest.approx(0.001)


def test_identical_inputs_identical_updates():
    results = list()
    for _ in range(2):
        p = {'a': torch.linspace(-1, 1, 5, dtype=torch.float64)}
        state = AdamState.forParameters(p)
        for k in range(3):
            adamStep(p, {'a': torch.full((5,), 0.3 * (k + 1), dtype=torch.float64)}, state)
        results.append(p['a'].clone())
    assert torch.equal(results[0], results[1])


def test_lazy_moments():
    p = {'a': torch.ones(2, 2)}
    state = AdamState()
    adamStep(p, {'a': torch.ones(2, 2)}, state)
    assert state.m['a'].shape == (2, 2)


def test_shape_mismatch():
    p = {'a': torch.ones(2)}
    state = AdamState.forParameters(p)
    with pytest.raises(exp.DimensionError):
        adamStep(p, {'a': torch.ones(3)}, state)
    with pytest.raises(exp.DimensionError):
        adamStep(p, {'b': torch.ones(2)}, state)
    state.m['a'] = torch.zeros(5)
    with pytest.raises(exp.DimensionError):
        adamStep(p, {'a': torch.ones(2)}, state)
