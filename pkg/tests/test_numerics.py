import math

import numpy as np
import pytest
import torch

from microCal import exceptions as exp
from microCal.numerics import backward, elementwise, finiteChecks, gradientCheck, matmul, numericJacobian


def test_matmul_identity():
    a = torch.tensor([[1., 2.], [3., 4.]], dtype=torch.float64)
    assert torch.equal(matmul(torch.eye(2, dtype=torch.float64), a), a)


def test_matmul_permutation():
    a = torch.tensor([[1., 2.], [3., 4.]], dtype=torch.float64)
    p = torch.tensor([[0., 1.], [1., 0.]], dtype=torch.float64)
    assert matmul(a, p).tolist() == [[2., 1.], [4., 3.]]


def test_matmul_loop_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m, k, n = rng.integers(1, 6, size=3)
        a = rng.normal(size=(m, k))
        b = rng.normal(size=(k, n))
        expected = np.zeros((m, n))
        for i in range(m):
            for j in range(n):
                for c in range(k):
                    expected[i, j] += a[i, c] * b[c, j]
        got = matmul(torch.as_tensor(a), torch.as_tensor(b)).numpy()
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12)


def test_matmul_associative():
    g = torch.Generator().manual_seed(0)
    a, b, c = (torch.randn(4, 4, generator=g, dtype=torch.float64) for _ in range(3))
    torch.testing.assert_close(matmul(matmul(a, b), c), matmul(a, matmul(b, c)), rtol=0, atol=1e-12)


def test_matmul_batched():
    x = torch.ones(5, 3, 2, dtype=torch.float64)
    y = torch.ones(2, 4, dtype=torch.float64)
    out = matmul(x, y)
    assert out.shape == (5, 3, 4)
    assert torch.all(out == 2)


def test_matmul_shape_errors():
    with pytest.raises(exp.DimensionError):
        matmul(torch.ones(2, 3), torch.ones(2, 3))
    with pytest.raises(exp.DimensionError):
        matmul(torch.ones(3), torch.ones(3, 1))


def test_elementwise_sigmoid():
    assert elementwise('sigmoid', torch.tensor(0.)).item() == 0.5
    assert elementwise('sigmoid', torch.tensor(1., dtype=torch.float64)).item() == pytest.approx(0.7310586,
                                                                                              abs=1e-7)


def test_elementwise_unary():
    x = torch.tensor([-3., 0., 2.], dtype=torch.float64)
    assert elementwise('relu', x).tolist() == [0., 0., 2.]
    assert elementwise('tanh', x)[1].item() == 0.
    assert elementwise('exp', x)[2].item() == pytest.approx(math.exp(2))
    assert elementwise('log', torch.tensor([math.e], dtype=torch.float64)).item() == pytest.approx(1.)


def test_elementwise_domain_errors():
    with pytest.raises(exp.NumericError):
        elementwise('log', torch.tensor([1., -1.]))
    with pytest.raises(exp.NumericError):
        elementwise('exp', torch.tensor([1000.], dtype=torch.float64))
    with finiteChecks(False):
        assert math.isinf(elementwise('exp', torch.tensor([1000.], dtype=torch.float64)).item())
    with pytest.raises(exp.NumericError):
        elementwise('exp', torch.tensor([1000.], dtype=torch.float64))


def test_elementwise_broadcasting():
    a = torch.ones(2, 3)
    assert torch.all(elementwise('mul', a, 2.0) == 2)
    assert torch.all(elementwise('sub', 1.0, a) == 0)
    assert torch.all(elementwise('add', a, torch.tensor(1.)) == 2)
    with pytest.raises(exp.DimensionError):
        elementwise('add', torch.ones(2), torch.ones(3))
    with pytest.raises(exp.DimensionError):
        elementwise('mul', torch.ones(2, 3), torch.ones(3))


def test_elementwise_unknown():
    with pytest.raises(exp.UsageError):
        elementwise('cosh', torch.ones(2))
    with pytest.raises(exp.UsageError):
        elementwise('add', torch.ones(2))


def test_backward_simple():
    p = torch.tensor([1., 2.], dtype=torch.float64, requires_grad=True)
    q = torch.tensor([5.], dtype=torch.float64, requires_grad=True)
    grads = backward((p * p).sum(), {'p': p, 'q': q})
    assert grads['p'].tolist() == [2., 4.]
    assert grads['q'].tolist() == [0.]


def test_backward_requires_scalar():
    p = torch.ones(2, requires_grad=True)
    with pytest.raises(exp.UsageError):
        backward(p * 2, {'p': p})
    with pytest.raises(exp.UsageError):
        backward(torch.tensor(1.), {'p': p})


def test_backward_deterministic():
    g = torch.Generator().manual_seed(1)
    w = torch.randn(3, 4, generator=g, dtype=torch.float64, requires_grad=True)
    x = torch.randn(5, 3, generator=g, dtype=torch.float64)
    loss = torch.tanh(matmul(x, w)).sum()
    first = backward(loss, {'w': w}, retainGraph=True)
    second = backward(loss, {'w': w})
    assert torch.equal(first['w'], second['w'])


def test_gradient_check_two_layers():
    g = torch.Generator().manual_seed(7)
    w1 = torch.randn(3, 4, generator=g, dtype=torch.float64, requires_grad=True)
    w2 = torch.randn(4, 1, generator=g, dtype=torch.float64, requires_grad=True)
    x = torch.randn(6, 3, generator=g, dtype=torch.float64)

    def loss():
        hidden = elementwise('tanh', matmul(x, w1))
        return elementwise('sigmoid', matmul(hidden, w2)).sum()

    assert gradientCheck(loss, {'w1': w1, 'w2': w2}) < 1e-4


def test_numeric_jacobian_linear():
    a = torch.tensor([[1., 2., 0.], [0., -1., 3.]], dtype=torch.float64)
    jac = numericJacobian(lambda v: a @ v, torch.zeros(3, dtype=torch.float64))
    torch.testing.assert_close(jac, a, rtol=0, atol=1e-8)
