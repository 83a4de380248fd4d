import math

import pytest
import torch
from scipy.integrate import trapezoid

from microCal import exceptions as exp
from microCal.data import DEFAULT_BOX, PriorBox
from microCal.nn import BoxTransform, Maf, MadeBlock, madeForward, mafLogProb, mafSample
from microCal.numerics import AdamState, adamStep, backward, gradientCheck, numericJacobian
from tests.utilities import randomize, zeroParameters

CENTER = torch.tensor([[2.5, 0.5, 0.5, 0.5]], dtype=torch.float64)


def randomContext(seed: int, dim: int = 16) -> torch.Tensor:
    return torch.randn(dim, generator=torch.Generator().manual_seed(seed), dtype=torch.float64)


def test_box_center():
    u, logJac = BoxTransform().forward(CENTER)
    assert torch.all(u == 0)
    assert logJac.item() == pytest.approx(3.935740, abs=1e-6)
    assert BoxTransform().logJacobianAt(u).item() == pytest.approx(3.935740, abs=1e-6)


def test_box_round_trip():
    box = BoxTransform()
    theta = torch.tensor([[0.01, 0.2, 0.7, 0.999], [4.9, 0.5, 0.01, 0.3]], dtype=torch.float64)
    u, logJac = box.forward(theta)
    torch.testing.assert_close(box.inverse(u), theta, rtol=0, atol=1e-10)
    torch.testing.assert_close(box.logJacobianAt(u), logJac, rtol=1e-10, atol=1e-10)


def test_box_boundary():
    box = BoxTransform()
    with pytest.raises(exp.DomainError):
        box.forward(torch.tensor([[0.0, 0.5, 0.5, 0.5]], dtype=torch.float64))
    extreme = box.inverse(torch.tensor([[1e3, -1e3, 0., 0.]], dtype=torch.float64))
    assert bool(box.contains(extreme).all())


def test_made_zero_block():
    block = zeroParameters(MadeBlock().double())
    mu, alpha = madeForward(block, torch.randn(3, 4, dtype=torch.float64), torch.randn(3, 16, dtype=torch.float64))
    assert torch.all(mu == 0) and torch.all(alpha == 0)


def test_made_autoregressive():
    block = randomize(MadeBlock().double(), 0)
    ctx = randomContext(0)
    u = torch.randn(4, generator=torch.Generator().manual_seed(1), dtype=torch.float64)
    jac = numericJacobian(lambda x: torch.cat(block(x, ctx)), u)
    assert jac.shape == (8, 4)
    for d in range(4):
        assert torch.all(jac[d, d:] == 0)
        assert torch.all(jac[4 + d, d:] == 0)
    assert torch.any(jac[3, :3] != 0)


def test_made_autoregressive_after_fitting():
    maf = randomize(Maf(nTransforms=2).double(), 10, scale=0.3)
    box = BoxTransform()
    ctx = randomContext(10)
    g = torch.Generator().manual_seed(10)
    theta = torch.tensor([1.0, 0.8, 0.5, 0.5], dtype=torch.float64) + \
        0.05 * torch.randn(64, 4, generator=g, dtype=torch.float64)
    params = dict(maf.named_parameters())
    state = AdamState.forParameters(params, lr=1e-2)
    losses = list()
    for _ in range(30):
        loss = -mafLogProb(maf, box, theta, ctx).mean()
        losses.append(loss.item())
        adamStep(params, backward(loss, params), state)
    assert losses[-1] < losses[0]
    u = torch.randn(4, generator=g, dtype=torch.float64)
    for block in maf.blocks:
        jac = numericJacobian(lambda x: torch.cat(block(x, ctx)), u)
        for d in range(4):
            assert torch.all(jac[d, d:] == 0)
            assert torch.all(jac[4 + d, d:] == 0)


def test_made_alpha_clamp():
    block = randomize(MadeBlock(alphaClamp=2.0).double(), 1, scale=10.0)
    _, alpha = block(torch.randn(50, 4, dtype=torch.float64), torch.randn(50, 16, dtype=torch.float64))
    assert torch.all(alpha.abs() <= 2.0)


def test_maf_zero_init_center():
    maf = zeroParameters(Maf().double())
    logProb = mafLogProb(maf, BoxTransform(), CENTER, randomContext(2))
    assert logProb.item() == pytest.approx(0.259986, abs=1e-6)


def test_maf_bijective():
    maf = randomize(Maf().double(), 3, scale=0.3)
    ctx = randomContext(3)
    v = torch.randn(20, 4, generator=torch.Generator().manual_seed(3), dtype=torch.float64)
    u, inverseLogDet = maf.inverse(v, ctx)
    back, forwardLogDet = maf(u, ctx)
    torch.testing.assert_close(back, v, rtol=0, atol=1e-8)
    torch.testing.assert_close(inverseLogDet, forwardLogDet, rtol=0, atol=1e-8)


def test_maf_log_determinant():
    maf = randomize(Maf().double(), 4, scale=0.3)
    ctx = randomContext(4)
    u = torch.randn(4, generator=torch.Generator().manual_seed(4), dtype=torch.float64)
    jac = numericJacobian(lambda x: maf(x.unsqueeze(0), ctx)[0][0], u)
    _, expected = torch.linalg.slogdet(jac)
    _, logDet = maf(u.unsqueeze(0), ctx)
    assert logDet.item() == pytest.approx(expected.item(), rel=1e-4)


def test_maf_density_normalized():
    box = BoxTransform(PriorBox(lower=(0.0,), upper=(1.0,), names=('x',)))
    maf = randomize(Maf(nDims=1).double(), 5, scale=0.1)
    grid = torch.linspace(0, 1, 200001, dtype=torch.float64).unsqueeze(-1)
    with torch.no_grad():
        density = torch.exp(mafLogProb(maf, box, grid, randomContext(5)))
    assert density[0].item() == 0 and density[-1].item() == 0
    assert trapezoid(density.numpy(), grid[:, 0].numpy()) == pytest.approx(1.0, abs=1e-3)


def test_maf_outside_box():
    maf = randomize(Maf().double(), 6, scale=0.3)
    theta = torch.tensor([[2.5, 0.5, 0.5, 0.5], [6.0, 0.5, 0.5, 0.5], [1.0, 0.5, 1.0, 0.5]],
                         dtype=torch.float64)
    logProb = mafLogProb(maf, BoxTransform(), theta, randomContext(6))
    assert math.isfinite(logProb[0].item())
    assert logProb[1].item() == -math.inf and logProb[2].item() == -math.inf
    with pytest.raises(exp.DomainError):
        mafLogProb(maf, BoxTransform(), theta, randomContext(6), strict=True)


def test_sample_inside_and_finite():
    maf = randomize(Maf().double(), 7, scale=0.3)
    box = BoxTransform()
    ctx = randomContext(7)
    theta, pathLogProb = mafSample(maf, box, ctx, 10000, torch.Generator().manual_seed(7))
    assert theta.shape == (10000, 4)
    assert bool(box.contains(theta).all())
    with torch.no_grad():
        logProb = mafLogProb(maf, box, theta, ctx)
    assert torch.all(torch.isfinite(logProb))
    torch.testing.assert_close(pathLogProb[:100], logProb[:100], rtol=0, atol=1e-8)


def test_sample_deterministic():
    maf = randomize(Maf().double(), 8, scale=0.3)
    ctx = randomContext(8)
    a, _ = mafSample(maf, BoxTransform(), ctx, 50, torch.Generator().manual_seed(1))
    b, _ = mafSample(maf, BoxTransform(), ctx, 50, torch.Generator().manual_seed(1))
    c, _ = mafSample(maf, BoxTransform(), ctx, 50, torch.Generator().manual_seed(2))
    assert torch.equal(a, b)
    assert not torch.equal(a, c)
    assert mafSample(maf, BoxTransform(), ctx, 0)[0].shape == (0, 4)
    with pytest.raises(exp.UsageError):
        mafSample(maf, BoxTransform(), ctx, -1)


def test_zero_flow_median_at_center():
    maf = zeroParameters(Maf().double())
    theta, _ = mafSample(maf, BoxTransform(), randomContext(9), 10000, torch.Generator().manual_seed(9))
    below = (theta < torch.as_tensor(DEFAULT_BOX.center)).double().mean(dim=0)
    assert torch.all((below - 0.5).abs() < 3 * 0.005)


def test_flow_gradients():
    theta = torch.tensor([[1.0, 0.8, 0.5, 0.5], [3.0, 0.1, 0.9, 0.2]], dtype=torch.float64)
    for seed in range(10):
        maf = randomize(Maf().double(), seed, scale=0.3)
        ctx = randomContext(seed).requires_grad_(True)
        params = dict(maf.named_parameters())
        params['context'] = ctx
        error = gradientCheck(lambda: mafLogProb(maf, BoxTransform(), theta, ctx).sum(), params, nCoords=3,
                              generator=torch.Generator().manual_seed(seed))
        assert error < 1e-4


def test_context_dimension_checked():
    maf = Maf()
    with pytest.raises(exp.DimensionError):
        maf(torch.zeros(1, 4), torch.zeros(15))
