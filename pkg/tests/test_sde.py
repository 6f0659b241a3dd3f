import numpy as np
import pytest

from matrix_dirichlet.calculus import (
    DiffusionModel, reversibility_residual)
from matrix_dirichlet.errors import NotPsdError, StepRejectedError
from matrix_dirichlet.sde import (
    SimConfig, diffusion_factor, em_step, jacobi_grad_log, jacobi_model,
    laguerre_grad_log, laguerre_model, ou_grad_log, ou_model, simulate,
    write_path_csv)
from matrix_dirichlet.simplex import ScalarModelParams, scalar_model


def test_diffusion_factor_basic():
    np.testing.assert_allclose(diffusion_factor(0.5 * np.eye(3)),
                               np.eye(3), atol=1e-14)
    # OU: g = 1 gives sigma = sqrt(2)
    np.testing.assert_allclose(diffusion_factor(np.array([[1.0]])),
                               [[np.sqrt(2.0)]])
    # rank-deficient boundary co-metric
    G = np.array([[1.0, 1.0], [1.0, 1.0]])
    s = diffusion_factor(G)
    np.testing.assert_allclose(s @ s.T, 2.0 * G, atol=1e-12)
    assert np.min(np.abs(np.linalg.svd(s, compute_uv=False))) < 1e-12
    with pytest.raises(NotPsdError):
        diffusion_factor(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_diffusion_factor_random_psd(rng):
    for _ in range(10):
        B = rng.standard_normal((4, 4))
        G = B @ B.T
        s = diffusion_factor(G)
        assert np.max(np.abs(s @ s.T - 2.0 * G)) < 1e-10 * np.max(np.abs(G))


def test_em_step_deterministic_limit(rng):
    # zero co-metric: the step is the exact drift increment
    model = DiffusionModel(2, gamma=lambda x: np.zeros((2, 2)),
                           drift=lambda x: np.array([1.0, -2.0]))
    x = em_step(model, np.array([0.0, 0.0]), 0.25, rng)
    np.testing.assert_allclose(x, [0.25, -0.5], atol=1e-14)


def test_em_step_rejection(rng):
    # a model whose domain excludes everything but the start point
    model = DiffusionModel(1, gamma=lambda x: np.eye(1),
                           drift=lambda x: np.zeros(1),
                           domain_test=lambda x: abs(x[0]) < 1e-12)
    with pytest.raises(StepRejectedError) as exc:
        em_step(model, np.zeros(1), 1.0, rng, retries=3)
    assert exc.value.position is not None
    assert exc.value.proposal is not None


def one_step_moments(model, x0, dt, M, rng):
    d = x0.size
    acc = np.zeros(d)
    acc2 = np.zeros(d)
    for _ in range(M):
        dx = em_step(model, x0, dt, rng) - x0
        acc += dx
        acc2 += dx * dx
    mean = acc / M
    var = acc2 / M - mean ** 2
    return mean, var


@pytest.mark.parametrize("name", ["ou", "laguerre", "jacobi"])
def test_one_step_moments(name, rng):
    # E[dx] = b dt and Var[dx] = 2 g dt to 5 percent at dt = 1e-4
    dt, M = 1e-4, 100000
    if name == "ou":
        model, x0 = ou_model(), np.array([0.7])
    elif name == "laguerre":
        model, x0 = laguerre_model(2.5), np.array([1.3])
    else:
        model, x0 = jacobi_model(2.0, 3.0), np.array([0.2])
    mean, var = one_step_moments(model, x0, dt, M, rng)
    b = model.drift(x0)[0] * dt
    v = 2.0 * model.gamma(x0)[0, 0] * dt
    # the drift increment is tiny; allow 5 percent of the noise scale
    assert abs(mean[0] - b) < 0.05 * np.sqrt(v)
    assert abs(var[0] - v) < 0.05 * v


def stationary_run(model, x0, seed, n_steps=200000, dt=1e-3):
    config = SimConfig(dt=dt, n_steps=n_steps, thin=10, seed=seed,
                      burn_in=n_steps // 10)
    return simulate(model, x0, config)


def test_stationary_ou():
    s = stationary_run(ou_model(), np.array([0.0]), seed=31)
    assert abs(s.mean[0]) < 3.0 * s.se_mean[0]
    # variance target 1; batch-means SE of the second moment via 3-SE of
    # a conservative bound sqrt(2/ess)
    assert abs(s.cov[0, 0] - 1.0) < 3.0 * np.sqrt(2.0 / s.ess[0])
    assert s.ess[0] > 50


def test_stationary_laguerre():
    a = 2.0
    s = stationary_run(laguerre_model(a), np.array([a]), seed=32)
    assert abs(s.mean[0] - a) < 3.0 * s.se_mean[0]
    assert abs(s.cov[0, 0] - a) < 3.0 * a * np.sqrt(2.0 / s.ess[0])


def test_stationary_jacobi():
    # a = b = 2: symmetric beta on (-1, 1); the mapped coordinate
    # (1 + x)/2 is Beta(2, 2) on (0, 1) with mean 1/2
    s = stationary_run(jacobi_model(2.0, 2.0), np.array([0.0]), seed=33,
                       n_steps=100000)
    assert abs(s.mean[0]) < 3.0 * s.se_mean[0]
    y = 0.5 * (1.0 + s.mean[0])
    assert abs(y - 0.5) < 1.5 * s.se_mean[0]


def test_reference_models_reversible(rng):
    for _ in range(20):
        x = np.array([rng.uniform(0.1, 2.5)])
        assert np.max(np.abs(reversibility_residual(
            ou_model(), ou_grad_log, x))) < 1e-8
        assert np.max(np.abs(reversibility_residual(
            laguerre_model(1.7), lambda y: laguerre_grad_log(1.7, y),
            x))) < 1e-8
        xj = np.array([rng.uniform(-0.9, 0.9)])
        assert np.max(np.abs(reversibility_residual(
            jacobi_model(2.0, 3.0), lambda y: jacobi_grad_log(2.0, 3.0, y),
            xj))) < 1e-8


def test_scalar_dirichlet_path(tmp_path):
    # n = 2 uniform Dirichlet: long-run means 1/3, domain preserved
    params = ScalarModelParams(np.array([[0.0, 1.0, 1.0],
                                         [1.0, 0.0, 1.0],
                                         [1.0, 1.0, 0.0]]),
                               np.array([1.0, 1.0, 1.0]))
    model = scalar_model(params, margin=1e-10)
    config = SimConfig(dt=1e-3, n_steps=100000, thin=10, seed=5,
                       burn_in=10000)
    s = simulate(model, np.array([1 / 3, 1 / 3]), config, record=True)
    for i in range(2):
        assert abs(s.mean[i] - 1 / 3) < 3.0 * s.se_mean[i]
    assert s.rejection_fraction < 0.01
    full = np.hstack([s.states, 1.0 - s.states.sum(axis=1, keepdims=True)])
    assert np.min(full) > 0.0
    out = tmp_path / "path.csv"
    write_path_csv(s, out, names=["x1", "x2"])
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config:")
    assert lines[3] == "x1,x2"
    assert len(lines) == 4 + s.count


def test_seed_reproducibility():
    config = SimConfig(dt=1e-3, n_steps=2000, thin=5, seed=77, burn_in=100)
    a = simulate(ou_model(), np.array([0.3]), config)
    b = simulate(ou_model(), np.array([0.3]), config)
    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.second, b.second)
    assert a.n_rejections == b.n_rejections


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(dt=0.0, n_steps=10)
    with pytest.raises(ValueError):
        SimConfig(dt=1e-3, n_steps=10, thin=0)
    with pytest.raises(ValueError):
        SimConfig(dt=1e-3, n_steps=10, burn_in=10)
