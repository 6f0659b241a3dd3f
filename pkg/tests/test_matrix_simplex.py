import numpy as np
import pytest

from matrix_dirichlet.calculus import grad_log_numeric, reversibility_residual
from matrix_dirichlet.errors import DomainError
from matrix_dirichlet.matrix_simplex import (
    MatrixSimplexPoint, Model1Params, Model2Params, drift_model1,
    drift_model2, ellipticity_model1, gamma_model1, gamma_model1_entries,
    gamma_model2, gamma_model2_entries, in_matrix_simplex, log_gamma_d,
    matrix_dirichlet_grad_log, matrix_dirichlet_log_density, model1, model2,
    params_from_json, params_to_json, point_to_real, real_to_point,
    sample_interior, simplex_layout, sylvester_spectrum)
from matrix_dirichlet.simplex import (
    ScalarModelParams, drift_simplex, gamma_simplex)

from conftest import random_hermitian


def random_A(rng, m, low=0.3, high=2.0):
    A = rng.uniform(low, high, (m, m))
    A = 0.5 * (A + A.T)
    np.fill_diagonal(A, 0.0)
    return A


def model2_fixture(rng, d, b_style="identity"):
    C = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    A = C @ C.conj().T / d + 0.2 * np.eye(d)
    if b_style == "identity":
        B = 0.4 * np.eye(d * d).reshape(d, d, d, d)
    else:
        # diagonal coupling indexed by entry pairs, symmetric weights
        y = rng.uniform(0.2, 1.0, (d, d))
        y = 0.5 * (y + y.T)
        B = np.zeros((d, d, d, d))
        for i in range(d):
            for j in range(d):
                B[i, j, i, j] = y[i, j]
    return A, B


# -- points and sampling ------------------------------------------------------

def test_point_validation():
    Id = np.eye(2)
    MatrixSimplexPoint([0.3 * Id, 0.4 * Id])
    with pytest.raises(DomainError):
        MatrixSimplexPoint([0.7 * Id, 0.6 * Id])  # last block not psd
    with pytest.raises(DomainError):
        MatrixSimplexPoint([np.array([[0.2, 0.1j], [0.1j, 0.2]])])


def test_real_roundtrip(rng):
    p = sample_interior(2, 3, rng)
    x = point_to_real(p)
    q = real_to_point(x, 2, 3)
    for Zp, Zq in zip(p.Z, q.Z):
        np.testing.assert_allclose(Zp, Zq, atol=1e-14)
    assert in_matrix_simplex(x, 2, 3)


def test_sample_interior_valid(rng):
    for _ in range(5):
        p = sample_interior(2, 2, rng, margin=1e-3)
        for Z in p.all_blocks():
            assert np.min(np.linalg.eigvalsh(Z)) > 1e-3


# -- density ------------------------------------------------------------------

def test_log_density_beta_reduction():
    # d=1, a=(2,2): Beta(2,2) density 6 z (1-z), at z=0.5 equals 1.5
    p = MatrixSimplexPoint([np.array([[0.5]])])
    val = matrix_dirichlet_log_density([2.0, 2.0], p)
    assert np.isclose(val, np.log(1.5))
    # a = (1,1) is the uniform law on (0,1)
    assert np.isclose(matrix_dirichlet_log_density([1.0, 1.0], p), 0.0)


def test_log_gamma_d_values():
    from scipy.special import gammaln
    assert np.isclose(log_gamma_d(2.5, 1), gammaln(2.5))
    # d=2: Gamma_2(a) = pi Gamma(a+1) Gamma(a)
    expect = np.log(np.pi) + gammaln(4.0) + gammaln(3.0)
    assert np.isclose(log_gamma_d(3.0, 2), expect)
    # oracle: a=(1,1) density is constant 1/vol, and vol(Delta_{1,2}) = pi/2
    log_norm = log_gamma_d(2.0, 2) - 2.0 * log_gamma_d(1.0, 2)
    assert np.isclose(log_norm, np.log(2.0 / np.pi))


def test_grad_log_density_matches_numeric(rng):
    n, d = 2, 2
    a = np.array([1.7, 2.3, 1.4])
    p = sample_interior(n, d, rng, margin=5e-3)
    x = point_to_real(p)
    grad = matrix_dirichlet_grad_log(a, p)

    def log_f(y):
        if not in_matrix_simplex(y, n, d, margin=0.0):
            return None
        return matrix_dirichlet_log_density(a, real_to_point(y, n, d))

    num = grad_log_numeric(log_f, x)
    np.testing.assert_allclose(grad, num, atol=1e-5, rtol=1e-5)


# -- model I ------------------------------------------------------------------

def test_model1_d1_reduction(rng):
    # at d=1 the matrix model is exactly twice the scalar simplex model
    n = 2
    A = random_A(rng, n + 1)
    a = np.array([1.5, 2.0, 1.2])
    mp = Model1Params(A, a)
    sp = ScalarModelParams(A, a)
    z = np.array([0.3, 0.45])
    point = MatrixSimplexPoint([np.array([[z[0]]]), np.array([[z[1]]])])
    np.testing.assert_allclose(gamma_model1(mp, point),
                               2.0 * gamma_simplex(sp, z), atol=1e-14)
    np.testing.assert_allclose(drift_model1(mp, point),
                               2.0 * drift_simplex(sp, z), atol=1e-14)


def test_model1_entry_table_symmetries(rng):
    n, d = 2, 2
    mp = Model1Params(random_A(rng, n + 1), np.ones(n + 1))
    point = sample_interior(n, d, rng)
    T = gamma_model1_entries(mp, point)
    layout = simplex_layout(n, d)
    # symmetry of the bilinear form
    np.testing.assert_allclose(T, T.T, atol=1e-12)
    # conjugating both entries conjugates the value (Hermitian coordinates)
    for p in range(n):
        for q in range(n):
            for (i, j, k, l) in [(0, 1, 1, 0), (0, 1, 0, 1), (1, 1, 0, 1)]:
                lhs = T[layout.entry_index(p, i, j),
                        layout.entry_index(q, k, l)]
                rhs = T[layout.entry_index(p, j, i),
                        layout.entry_index(q, l, k)]
                assert abs(lhs - np.conj(rhs)) < 1e-12
    # realified co-metric is symmetric psd in the interior
    G = gamma_model1(mp, point)
    np.testing.assert_allclose(G, G.T, atol=1e-12)
    assert np.min(np.linalg.eigvalsh(G)) > 0


def test_model1_reversibility(rng):
    n, d = 2, 2
    a = np.array([1.6, 2.1, 1.3])
    mp = Model1Params(random_A(rng, n + 1), a)
    model = model1(mp, d)
    for _ in range(5):
        p = sample_interior(n, d, rng, margin=1e-2)
        res = reversibility_residual(
            model, lambda x: matrix_dirichlet_grad_log(
                a, real_to_point(x, n, d)),
            point_to_real(p))
        assert np.max(np.abs(res)) < 1e-8


def test_model1_boundary_closed_form(rng):
    # Gamma(Z^(p)_ij, log det Z^(q)) = delta_pq sum_s 2 A_sp Z^(s)_ij
    #                                  - 2 A_pq Z^(p)_ij
    # and for the last block: -2 A_{n+1,p} Z^(p)_ij
    n, d = 2, 2
    A = random_A(rng, n + 1)
    mp = Model1Params(A, np.ones(n + 1))
    layout = simplex_layout(n, d)
    point = sample_interior(n, d, rng)
    blocks = point.all_blocks()
    G = gamma_model1(mp, point)
    for q in range(n + 1):
        inv = np.linalg.inv(blocks[q])
        g = np.zeros(layout.n_entries, dtype=complex)
        for p in range(n):
            if p == q:
                for i in range(d):
                    for j in range(d):
                        g[layout.entry_index(p, i, j)] = inv[j, i]
            elif q == n:
                for i in range(d):
                    for j in range(d):
                        g[layout.entry_index(p, i, j)] = -inv[j, i]
        vec = layout.drift_to_entries(G @ layout.grad_to_real(g))
        for p in range(n):
            got = vec[p * d * d:(p + 1) * d * d].reshape(d, d)
            if q < n:
                expect = -2.0 * A[p, q] * blocks[p]
                if p == q:
                    expect = expect + sum(
                        2.0 * A[s, p] * blocks[s] for s in range(n + 1))
            else:
                expect = -2.0 * A[n, p] * blocks[p]
            np.testing.assert_allclose(got, expect, atol=1e-10)


def test_ellipticity_model1(rng):
    n, d = 2, 2
    ones = np.ones((n + 1, n + 1)) - np.eye(n + 1)
    mp = Model1Params(ones, np.ones(n + 1))
    sampler = lambda: sample_interior(n, d, rng, margin=1e-3)
    ok, witness = ellipticity_model1(mp, d, sampler, n_samples=5)
    assert ok and witness is None
    # disconnected support: blocks {1,2} never coupled to the last block
    A = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    mp2 = Model1Params(A, np.ones(n + 1))
    ok, witness = ellipticity_model1(mp2, d, sampler, n_samples=5)
    assert not ok and witness is not None
    point = sampler()
    val = witness @ gamma_model1(mp2, point) @ witness
    assert abs(val) < 1e-12
    # a negative weight is rejected structurally
    A3 = np.array([[0.0, 1.0, -0.5], [1.0, 0.0, 1.0], [-0.5, 1.0, 0.0]])
    ok, witness = ellipticity_model1(Model1Params(A3, np.ones(n + 1)),
                                     d, sampler, n_samples=5)
    assert not ok and witness is None


# -- model II -----------------------------------------------------------------

def test_model2_d1_reduction():
    # at d=1 the entry coupling cancels and the model is the two-weight
    # scalar model: Gamma = 2 alpha z (1-z), L = 2 alpha (a1 - (a1+a2) z)
    alpha = 1.3
    beta = 0.7
    a = np.array([2.0, 3.0])
    mp = Model2Params(np.array([[alpha]]),
                      beta * np.ones((1, 1, 1, 1)), a)
    for z in [0.2, 0.5, 0.8]:
        point = MatrixSimplexPoint([np.array([[z]])])
        np.testing.assert_allclose(gamma_model2(mp, point),
                                   [[2 * alpha * z * (1 - z)]], atol=1e-14)
        np.testing.assert_allclose(
            drift_model2(mp, point),
            [2 * alpha * (a[0] - (a[0] + a[1]) * z)], atol=1e-13)


def test_model2_entry_table_symmetries(rng):
    n, d = 2, 2
    for style in ("identity", "diag"):
        A, B = model2_fixture(rng, d, b_style=style)
        mp = Model2Params(A, B, np.ones(n + 1))
        point = sample_interior(n, d, rng)
        T = gamma_model2_entries(mp, point)
        layout = simplex_layout(n, d)
        np.testing.assert_allclose(T, T.T, atol=1e-12)
        G = gamma_model2(mp, point)
        np.testing.assert_allclose(G, G.T, atol=1e-12)
        for p in range(n):
            for q in range(n):
                for (i, j, k, l) in [(0, 1, 1, 0), (0, 1, 0, 1)]:
                    lhs = T[layout.entry_index(p, i, j),
                            layout.entry_index(q, k, l)]
                    rhs = T[layout.entry_index(p, j, i),
                            layout.entry_index(q, l, k)]
                    assert abs(lhs - np.conj(rhs)) < 1e-12


def test_model2_reversibility(rng):
    n, d = 2, 2
    a = np.array([1.8, 1.4, 2.2])
    for style in ("identity", "diag"):
        A, B = model2_fixture(rng, d, b_style=style)
        mp = Model2Params(A, B, a)
        model = model2(mp, n)
        for _ in range(3):
            p = sample_interior(n, d, rng, margin=1e-2)
            res = reversibility_residual(
                model, lambda x: matrix_dirichlet_grad_log(
                    a, real_to_point(x, n, d)),
                point_to_real(p))
            assert np.max(np.abs(res)) < 1e-8


def test_model2_boundary_closed_form(rng):
    # Gamma(Z^(p)_ij, log det Z^(q)) = 2 delta_pq A_ij - (A Z^(p) + Z^(p) A)_ij
    # for every block q (the entry coupling B cancels identically)
    n, d = 2, 2
    A, B = model2_fixture(rng, d, b_style="diag")
    mp = Model2Params(A, B, np.ones(n + 1))
    layout = simplex_layout(n, d)
    point = sample_interior(n, d, rng)
    blocks = point.all_blocks()
    G = gamma_model2(mp, point)
    for q in range(n + 1):
        inv = np.linalg.inv(blocks[q])
        g = np.zeros(layout.n_entries, dtype=complex)
        for p in range(n):
            sgn = 1.0 if p == q else (-1.0 if q == n else 0.0)
            if sgn != 0.0:
                for i in range(d):
                    for j in range(d):
                        g[layout.entry_index(p, i, j)] = sgn * inv[j, i]
        vec = layout.drift_to_entries(G @ layout.grad_to_real(g))
        for p in range(n):
            got = vec[p * d * d:(p + 1) * d * d].reshape(d, d)
            expect = -(A @ blocks[p] + blocks[p] @ A)
            if p == q:
                expect = expect + 2.0 * A
            np.testing.assert_allclose(got, expect, atol=1e-10)


# -- spectrum identity --------------------------------------------------------

def test_sylvester_spectrum(rng):
    for (n, d) in [(2, 2), (3, 2), (2, 3)]:
        point = sample_interior(n, d, rng, margin=1e-3)
        got = sylvester_spectrum(point)
        last = np.linalg.eigvalsh(point.last())
        expect = np.sort(np.concatenate([np.ones((n - 1) * d), last]))
        np.testing.assert_allclose(got, expect, atol=1e-8)


# -- parameter files ----------------------------------------------------------

def test_params_json_roundtrip(rng):
    mp = Model1Params(random_A(rng, 3), np.array([1.0, 2.0, 1.5]))
    obj = params_to_json(mp, d=2)
    back, n, d = params_from_json(obj)
    assert n == 2 and d == 2
    np.testing.assert_allclose(back.A, mp.A)
    np.testing.assert_allclose(back.a, mp.a)

    A, B = model2_fixture(rng, 2, b_style="diag")
    mp2 = Model2Params(A, B, np.array([1.0, 2.0, 1.5]))
    obj2 = params_to_json(mp2, n=2)
    back2, n2, d2 = params_from_json(obj2)
    assert n2 == 2 and d2 == 2
    np.testing.assert_allclose(back2.A, mp2.A, atol=1e-15)
    np.testing.assert_allclose(back2.B, mp2.B, atol=1e-15)


def test_params_validation():
    with pytest.raises(ValueError):
        Model1Params(np.eye(3) + 0.1, np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        Model2Params(np.array([[1.0, 1.0j], [1.0j, 1.0]]),
                     np.zeros((2, 2, 2, 2)), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        params_from_json({"schema": 2})
