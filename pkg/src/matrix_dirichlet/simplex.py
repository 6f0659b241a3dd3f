"""Scalar Dirichlet diffusions on the simplex and their ambient constructions.

The model on the open simplex {x_i > 0, sum x_i < 1} is parametrized by a
symmetric non-negative weight matrix A (size (n+1) x (n+1), zero diagonal)
and a positive vector a, with

    Gamma(x_i, x_j) = -A_ij x_i x_j + delta_ij sum_k A_ik x_k x_i
    L(x_i)          = -x_i sum_j A_ij a_j + a_i sum_j A_ij x_j

where x_{n+1} = 1 - sum x_i.  Its reversible law is the Dirichlet
distribution with parameter a.  Three ambient constructions (rotation fields
on the sphere, independent one-dimensional square-root processes, and a
weighted radial/angular product) project onto it.
"""

from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .calculus import DiffusionModel, ProjectionMap
from .errors import DomainError, OffSphereError
from .poly import MultiPoly


class ScalarModelParams:
    """Weights A and Dirichlet exponents a for the simplex model."""

    def __init__(self, A, a):
        A = np.asarray(A, dtype=float)
        a = np.asarray(a, dtype=float)
        if A.shape != (a.size, a.size):
            raise ValueError("A must be (n+1)x(n+1) matching a")
        if not np.allclose(A, A.T):
            raise ValueError("A must be symmetric")
        if np.any(A < 0):
            raise ValueError("A must be non-negative")
        if np.any(np.abs(np.diag(A)) > 0):
            raise ValueError("A must have zero diagonal")
        if np.any(a <= 0):
            raise ValueError("a must be positive")
        self.A = A
        self.a = a
        self.n = a.size - 1


def full_coordinates(x):
    """Append the implied last coordinate x_{n+1} = 1 - sum x_i."""
    x = np.asarray(x, dtype=float)
    return np.append(x, 1.0 - np.sum(x))


def in_simplex(x, margin=0.0):
    xf = full_coordinates(x)
    return bool(np.all(xf >= margin))


def gamma_simplex(params, x):
    xf = full_coordinates(x)
    if np.any(xf < -1e-12):
        raise DomainError("point outside the simplex")
    n = params.n
    A = params.A
    G = np.empty((n, n))
    row_sums = A[:n] @ xf  # sum_k A_ik x_k for i = 1..n
    for i in range(n):
        for j in range(n):
            G[i, j] = -A[i, j] * xf[i] * xf[j]
        G[i, i] += row_sums[i] * xf[i]
    return G


def drift_simplex(params, x):
    xf = full_coordinates(x)
    if np.any(xf < -1e-12):
        raise DomainError("point outside the simplex")
    n = params.n
    A = params.A
    a = params.a
    return -xf[:n] * (A[:n] @ a) + a[:n] * (A[:n] @ xf)


def scalar_model(params, margin=1e-12):
    return DiffusionModel(
        params.n,
        gamma=lambda x: gamma_simplex(params, x),
        drift=lambda x: drift_simplex(params, x),
        domain_test=lambda x: in_simplex(x, margin=margin),
        name="scalar-dirichlet")


def dirichlet_log_density(a, x):
    a = np.asarray(a, dtype=float)
    xf = full_coordinates(x)
    if np.any(xf <= 0):
        raise DomainError("log density needs a strictly interior point")
    log_norm = gammaln(np.sum(a)) - np.sum(gammaln(a))
    return float(log_norm + np.sum((a - 1.0) * np.log(xf)))


def dirichlet_grad_log(a, x):
    a = np.asarray(a, dtype=float)
    xf = full_coordinates(x)
    if np.any(xf <= 0):
        raise DomainError("gradient needs a strictly interior point")
    n = a.size - 1
    return (a[:n] - 1.0) / xf[:n] - (a[n] - 1.0) / xf[n]


def sample_dirichlet(a, rng, margin=1e-10):
    """Interior Dirichlet sample via normalized gamma draws."""
    a = np.asarray(a, dtype=float)
    while True:
        g = rng.gamma(shape=a)
        s = np.sum(g)
        x = g[:-1] / s
        if in_simplex(x, margin=margin):
            return x


def simplex_gamma_polys(A_rational, n):
    """Exact MultiPoly co-metric table of the simplex model.

    A_rational: (n+1) x (n+1) nested list of Fractions/ints.  Variables are
    x1..xn with x_{n+1} substituted as 1 - x1 - ... - xn.
    """
    variables = tuple("x%d" % (i + 1) for i in range(n))
    xs = [MultiPoly.var(v, variables) for v in variables]
    last = MultiPoly.const(1, variables)
    for xi in xs:
        last = last - xi
    xall = xs + [last]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            p = (-Fraction(A_rational[i][j])) * (xall[i] * xall[j])
            if i == j:
                acc = MultiPoly(variables)
                for k in range(n + 1):
                    acc = acc + Fraction(A_rational[i][k]) * xall[k]
                p = p + acc * xall[i]
            row.append(p)
        table.append(row)
    return table, variables


def _partition_sets(p_sizes):
    sets = []
    start = 0
    for p in p_sizes:
        sets.append(list(range(start, start + p)))
        start += p
    return sets, start


def _rotation_pairs(p_sizes, A):
    """(p, q, weight) triples for the weighted rotation-field generator."""
    sets, N = _partition_sets(p_sizes)
    m = len(p_sizes)
    pairs = []
    # weight 1/4 per unordered block pair makes the image of the generator
    # exactly the simplex model with the given A (the squared-sum map doubles
    # each quadratic field contribution)
    for i in range(m):
        for j in range(i + 1, m):
            w = 0.25 * A[i][j]
            if w == 0.0:
                continue
            for p in sets[i]:
                for q in sets[j]:
                    pairs.append((p, q, w))
    return pairs, N


def _rotation_gamma(y, pairs, N):
    G = np.zeros((N, N))
    for (p, q, w) in pairs:
        v = np.zeros(N)
        v[q] = y[p]
        v[p] = -y[q]
        G += w * np.outer(v, v)
    return G


def _rotation_drift(y, pairs, N):
    b = np.zeros(N)
    for (p, q, w) in pairs:
        b[p] -= w * y[p]
        b[q] -= w * y[q]
    return b


def sphere_ambient(p_sizes, A):
    """Weighted rotation-field diffusion on the sphere and the squared-sum map.

    Returns (model, projection): the model is (1/4) sum_{i<j} A_ij L_ij built
    from the fields y_p d_q - y_q d_p (L_ij the sum of squared rotation
    fields across blocks i and j); the projection sends y to
    x_i = sum_{j in I_i} y_j^2, i = 1..n.  Its image is the simplex model
    with the same A and a_i = p_i / 2.
    """
    pairs, N = _rotation_pairs(p_sizes, A)
    sets, _ = _partition_sets(p_sizes)
    n = len(p_sizes) - 1

    def check(y):
        if abs(np.dot(y, y) - 1.0) > 1e-8:
            raise OffSphereError("|y|^2 = %.6f" % np.dot(y, y))

    def gamma(y):
        check(y)
        return _rotation_gamma(y, pairs, N)

    def drift(y):
        check(y)
        return _rotation_drift(y, pairs, N)

    model = DiffusionModel(N, gamma, drift, name="sphere-rotations")

    def project(y):
        return np.array([np.sum(np.asarray(y)[sets[i]] ** 2)
                         for i in range(n)])

    return model, ProjectionMap(N, n, project, name="squared-sums")


def sample_sphere(N, rng):
    y = rng.standard_normal(N)
    return y / np.linalg.norm(y)


def laguerre_ambient(a):
    """Independent square-root (Laguerre-type) processes and the (S, z) map.

    The ambient model on positive coordinates has Gamma = diag(y) and drift
    a_i - y_i.  The projection returns (S, z_1..z_n) with S = sum y and
    z_i = y_i / S; in those coordinates L(S) = abar - S, Gamma(S,S) = S,
    Gamma(S, z_i) = 0, Gamma(z_i, z_j) = (delta_ij z_i - z_i z_j)/S and
    L(z_i) = (a_i - abar z_i)/S with abar = sum a_i.
    """
    a = np.asarray(a, dtype=float)
    m = a.size
    n = m - 1

    def gamma(y):
        if np.any(np.asarray(y) <= 0):
            raise DomainError("coordinates must be positive")
        return np.diag(np.asarray(y, dtype=float))

    def drift(y):
        if np.any(np.asarray(y) <= 0):
            raise DomainError("coordinates must be positive")
        return a - np.asarray(y, dtype=float)

    model = DiffusionModel(m, gamma, drift,
                           domain_test=lambda y: bool(np.all(np.asarray(y) > 0)),
                           name="laguerre-product")

    def project(y):
        y = np.asarray(y, dtype=float)
        S = np.sum(y)
        return np.concatenate([[S], y[:n] / S])

    return model, ProjectionMap(m, n + 1, project, name="sum-and-ratios")


def ou_warped_ambient(p_sizes, A):
    """Radial Ornstein-Uhlenbeck warped with weighted rotation fields.

    Cartesian model on R^N \\ {0}: the radial part contributes
    Gamma_rad(y_a, y_b) = y_a y_b / r^2 and drift (N-1) y_a / r^2 - y_a;
    the angular part is (1/4r^2) sum_{i<j} A_ij L_ij.  The projection maps to
    (S = r^2, z_1..z_n) with z_i = x_i / S, x_i = sum_{j in I_i} y_j^2.
    """
    pairs, N = _rotation_pairs(p_sizes, A)
    sets, _ = _partition_sets(p_sizes)
    n = len(p_sizes) - 1

    def gamma(y):
        y = np.asarray(y, dtype=float)
        r2 = np.dot(y, y)
        if r2 < 1e-12:
            raise DomainError("origin is outside the domain")
        return np.outer(y, y) / r2 + _rotation_gamma(y, pairs, N) / r2

    def drift(y):
        y = np.asarray(y, dtype=float)
        r2 = np.dot(y, y)
        if r2 < 1e-12:
            raise DomainError("origin is outside the domain")
        return (N - 1.0) * y / r2 - y + _rotation_drift(y, pairs, N) / r2

    model = DiffusionModel(
        N, gamma, drift,
        domain_test=lambda y: bool(np.dot(y, y) > 1e-12),
        name="ou-warped")

    def project(y):
        y = np.asarray(y, dtype=float)
        S = np.dot(y, y)
        xs = np.array([np.sum(y[sets[i]] ** 2) for i in range(n)])
        return np.concatenate([[S], xs / S])

    return model, ProjectionMap(N, n + 1, project, name="radius-and-ratios")
