"""The two polynomial diffusion families on the matrix simplex.

Shows the co-metric/drift in entry form, reversibility with respect to
the matrix Dirichlet law, the boundary polynomial property, and the
ellipticity dichotomy for the first model.
"""

import numpy as np

from matrix_dirichlet.calculus import reversibility_residual
from matrix_dirichlet.matrix_simplex import (
    Model1Params, Model2Params, drift_model1_entries, ellipticity_model1,
    gamma_model1_entries, matrix_dirichlet_grad_log, model1, model2,
    point_to_real, real_to_point, sample_interior, sylvester_spectrum)

rng = np.random.Generator(np.random.Philox(21))
n, d = 2, 2

# first model: weights A on block pairs, exponents a
A = np.array([[0.0, 0.8, 1.4],
              [0.8, 0.0, 0.6],
              [1.4, 0.6, 0.0]])
a = np.array([1.6, 2.1, 1.3])
mp1 = Model1Params(A, a)
point = sample_interior(n, d, rng, margin=1e-2)
print("Gamma(Z,Z) entry table shape:", gamma_model1_entries(mp1, point).shape)
print("L(Z) entries (first block):")
print(drift_model1_entries(mp1, point)[:d * d].reshape(d, d))

# reversibility: the drift matches the matrix Dirichlet density with
# exponents a, for both families
m1 = model1(mp1, d)
worst = 0.0
for _ in range(10):
    pt = sample_interior(n, d, rng, margin=1e-2)

    def grad_log(x, a=a, n=n, d=d):
        return matrix_dirichlet_grad_log(a, real_to_point(x, n, d))

    res = reversibility_residual(m1, grad_log, point_to_real(pt))
    worst = max(worst, np.max(np.abs(res)))
print("model I reversibility residual over 10 points: %.2e" % worst)

# second model: a 4-index coupling tensor B plus the scalar-like A part
B = 0.4 * np.einsum("ik,jl->ijkl", np.eye(d), np.eye(d))
mp2 = Model2Params(2.0 * np.eye(d), B, np.array([2.0, 2.0, 2.0]))
m2 = model2(mp2, n)
worst = 0.0
for _ in range(10):
    pt = sample_interior(n, d, rng, margin=1e-2)
    res = reversibility_residual(
        m2, lambda x: matrix_dirichlet_grad_log(
            mp2.a, real_to_point(x, n, d)), point_to_real(pt))
    worst = max(worst, np.max(np.abs(res)))
print("model II reversibility residual over 10 points: %.2e" % worst)

# ellipticity dichotomy: irreducible weights give a non-degenerate
# co-metric in the interior, a zero row collapses directions
ok, info = ellipticity_model1(
    mp1, d, lambda: sample_interior(n, d, rng, margin=1e-2))
print("irreducible A: elliptic =", ok, info)
Ared = np.array([[0.0, 1.0, 0.0],
                 [1.0, 0.0, 0.0],
                 [0.0, 0.0, 0.0]])
ok, info = ellipticity_model1(
    Model1Params(Ared, a), d,
    lambda: sample_interior(n, d, rng, margin=1e-2))
print("reducible A:   elliptic =", ok, info)

# the Sylvester spectrum identity ties the stacked co-metric to the
# spectrum of the last block
point = sample_interior(n, d, rng, margin=1e-2)
print("Sylvester spectrum:", np.round(sylvester_spectrum(point), 6))
print("  expected ones +", np.round(np.linalg.eigvalsh(point.last()), 6))
