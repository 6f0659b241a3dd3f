"""Polar decomposition of a complex Brownian matrix.

A d x d matrix m of independent complex Brownian entries factors as
m = V N with V unitary and N = sqrt(m* m) Hermitian positive definite.
Diagonalizing H = m* m = U D^2 U* gives the spectral radii x_i (the
diagonal of D), the eigenvector unitary U, the rotated unitary W = V U,
and the rank-one spectral projectors Z^(k) = U^(k) (U^(k))*.

This module builds the flat ambient model, the frame extraction, the
closed-form co-metric/drift tables of every part of the frame, the
unitary-transport lemma that reduces them to the diagonal point, and the
degenerate rank-one Dirichlet system carried by (D, Z).

Gauge convention: U is determined only up to a diagonal phase.  The
closed-form tables are stated in the gauge transported from the identity
by left multiplication, i.e. the section along which (U* dU)_rr = 0.
`polar_projection(..., base_frame=...)` realizes that section at a chosen
base point by phase-aligning each eigenvector column against the base
frame, which is what makes finite differences of U (and of the column
mixture W) comparable with the tables.  Quantities invariant under the
diagonal phase (H, N, x, Z) need no alignment.
"""

import numpy as np

from .calculus import DiffusionModel, ProjectionMap
from .errors import SingularError
from .linalg import _hermitize, hermitian_eigen
from .realify import CoordStack, CplxLayout, HermLayout, RealLayout
from .simplex import ScalarModelParams


class PolarFrame:
    """Polar/spectral parts of a nonsingular complex matrix.

    Holds m, V, N, H = m* m, the spectral radii lam (ascending), the
    phase-fixed eigenvector unitary U, W = V U and the rank-one
    projectors Z (all d of them; the last is implied by the first d-1).
    """

    def __init__(self, m, gap_tol=1e-8, check=True, eig_method="lapack"):
        m = np.asarray(m, dtype=complex)
        d = m.shape[0]
        H = m.conj().T @ m
        eig = hermitian_eigen(H, gap_tol=gap_tol, method=eig_method)
        scale = max(float(np.max(eig.lambdas)), 1.0)
        if float(np.min(eig.lambdas)) < 1e-12 * scale:
            raise SingularError(
                "smallest squared radius %.3e" % np.min(eig.lambdas))
        sq = eig.sqrt_frame()
        self.m = m
        self.d = d
        self.H = _hermitize(H)
        self.eig = eig
        self.lam = sq.lambdas
        self.U = sq.U
        self.N = _hermitize(self.U @ np.diag(self.lam) @ self.U.conj().T)
        self.V = m @ self.U @ np.diag(1.0 / self.lam) @ self.U.conj().T
        self.W = self.V @ self.U
        self.Z = sq.projectors
        if check:
            if np.max(np.abs(self.V @ self.N - m)) > 1e-10 * scale:
                raise SingularError("polar reconstruction failed")
            if np.max(np.abs(sum(self.Z) - np.eye(d))) > 1e-10:
                raise SingularError("projectors do not resolve the identity")


def polar_parts(m, gap_tol=1e-8):
    """Polar and spectral factors of m; raises on singular m or near
    spectral collisions (all x_i of a unitary m coincide, for instance)."""
    return PolarFrame(m, gap_tol=gap_tol, check=True)


def complex_bm_ambient(d):
    """Flat diffusion of d^2 independent complex Brownian entries.

    Entry tables Gamma(m, m) = 0 and Gamma(m, conj m) = 2 Id realify to
    the identity co-metric on the 2 d^2 real coordinates, zero drift.
    """
    layout = CplxLayout(d * d, shape=(d, d))
    dim = layout.real_dim
    G = np.eye(dim)
    b = np.zeros(dim)
    return DiffusionModel(dim, gamma=lambda x: G, drift=lambda x: b,
                          name="complex-bm")


def polar_stack(d):
    """Real coordinate stack for the full polar frame."""
    return CoordStack([
        ("H", HermLayout(1, d)),
        ("N", HermLayout(1, d)),
        ("lam", RealLayout(d)),
        ("U", CplxLayout(d * d, shape=(d, d))),
        ("V", CplxLayout(d * d, shape=(d, d))),
        ("W", CplxLayout(d * d, shape=(d, d))),
        ("Z", HermLayout(d - 1, d)),
    ])


def polar_projection(d, gap_tol=1e-8, base_frame=None):
    """Realified m-coordinates -> stacked real coordinates of the frame.

    With base_frame given, the eigenvector columns (and through W = V U
    the W columns) are phase-aligned against the base frame's U so the
    finite-difference derivative realizes the (U* dU)_rr = 0 gauge of the
    closed-form tables; see the module docstring.
    """
    layout = CplxLayout(d * d, shape=(d, d))
    stack = polar_stack(d)
    base_U = None if base_frame is None else np.asarray(base_frame.U)

    def F(x):
        fr = PolarFrame(layout.from_real(x), gap_tol=gap_tol, check=False)
        U = fr.U
        if base_U is not None:
            ph = np.diag(base_U.conj().T @ U)
            U = U * (ph.conj() / np.abs(ph))[None, :]
        W = fr.V @ U
        return stack.pack({
            "H": [fr.H], "N": [fr.N], "lam": fr.lam,
            "U": U, "V": fr.V, "W": W, "Z": fr.Z[:d - 1]})

    return ProjectionMap(layout.real_dim, stack.real_dim, F,
                         name="polar-frame"), stack


def _r_matrix(x):
    """r_ij = 2 (x_i^2 + x_j^2) / (x_i^2 - x_j^2)^2, zero diagonal."""
    X = np.asarray(x, dtype=float) ** 2
    diff = X[:, None] - X[None, :]
    np.fill_diagonal(diff, 1.0)
    r = 2.0 * (X[:, None] + X[None, :]) / diff ** 2
    np.fill_diagonal(r, 0.0)
    return r


def closed_form_polar_system(frame):
    """Co-metric and drift tables of the frame parts at a general point.

    Keys use the entry conventions of the stacked layouts: Hermitian
    blocks index flattened (i, j) entries; unitary blocks come as
    (z, z-bar) pairs, so both the holomorphic table and the mixed table
    are provided.
    """
    d = frame.d
    x = frame.lam
    X = x ** 2
    U, W, H = frame.U, frame.W, frame.H
    dd = d * d
    eye = np.eye(d)
    r = _r_matrix(x)
    s_r = r.sum(axis=1)
    omega = -r.copy()
    np.fill_diagonal(omega, -1.0 / X)

    out = {}
    out["gamma_HH"] = (2.0 * (np.einsum("jk,il->ijkl", eye, H)
                              + np.einsum("il,kj->ijkl", eye, H))
                       ).reshape(dd, dd)
    out["L_H"] = (4.0 * d * eye).ravel().astype(complex)

    psum = x[:, None] + x[None, :]
    coef_nn = 2.0 * (X[:, None] + X[None, :]) / psum ** 2
    out["gamma_NN"] = np.einsum("rs,ir,js,ks,lr->ijkl", coef_nn,
                                U, U.conj(), U, U.conj()).reshape(dd, dd)
    coef_ln = x[None, :] / psum ** 2
    out["L_N"] = (4.0 * np.einsum("rs,ir,jr->ij", coef_ln, U, U.conj())
                  ).ravel()

    out["gamma_lamlam"] = np.eye(d)
    diffX = X[:, None] - X[None, :]
    np.fill_diagonal(diffX, np.inf)
    out["L_lam"] = 1.0 / x + 4.0 * x * np.sum(1.0 / diffX, axis=1)

    out["gamma_UU"] = -np.einsum("lj,il,kj->ijkl", r, U, U).reshape(dd, dd)
    mix = np.einsum("js,is,ks->jik", r, U, U.conj())
    out["gamma_UUbar"] = np.einsum("jik,jl->ijkl", mix, eye).reshape(dd, dd)
    out["L_U"] = (-U * s_r[None, :]).ravel()

    out["gamma_WW"] = np.einsum("jl,il,kj->ijkl", omega, W, W).reshape(dd, dd)
    mixw = np.einsum("js,is,ks->jik", omega, W, W.conj())
    out["gamma_WWbar"] = -np.einsum("jik,jl->ijkl", mixw, eye).reshape(dd, dd)
    # the diagonal omega_jj = -1/x_j^2 does contribute to the drift
    out["L_W"] = (W * omega.sum(axis=0)[None, :]).ravel()

    out["gamma_Ulam"] = np.zeros((dd, d))
    out["gamma_Wlam"] = np.zeros((dd, d))

    # degenerate rank-one Dirichlet system on (Z^(1), ..., Z^(d-1))
    n = d - 1
    Z = frame.Z
    gzz = np.zeros((n * dd, n * dd), dtype=complex)
    for p in range(n):
        for q in range(n):
            blk = -r[p, q] * (np.einsum("il,kj->ijkl", Z[q], Z[p])
                              + np.einsum("il,kj->ijkl", Z[p], Z[q]))
            if p == q:
                for s in range(d):
                    blk = blk + r[s, p] * (
                        np.einsum("il,kj->ijkl", Z[s], Z[p])
                        + np.einsum("kj,il->ijkl", Z[s], Z[p]))
            gzz[p * dd:(p + 1) * dd, q * dd:(q + 1) * dd] = blk.reshape(dd, dd)
    out["gamma_ZZ"] = gzz
    lz = np.zeros(n * dd, dtype=complex)
    for p in range(n):
        acc = np.zeros((d, d), dtype=complex)
        for q in range(d):
            acc += 2.0 * r[p, q] * (Z[q] - Z[p])
        lz[p * dd:(p + 1) * dd] = acc.ravel()
    out["L_Z"] = lz
    out["gamma_Zlam"] = np.zeros((n * dd, d))
    return out


def diagonal_point_forms(x):
    """Couplings that are only stated at the diagonal point m = diag(x)
    (V = U = W = Id): the V system and the U-V, U-W, V-N cross tables."""
    x = np.asarray(x, dtype=float)
    d = x.size
    X = x ** 2
    dd = d * d
    r = _r_matrix(x)
    psum = x[:, None] + x[None, :]
    diffX = X[:, None] - X[None, :]
    np.fill_diagonal(diffX, 1.0)

    out = {}
    guv = np.zeros((d, d, d, d), dtype=complex)
    gvv = np.zeros((d, d, d, d), dtype=complex)
    gvvbar = np.zeros((d, d, d, d), dtype=complex)
    guw = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            c = 1.0 / psum[i, j] ** 2
            gvv[i, j, j, i] = -4.0 * c
            gvvbar[i, j, i, j] = 4.0 * c
            if i != j:
                guv[i, j, j, i] = 2.0 * c
                guw[i, j, j, i] = -4.0 * x[i] * x[j] / diffX[i, j] ** 2
    out["gamma_UV"] = guv.reshape(dd, dd)
    out["gamma_VV"] = gvv.reshape(dd, dd)
    out["gamma_VVbar"] = gvvbar.reshape(dd, dd)
    out["gamma_UW"] = guw.reshape(dd, dd)

    gvn = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            gvn[i, j, j, i] = 2.0 * (x[i] - x[j]) / psum[i, j] ** 2
    out["gamma_VN"] = gvn.reshape(dd, dd)
    out["L_V"] = np.diag(-4.0 * np.sum(1.0 / psum ** 2, axis=1)
                         ).ravel().astype(complex)

    # identity-point values of the general U tables, used as transport seeds
    guu = np.zeros((d, d, d, d), dtype=complex)
    guubar = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            guu[i, j, j, i] = -r[i, j]
            guubar[i, j, i, j] = r[i, j]
    out["gamma_UU"] = guu.reshape(dd, dd)
    out["gamma_UUbar"] = guubar.reshape(dd, dd)
    out["L_U"] = np.diag(-r.sum(axis=1)).ravel().astype(complex)

    gnn = np.zeros((d, d, d, d), dtype=complex)
    coef = 2.0 * (X[:, None] + X[None, :]) / psum ** 2
    for i in range(d):
        for j in range(d):
            gnn[i, j, j, i] = coef[i, j]
    out["gamma_NN"] = gnn.reshape(dd, dd)
    out["L_N"] = np.diag(4.0 * np.sum(x[None, :] / psum ** 2, axis=1)
                         ).ravel().astype(complex)
    return out


def _transport(table, B1, C1, B2, C2):
    """Sandwich transport of an entry table: quantities F = B F0 C obey
    Gamma(F_ij, F'_kl) = sum B1_ip C1_qj B2_kr C2_sl Gamma(F0_pq, F0'_rs)."""
    d = B1.shape[0]
    T = np.asarray(table).reshape(d, d, d, d)
    out = np.einsum("ip,qj,kr,sl,pqrs->ijkl", B1, C1, B2, C2, T)
    return out.reshape(d * d, d * d)


def invariance_transport(base, V, U):
    """Transport identity-point tables to the frame (V, U).

    base is a dict from diagonal_point_forms.  N transports as U . U*,
    the eigenvector unitary by left multiplication with U, and V as
    (V U) . U*; conjugated slots use the conjugated factors.
    """
    V = np.asarray(V, dtype=complex)
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    Ust = U.conj().T
    VU = V @ U
    eye = np.eye(d, dtype=complex)

    out = {}
    out["gamma_NN"] = _transport(base["gamma_NN"], U, Ust, U, Ust)
    out["L_N"] = (U @ base["L_N"].reshape(d, d) @ Ust).ravel()
    out["gamma_UU"] = _transport(base["gamma_UU"], U, eye, U, eye)
    out["gamma_UUbar"] = _transport(base["gamma_UUbar"], U, eye,
                                    U.conj(), eye)
    out["L_U"] = (U @ base["L_U"].reshape(d, d)).ravel()
    out["gamma_VV"] = _transport(base["gamma_VV"], VU, Ust, VU, Ust)
    out["gamma_VVbar"] = _transport(base["gamma_VVbar"], VU, Ust,
                                    VU.conj(), Ust.conj())
    out["L_V"] = (VU @ base["L_V"].reshape(d, d) @ Ust).ravel()
    return out


class DegenerateDirichletParams:
    """Model-I-shaped coefficients of the rank-one system (D, Z).

    The weights are A_pq = r_pq and the common exponent is a_i = 2 - d,
    which is non-positive for d > 1: the formal reversible density
    prod det(Z)^{a-1} is then non-integrable (the process lives on the
    rank-one boundary).  For d = 1 the exponent is 1 (Lebesgue).
    """

    def __init__(self, x):
        x = np.asarray(x, dtype=float)
        self.A = _r_matrix(x)
        self.a = np.full(x.size, 2.0 - x.size)
        self.n = x.size - 1
        self.integrable = x.size == 1


def degenerate_dirichlet_params(frame):
    return DegenerateDirichletParams(frame.lam)


def scalar_projection_v(frame):
    """The top-left entries v_k = Z^(k)_11, a point of the simplex."""
    return np.array([frame.Z[k][0, 0].real for k in range(frame.d - 1)])


def scalar_projection_params(frame):
    """Scalar simplex model matched by the v-coordinates.

    The complex rank-one system carries twice the real scalar co-metric,
    so the weights are 2 r_pq; the drift then corresponds to exponents
    a_i = 1 (Lebesgue reversible measure on the simplex).
    """
    r = _r_matrix(frame.lam)
    return ScalarModelParams(2.0 * r, np.ones(frame.d))


def sample_polar_frame(d, rng, gap_min=0.25, x_min=0.3, max_tries=200):
    """Ginibre matrix conditioned on well-separated, not-too-small
    spectral radii (finite differences of the frame amplify as inverse
    gaps).  Returns (m, frame)."""
    for _ in range(max_tries):
        m = (rng.standard_normal((d, d))
             + 1j * rng.standard_normal((d, d)))
        try:
            fr = PolarFrame(m, check=False)
        except Exception:
            continue
        if np.min(fr.lam) < x_min:
            continue
        if d > 1 and np.min(np.diff(fr.lam)) < gap_min:
            continue
        return m, fr
    raise RuntimeError("no valid frame in %d tries" % max_tries)
