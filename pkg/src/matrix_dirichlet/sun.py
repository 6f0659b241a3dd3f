"""Brownian motion on SU(N) and the block extraction onto the matrix simplex.

The group carries the bi-invariant Laplacian

    Delta = (1/4N) sum_{i<j} (V_R^2 + V_S^2 + (2/N) V_D^2)

whose fields act by right multiplication with the algebra elements

    E_R = E_ji - E_ij,  E_S = i(E_ij + E_ji),  E_D = i(E_ii - E_jj),

i.e. V_E(u) = u E and V_E^2(u) = u E^2.  Splitting the N columns into n+1
groups I_1..I_{n+1} and keeping the first d rows, W^(i) = u[:d, I_i] and
Z^(i) = W^(i) W^(i)* define a point of the matrix simplex; the image of the
group Laplacian (and of the weighted pair operators L^(pq)) under this
extraction is the model I diffusion with A_pq = 1/(2N) (resp. the given
weights) and a_i = d_i - d + 1.
"""

import numpy as np
from scipy.linalg import expm

from .calculus import DiffusionModel, ProjectionMap, check_identity
from .errors import OffGroupError
from .linalg import haar_unitary
from .matrix_simplex import (
    MatrixSimplexPoint, Model1Params, drift_model1, gamma_model1,
    simplex_layout)
from .realify import CplxLayout


class SUNState:
    def __init__(self, u, check=True):
        self.u = np.asarray(u, dtype=complex)
        self.N = self.u.shape[0]
        if check:
            err = np.max(np.abs(self.u @ self.u.conj().T - np.eye(self.N)))
            if err > 1e-10:
                raise OffGroupError("|uu* - Id| = %.3e" % err)
            if abs(np.linalg.det(self.u) - 1.0) > 1e-8:
                raise OffGroupError("det(u) != 1")


class Partition:
    """Column groups I_1..I_{n+1} (sizes d_i) and the number of kept rows d."""

    def __init__(self, d, sizes):
        self.d = int(d)
        self.sizes = [int(s) for s in sizes]
        if any(s < 1 for s in self.sizes) or self.d < 1:
            raise ValueError("all group sizes and d must be >= 1")
        self.N = sum(self.sizes)
        if self.d > self.N:
            raise ValueError("d cannot exceed N")
        self.sets = []
        start = 0
        for s in self.sizes:
            self.sets.append(list(range(start, start + s)))
            start += s
        self.n = len(self.sizes) - 1
        # column membership: group index of each column
        self.group_of = np.empty(self.N, dtype=int)
        for g, cols in enumerate(self.sets):
            for c in cols:
                self.group_of[c] = g


def sun_layout(N):
    return CplxLayout(N * N, shape=(N, N))


def group_distance(u):
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


def sun_ambient(N, group_tol=1e-3):
    """Closed-form co-metric and drift of group Brownian motion.

        Gamma(u_ij, u_kl)      = -(1/2N) u_il u_kj + (1/2N^2) u_ij u_kl
        Gamma(u_ij, conj u_kl) =  (1/2N) delta_ik delta_jl
                                  - (1/2N^2) u_ij conj(u_kl)
        L(u_ij)                = -((N^2-1)/2N^2) u_ij

    over the realified entries.  Points farther than group_tol from the
    group raise OffGroupError (the tolerance leaves room for the finite
    difference stencils of the pushforward engine).
    """
    layout = sun_layout(N)
    c1 = 1.0 / (2.0 * N)
    c2 = 1.0 / (2.0 * N * N)

    def gamma(x):
        u = layout.from_real(x)
        if group_distance(u) > group_tol:
            raise OffGroupError("point is not on the group")
        Gzz = (-c1 * np.einsum("il,kj->ijkl", u, u)
               + c2 * np.einsum("ij,kl->ijkl", u, u)).reshape(N * N, N * N)
        Gzw = (c1 * np.eye(N * N, dtype=complex)
               - c2 * np.outer(u.ravel(), u.conj().ravel()))
        return layout.gamma_to_real(layout.assemble_entry_gamma(Gzz, Gzw))

    def drift(x):
        u = layout.from_real(x)
        if group_distance(u) > group_tol:
            raise OffGroupError("point is not on the group")
        Lz = -((N * N - 1.0) / (2.0 * N * N)) * u.ravel()
        return layout.drift_to_real(layout.assemble_entry_drift(Lz))

    return DiffusionModel(layout.real_dim, gamma, drift,
                          domain_test=lambda x: group_distance(
                              layout.from_real(x)) < 1e-2,
                          name="sun-brownian")


# -- algebra elements and exact field actions ---------------------------------

def algebra_element(kind, i, j, N):
    E = np.zeros((N, N), dtype=complex)
    if kind == "R":
        E[j, i] = 1.0
        E[i, j] = -1.0
    elif kind == "S":
        E[i, j] = 1.0j
        E[j, i] = 1.0j
    elif kind == "D":
        E[i, i] = 1.0j
        E[j, j] = -1.0j
    else:
        raise ValueError("kind must be R, S or D")
    return E


def casimir_field_list(N):
    """(kind, i, j, weight) for Delta = (1/4N) sum (V_R^2+V_S^2+(2/N)V_D^2)."""
    out = []
    wRS = 1.0 / (4.0 * N)
    wD = 1.0 / (2.0 * N * N)
    for i in range(N):
        for j in range(i + 1, N):
            out.append(("R", i, j, wRS))
            out.append(("S", i, j, wRS))
            out.append(("D", i, j, wD))
    return out


def lpq_field_list(partition, A):
    """Fields of (1/2) sum_{p<q} A_pq L^(pq) over column-group pairs."""
    A = np.asarray(A, dtype=float)
    N = partition.N
    out = []
    m = len(partition.sizes)
    for p in range(m):
        for q in range(p + 1, m):
            if A[p, q] == 0.0:
                continue
            wRS = 0.5 * A[p, q]
            wD = A[p, q] / N
            for i in partition.sets[p]:
                for j in partition.sets[q]:
                    out.append(("R", i, j, wRS))
                    out.append(("S", i, j, wRS))
                    out.append(("D", i, j, wD))
    return out


def casimir_fields_apply(N, coords, u, fields=None):
    """Exact first and second actions of the group fields.

    coords = "entries": returns [(kind, i, j, w, Vu, V2u)] with Vu = uE and
    V2u = uE^2 (N x N arrays).  coords = a Partition: the actions on the
    extracted blocks instead, as stacks of shape (n+1, d, d) computed through
    the commutators u[E, M_p]u* and u[E, [E, M_p]]u*.
    """
    u = np.asarray(u, dtype=complex)
    if fields is None:
        fields = casimir_field_list(N)
    out = []
    if coords == "entries":
        for (kind, i, j, w) in fields:
            E = algebra_element(kind, i, j, N)
            out.append((kind, i, j, w, u @ E, u @ E @ E))
        return out
    partition = coords
    d = partition.d
    masks = []
    for cols in partition.sets:
        M = np.zeros((N, N))
        M[cols, cols] = 1.0
        masks.append(M)
    for (kind, i, j, w) in fields:
        E = algebra_element(kind, i, j, N)
        firsts = np.empty((len(masks), d, d), dtype=complex)
        seconds = np.empty((len(masks), d, d), dtype=complex)
        for p, M in enumerate(masks):
            C1 = E @ M - M @ E
            C2 = E @ C1 - C1 @ E
            firsts[p] = (u @ C1 @ u.conj().T)[:d, :d]
            seconds[p] = (u @ C2 @ u.conj().T)[:d, :d]
        out.append((kind, i, j, w, firsts, seconds))
    return out


def lemma_first_action(kind, i, j, partition, u):
    """Closed-form first actions on all blocks, shape (n+1, d, d).

    V_R_ij Z^(p)_ab = (1_{i in I_p} - 1_{j in I_p})
                      (u_aj conj(u_bi) + u_ai conj(u_bj))
    V_S_ij Z^(p)_ab = i (1_{j in I_p} - 1_{i in I_p})
                      (u_ai conj(u_bj) - u_aj conj(u_bi))
    V_D_ij Z^(p)_ab = 0
    """
    d = partition.d
    m = len(partition.sizes)
    out = np.zeros((m, d, d), dtype=complex)
    if kind == "D":
        return out
    ui = u[:d, i]
    uj = u[:d, j]
    if kind == "R":
        base = np.outer(uj, ui.conj()) + np.outer(ui, uj.conj())
    else:
        base = 1.0j * (np.outer(ui, uj.conj()) - np.outer(uj, ui.conj()))
    sgn = 1.0 if kind == "R" else -1.0
    gi, gj = partition.group_of[i], partition.group_of[j]
    out[gi] += sgn * base
    out[gj] -= sgn * base
    return out


def lemma_second_action(kind, i, j, partition, u):
    """Closed-form second actions on all blocks, shape (n+1, d, d).

    V_R^2 and V_S^2 both act as (1_{i in I_p} - 1_{j in I_p}) *
    2 (u_.j conj(u_.j) - u_.i conj(u_.i)); V_D^2 acts as zero.
    """
    d = partition.d
    m = len(partition.sizes)
    out = np.zeros((m, d, d), dtype=complex)
    if kind == "D":
        return out
    ui = u[:d, i]
    uj = u[:d, j]
    base = 2.0 * (np.outer(uj, uj.conj()) - np.outer(ui, ui.conj()))
    gi, gj = partition.group_of[i], partition.group_of[j]
    out[gi] += base
    out[gj] -= base
    return out


def extract_Z(state, partition):
    u = state.u if isinstance(state, SUNState) else np.asarray(state)
    d = partition.d
    Zs = []
    for cols in partition.sets[:-1]:
        W = u[:d, cols]
        Z = W @ W.conj().T
        Zs.append(0.5 * (Z + Z.conj().T))
    return MatrixSimplexPoint(Zs, check=False)


def extract_Z_all(u, partition):
    """All n+1 blocks by direct multiplication (for cross-checks)."""
    d = partition.d
    out = []
    for cols in partition.sets:
        W = u[:d, cols]
        out.append(W @ W.conj().T)
    return out


def extraction_map(partition):
    """Realified u-entries -> realified free Z blocks."""
    N = partition.N
    ulay = sun_layout(N)
    zlay = simplex_layout(partition.n, partition.d)

    def F(x):
        u = ulay.from_real(x)
        return zlay.to_real(extract_Z(u, partition).Z)

    return ProjectionMap(ulay.real_dim, zlay.real_dim, F, name="block-extract")


# -- image operators from exact field arithmetic ------------------------------

def fields_image_entries(u, partition, fields):
    """Entry-space Gamma table and drift of the free blocks under the
    weighted sum of squared fields, computed exactly from uE arithmetic."""
    n, d = partition.n, partition.d
    dd = d * d
    actions = casimir_fields_apply(partition.N, partition, u, fields=fields)
    T = np.zeros((n * dd, n * dd), dtype=complex)
    L = np.zeros(n * dd, dtype=complex)
    for (_, _, _, w, firsts, seconds) in actions:
        v = firsts[:n].reshape(n * dd)
        T += w * np.outer(v, v)
        L += w * seconds[:n].reshape(n * dd)
    return T, L


def lpq_weighted_model(N, partition, A):
    """DiffusionModel of (1/2) sum_{p<q} A_pq L^(pq) on the realified group
    entries; its image under extraction is model I with the given weights and
    a_i = d_i - d + 1."""
    A = np.asarray(A, dtype=float)
    if not np.allclose(A, A.T) or np.any(A < 0):
        raise ValueError("weights must be symmetric non-negative")
    fields = lpq_field_list(partition, A)
    layout = sun_layout(N)
    Esq = np.zeros((N, N), dtype=complex)
    for (kind, i, j, w) in fields:
        E = algebra_element(kind, i, j, N)
        Esq += w * (E @ E)

    def gamma(x):
        u = layout.from_real(x)
        m = N * N
        Gzz = np.zeros((m, m), dtype=complex)
        Gzw = np.zeros((m, m), dtype=complex)
        for (kind, i, j, w) in fields:
            v = (u @ algebra_element(kind, i, j, N)).ravel()
            Gzz += w * np.outer(v, v)
            Gzw += w * np.outer(v, v.conj())
        return layout.gamma_to_real(layout.assemble_entry_gamma(Gzz, Gzw))

    def drift(x):
        u = layout.from_real(x)
        return layout.drift_to_real(
            layout.assemble_entry_drift((u @ Esq).ravel()))

    return DiffusionModel(layout.real_dim, gamma, drift,
                          domain_test=lambda x: group_distance(
                              layout.from_real(x)) < 1e-2,
                          name="lpq-weighted")


def image_params(partition, A=None):
    """Model I parameters of the extracted image: given weights (or the group
    Laplacian's 1/(2N)) and a_i = d_i - d + 1."""
    m = len(partition.sizes)
    if A is None:
        A = np.full((m, m), 1.0 / (2.0 * partition.N))
        np.fill_diagonal(A, 0.0)
    a = np.asarray(partition.sizes, dtype=float) - partition.d + 1.0
    if np.any(a <= 0):
        raise ValueError("extraction needs d_i >= d for every group")
    return Model1Params(np.asarray(A, dtype=float), a)


def verify_casimir_image(N, partition, rng, n_samples=50,
                         tol_g=1e-6, tol_l=1e-4):
    """Pushforward of the group Laplacian through extraction vs model I."""
    ambient = sun_ambient(N)
    F = extraction_map(partition)
    params = image_params(partition)
    ulay = sun_layout(N)

    def closed_gamma(x):
        return gamma_model1(params, extract_Z(ulay.from_real(x), partition))

    def closed_drift(x):
        return drift_model1(params, extract_Z(ulay.from_real(x), partition))

    def sampler():
        return ulay.to_real(haar_unitary(N, rng, special=True))

    return check_identity(ambient, F, closed_gamma, closed_drift, sampler,
                          n_samples=n_samples, tol_g=tol_g, tol_l=tol_l,
                          name="sun-extraction")


# -- simulation ---------------------------------------------------------------

def sun_brownian_step(state, dt, rng):
    """One exact-group Euler step u' = u exp(sqrt(dt) xi).

    xi is Gaussian in the traceless skew-Hermitian algebra with per-pair
    standard deviations 1/sqrt(2N) on the R and S directions and 1/N on the
    D direction, which reproduces the one-step entry covariance 2 Gamma dt
    of the group Laplacian (no-1/2 generator convention).
    """
    u = state.u if isinstance(state, SUNState) else np.asarray(state)
    N = u.shape[0]
    if dt == 0.0:
        return SUNState(u, check=False)
    sRS = 1.0 / np.sqrt(2.0 * N)
    sD = 1.0 / N
    xi = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(i + 1, N):
            g1, g2, g3 = rng.standard_normal(3)
            xi += sRS * g1 * algebra_element("R", i, j, N)
            xi += sRS * g2 * algebra_element("S", i, j, N)
            xi += sD * g3 * algebra_element("D", i, j, N)
    return SUNState(u @ expm(np.sqrt(dt) * xi), check=False)


def sample_haar_extracted(N, partition, rng):
    return extract_Z(haar_unitary(N, rng, special=True), partition)
