"""The complex matrix simplex and its two polynomial diffusion families.

Points are n-tuples of Hermitian non-negative d x d matrices Z^(1)..Z^(n)
with Z^(n+1) = Id - sum Z^(k) also non-negative.  Two co-metric families are
implemented over the realified entry coordinates:

* model I, parametrized by a symmetric (n+1) x (n+1) real weight matrix A
  and exponents a:

      Gamma(Z^(p)_ij, Z^(q)_kl) = delta_pq sum_s A_sp (Z^(s)_il Z^(p)_kj
                                   + Z^(s)_kj Z^(p)_il)
                                  - A_pq (Z^(q)_il Z^(p)_kj + Z^(p)_il Z^(q)_kj)

* model II, parametrized by a Hermitian positive-definite d x d matrix A, a
  Hermitian positive semi-definite d^2 x d^2 tensor B (indexed by entry
  pairs) and exponents a.

Both admit the matrix Dirichlet measure with parameter a as reversible law.
"""

import json

import numpy as np
from scipy.special import gammaln

from .calculus import DiffusionModel
from .errors import DomainError
from .linalg import sqrtm_psd
from .realify import HermLayout


class MatrixSimplexPoint:
    """n Hermitian psd matrices with Id - sum also psd."""

    def __init__(self, Z_list, check=True, tol=1e-12):
        self.Z = [np.asarray(Z, dtype=complex) for Z in Z_list]
        self.n = len(self.Z)
        self.d = self.Z[0].shape[0]
        if check:
            for Z in self.Z:
                if Z.shape != (self.d, self.d):
                    raise DomainError("inconsistent matrix dimensions")
                if np.max(np.abs(Z - Z.conj().T)) > 1e-10:
                    raise DomainError("matrix is not Hermitian")
                if np.min(np.linalg.eigvalsh(0.5 * (Z + Z.conj().T))) < -tol:
                    raise DomainError("matrix is not psd")
            if np.min(np.linalg.eigvalsh(self.last())) < -tol:
                raise DomainError("Id - sum Z is not psd")

    def last(self):
        acc = np.eye(self.d, dtype=complex)
        for Z in self.Z:
            acc = acc - Z
        return 0.5 * (acc + acc.conj().T)

    def all_blocks(self):
        return self.Z + [self.last()]


def simplex_layout(n, d):
    return HermLayout(n, d)


def point_to_real(point):
    return simplex_layout(point.n, point.d).to_real(point.Z)


def real_to_point(x, n, d, check=False):
    return MatrixSimplexPoint(simplex_layout(n, d).from_real(x), check=check)


def in_matrix_simplex(x, n, d, margin=1e-12):
    Zs = simplex_layout(n, d).from_real(x)
    for Z in Zs:
        if np.min(np.linalg.eigvalsh(Z)) < margin:
            return False
    last = np.eye(d, dtype=complex) - sum(Zs)
    return bool(np.min(np.linalg.eigvalsh(last)) >= margin)


def sample_interior(n, d, rng, dof=None, margin=1e-6):
    """Random strictly interior point via normalized sums of Ginibre squares."""
    dof = dof if dof is not None else d + 1
    while True:
        R = []
        for _ in range(n + 1):
            G = (rng.standard_normal((d, dof))
                 + 1j * rng.standard_normal((d, dof)))
            R.append(G @ G.conj().T)
        T = sum(R)
        Tis = np.linalg.inv(sqrtm_psd(T))
        Zs = [Tis @ Rp @ Tis for Rp in R[:n]]
        Zs = [0.5 * (Z + Z.conj().T) for Z in Zs]
        x = simplex_layout(n, d).to_real(Zs)
        if in_matrix_simplex(x, n, d, margin=margin):
            return MatrixSimplexPoint(Zs, check=False)


# -- matrix Dirichlet measure -------------------------------------------------

def log_gamma_d(a, d):
    """log of the complex multivariate gamma function."""
    return (0.5 * d * (d - 1) * np.log(np.pi)
            + float(np.sum(gammaln(a + d - np.arange(1, d + 1)))))


def matrix_dirichlet_log_density(a, point):
    a = np.asarray(a, dtype=float)
    blocks = point.all_blocks()
    d = point.d
    # normalizer: the density integrates prod det^(a_k - 1), whose total mass
    # is prod Gamma_d(a_k) / Gamma_d(sum a), so the log-normalizer is the
    # reciprocal of that product
    log_norm = log_gamma_d(np.sum(a), d) - sum(log_gamma_d(ak, d) for ak in a)
    total = log_norm
    for ak, Z in zip(a, blocks):
        sign, logdet = np.linalg.slogdet(Z)
        if sign <= 0 or logdet < -690.0:
            raise DomainError("determinant vanishes at this point")
        total += (ak - 1.0) * logdet
    return float(total)


def matrix_dirichlet_grad_log(a, point):
    """Gradient of the log density over the realified coordinates."""
    a = np.asarray(a, dtype=float)
    n, d = point.n, point.d
    layout = simplex_layout(n, d)
    blocks = point.all_blocks()
    invs = []
    for Z in blocks:
        if np.min(np.linalg.eigvalsh(Z)) <= 0:
            raise DomainError("gradient needs a strictly interior point")
        invs.append(np.linalg.inv(Z))
    g = np.zeros(layout.n_entries, dtype=complex)
    for p in range(n):
        for i in range(d):
            for j in range(d):
                # d/dZ^(p)_ij of log det Z^(p) is (Z^(p)^-1)_ji, and the
                # last block depends on Z^(p) with a minus sign
                g[layout.entry_index(p, i, j)] = (
                    (a[p] - 1.0) * invs[p][j, i]
                    - (a[n] - 1.0) * invs[n][j, i])
    return layout.grad_to_real(g)


# -- model I ------------------------------------------------------------------

class Model1Params:
    def __init__(self, A, a):
        A = np.asarray(A, dtype=float)
        a = np.asarray(a, dtype=float)
        if A.shape != (a.size, a.size) or not np.allclose(A, A.T):
            raise ValueError("A must be symmetric (n+1)x(n+1) matching a")
        if np.any(a <= 0):
            raise ValueError("a must be positive")
        self.A = A
        self.a = a
        self.n = a.size - 1


def gamma_model1_entries(params, point):
    """Entry-space Gamma table of model I (free blocks only)."""
    n, d = point.n, point.d
    A = params.A
    blocks = point.all_blocks()
    dd = d * d
    T = np.zeros((n * dd, n * dd), dtype=complex)
    for p in range(n):
        Zp = blocks[p]
        for q in range(n):
            Zq = blocks[q]
            blk = -(A[p, q]
                    * (np.einsum("il,kj->ijkl", Zq, Zp)
                       + np.einsum("il,kj->ijkl", Zp, Zq)))
            if p == q:
                for s in range(n + 1):
                    Zs = blocks[s]
                    blk = blk + A[s, p] * (
                        np.einsum("il,kj->ijkl", Zs, Zp)
                        + np.einsum("kj,il->ijkl", Zs, Zp))
            T[p * dd:(p + 1) * dd, q * dd:(q + 1) * dd] = blk.reshape(dd, dd)
    return T


def gamma_model1(params, point):
    layout = simplex_layout(point.n, point.d)
    return layout.gamma_to_real(gamma_model1_entries(params, point))


def drift_model1_entries(params, point):
    n, d = point.n, point.d
    A, a = params.A, params.a
    blocks = point.all_blocks()
    out = np.zeros(n * d * d, dtype=complex)
    for p in range(n):
        acc = np.zeros((d, d), dtype=complex)
        for q in range(n + 1):
            acc += 2.0 * (a[p] + d - 1.0) * A[p, q] * blocks[q]
            acc -= 2.0 * (a[q] + d - 1.0) * A[p, q] * blocks[p]
        out[p * d * d:(p + 1) * d * d] = acc.ravel()
    return out


def drift_model1(params, point):
    layout = simplex_layout(point.n, point.d)
    return layout.drift_to_real(drift_model1_entries(params, point))


def model1(params, d, margin=1e-12):
    n = params.n
    layout = simplex_layout(n, d)

    def gamma(x):
        return gamma_model1(params, real_to_point(x, n, d))

    def drift(x):
        return drift_model1(params, real_to_point(x, n, d))

    return DiffusionModel(layout.real_dim, gamma, drift,
                          domain_test=lambda x: in_matrix_simplex(
                              x, n, d, margin=margin),
                          name="matrix-dirichlet-I")


def _support_components(A):
    """Connected components of the off-diagonal support graph of A."""
    m = A.shape[0]
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        comp = []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(m):
                if w != v and not seen[w] and abs(A[v, w]) > 0:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def ellipticity_model1(params, d, sampler, n_samples=20):
    """Structural + numerical ellipticity check for model I.

    Returns (is_elliptic, witness): when the weight graph is disconnected the
    witness is a realified null direction of Gamma (supported away from the
    component of the last block); when some weight is negative the witness is
    None (structural failure only).
    """
    A = params.A
    n = params.n
    layout = simplex_layout(n, d)
    if np.any(A < 0):
        return False, None
    comps = _support_components(A)
    if len(comps) > 1:
        # null direction: test matrices Id on every component not containing
        # the last index, zero elsewhere
        last_comp = next(c for c in comps if n in c)
        g = np.zeros(layout.n_entries, dtype=complex)
        for p in range(n):
            if p in last_comp:
                continue
            for i in range(d):
                g[layout.entry_index(p, i, i)] = 1.0
        witness = layout.grad_to_real(g)
        return False, witness
    for _ in range(n_samples):
        point = sampler()
        w = np.linalg.eigvalsh(gamma_model1(params, point))
        if w.min() <= 1e-12:
            return False, None
    return True, None


# -- model II -----------------------------------------------------------------

class Model2Params:
    """Hermitian pd A (d x d), Hermitian psd B (d,d,d,d tensor), exponents a.

    B[i, a, l, b] is the coefficient coupling entry pair (i,a) with (l,b);
    Hermitian means B[i,a,l,b] = conj(B[l,b,i,a]).
    """

    def __init__(self, A, B, a):
        A = np.asarray(A, dtype=complex)
        B = np.asarray(B, dtype=complex)
        a = np.asarray(a, dtype=float)
        d = A.shape[0]
        if A.shape != (d, d) or np.max(np.abs(A - A.conj().T)) > 1e-12:
            raise ValueError("A must be Hermitian")
        if B.shape != (d, d, d, d):
            raise ValueError("B must be a (d,d,d,d) tensor")
        Bmat = B.reshape(d * d, d * d)
        if np.max(np.abs(Bmat - Bmat.conj().T)) > 1e-12:
            raise ValueError("B must be Hermitian as a d^2 x d^2 matrix")
        if np.any(a <= 0):
            raise ValueError("a must be positive")
        self.A = A
        self.B = B
        self.a = a
        self.d = d

    def n_from(self, point):
        return point.n


def gamma_model2_entries(params, point):
    n, d = point.n, point.d
    A = params.A
    B = params.B
    blocks = point.all_blocks()
    dd = d * d
    T = np.zeros((n * dd, n * dd), dtype=complex)
    for p in range(n):
        Zp = blocks[p]
        for q in range(n):
            Zq = blocks[q]
            ZpZq = Zp @ Zq
            ZqZp = Zq @ Zp
            blk = (-np.einsum("kj,il->ijkl", A, ZpZq)
                   - np.einsum("il,kj->ijkl", A, ZqZp))
            if p == q:
                blk = blk + (np.einsum("il,kj->ijkl", A, Zp)
                             + np.einsum("kj,il->ijkl", A, Zp))
            blk = blk + np.einsum("ialb,aj,kb->ijkl", B, Zp, Zq)
            blk = blk + np.einsum("ajbk,ia,bl->ijkl", B, Zp, Zq)
            blk = blk - np.einsum("ajlb,ia,kb->ijkl", B, Zp, Zq)
            blk = blk - np.einsum("iabk,aj,bl->ijkl", B, Zp, Zq)
            T[p * dd:(p + 1) * dd, q * dd:(q + 1) * dd] = blk.reshape(dd, dd)
    return T


def gamma_model2(params, point):
    layout = simplex_layout(point.n, point.d)
    return layout.gamma_to_real(gamma_model2_entries(params, point))


def drift_model2_entries(params, point):
    n, d = point.n, point.d
    A = params.A
    B = params.B
    a = params.a
    blocks = point.all_blocks()
    coeff = float(np.sum(a[:n] - 1.0 + d) + (a[n] - 1.0))
    out = np.zeros(n * d * d, dtype=complex)
    for p in range(n):
        Zp = blocks[p]
        acc = 2.0 * (a[p] - 1.0 + d) * A
        acc = acc - coeff * (A @ Zp + Zp @ A)
        acc = acc - 2.0 * A * np.trace(Zp)
        acc = acc + np.einsum("iajb,ab->ij", B, Zp)
        acc = acc + np.einsum("bjai,ab->ij", B, Zp)
        acc = acc - np.einsum("iaba,bj->ij", B, Zp)
        acc = acc - np.einsum("bjba,ia->ij", B, Zp)
        out[p * d * d:(p + 1) * d * d] = acc.ravel()
    return out


def drift_model2(params, point):
    layout = simplex_layout(point.n, point.d)
    return layout.drift_to_real(drift_model2_entries(params, point))


def model2(params, n, margin=1e-12):
    d = params.d
    layout = simplex_layout(n, d)

    def gamma(x):
        return gamma_model2(params, real_to_point(x, n, d))

    def drift(x):
        return drift_model2(params, real_to_point(x, n, d))

    return DiffusionModel(layout.real_dim, gamma, drift,
                          domain_test=lambda x: in_matrix_simplex(
                              x, n, d, margin=margin),
                          name="matrix-dirichlet-II")


# -- spectrum identity --------------------------------------------------------

def sylvester_spectrum(point):
    """Eigenvalues of Id_nd - (Z^-1/2 Y)(Z^-1/2 Y)*.

    Z is the block diagonal of Z^(1)..Z^(n) and Y their vertical stack; the
    spectrum is {1} with multiplicity (n-1)d together with the spectrum of
    Z^(n+1).  Returns the eigenvalues ascending.
    """
    n, d = point.n, point.d
    for Z in point.Z:
        if np.min(np.linalg.eigvalsh(Z)) <= 0:
            raise DomainError("blocks must be positive definite")
    big = np.zeros((n * d, n * d), dtype=complex)
    Y = np.zeros((n * d, d), dtype=complex)
    for p, Z in enumerate(point.Z):
        big[p * d:(p + 1) * d, p * d:(p + 1) * d] = Z
        Y[p * d:(p + 1) * d, :] = Z
    Zis = np.linalg.inv(sqrtm_psd(big))
    C = Zis @ Y
    M = np.eye(n * d) - C @ C.conj().T
    return np.linalg.eigvalsh(M)


# -- parameter files ----------------------------------------------------------

def _complex_to_json(z):
    return [float(np.real(z)), float(np.imag(z))]

def _json_to_complex(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def params_to_json(params, n=None, d=None):
    if isinstance(params, Model1Params):
        return {"schema": 1, "model": "I", "n": params.n,
                "d": int(d) if d is not None else None,
                "A": params.A.tolist(), "a": params.a.tolist()}
    d = params.d
    A = [[_complex_to_json(params.A[i, j]) for j in range(d)]
         for i in range(d)]
    Bmat = params.B.reshape(d * d, d * d)
    B = [[_complex_to_json(Bmat[i, j]) for j in range(d * d)]
         for i in range(d * d)]
    return {"schema": 1, "model": "II", "n": int(n), "d": d,
            "A": A, "B": B, "a": params.a.tolist()}


def params_from_json(obj):
    """Returns (params, n, d) from a parsed parameter dict."""
    if obj.get("schema") != 1:
        raise ValueError("unsupported schema")
    model = obj["model"]
    n = int(obj["n"])
    d = int(obj["d"])
    a = np.asarray(obj["a"], dtype=float)
    if model == "I":
        return Model1Params(np.asarray(obj["A"], dtype=float), a), n, d
    if model == "II":
        A = np.array([[_json_to_complex(v) for v in row]
                      for row in obj["A"]])
        Bmat = np.array([[_json_to_complex(v) for v in row]
                         for row in obj["B"]])
        B = Bmat.reshape(d, d, d, d)
        return Model2Params(A, B, a), n, d
    raise ValueError("unknown model %r" % (model,))


def load_params(path):
    with open(path) as fh:
        return params_from_json(json.load(fh))
