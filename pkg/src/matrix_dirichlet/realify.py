"""Conversion between complex matrix coordinates and real coordinate vectors.

Closed-form co-metric and drift tables are naturally written in terms of
complex entries z and their conjugates, while all differentiation and
simulation happens over real coordinates.  A layout holds two constant
coefficient matrices

    entries = E @ x_real          (each complex entry as a linear form)
    x_real  = Re(D @ entries)     (each real coordinate as a linear form)

and every conversion (co-metric, drift, gradient) is a matrix sandwich with
E or D.  Since Gamma is bilinear over first-order forms,

    Gamma(x_a, x_b) = (D T D^T)_ab   with  T_ef = Gamma(entry_e, entry_f),

and conversely T = E G E^T for a real co-metric G.  Drifts convert by
linearity: L(x_a) = Re(D @ L(entries)), L(entry_e) = (E @ L(x))_e.  For a
scalar function f(x) = F(entries), grad_x f = Re(E^T @ dF/dentries).
"""

import numpy as np


class Realifier:
    """Base class: any linear complex-entries <-> real-coordinates layout."""

    # subclasses set these
    real_dim = 0
    n_entries = 0
    E = None
    D = None

    def gamma_to_real(self, T, other=None):
        """Real co-metric block from an entry-space Gamma table.

        With ``other`` given, converts a cross block Gamma(entries_self,
        entries_other) into Gamma(x_self, x_other).
        """
        other = self if other is None else other
        return (self.D @ np.asarray(T) @ other.D.T).real

    def gamma_to_entries(self, G, other=None):
        """Entry-space Gamma table from a real co-metric block."""
        other = self if other is None else other
        return self.E @ np.asarray(G) @ other.E.T

    def drift_to_real(self, l_entries):
        return (self.D @ np.asarray(l_entries)).real

    def drift_to_entries(self, l_real):
        return self.E @ np.asarray(l_real)

    def grad_to_real(self, g_entries):
        """Real gradient of f(x) = F(entries) from entry-wise derivatives."""
        return (self.E.T @ np.asarray(g_entries)).real


class HermLayout(Realifier):
    """n Hermitian d x d matrices.

    Real coordinates per block: the d diagonal entries first, then (Re, Im)
    pairs for i < j in lexicographic order.  The entry list is the full set
    of n*d^2 complex entries (k, i, j), so conjugate entries appear
    explicitly and closed-form tables can be indexed without case splits.
    """

    def __init__(self, n, d):
        self.n = n
        self.d = d
        self.block = d * d
        self.real_dim = n * d * d
        self.n_entries = n * d * d

        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        self._pair_pos = {p: k for k, p in enumerate(pairs)}
        self.pairs = pairs

        E = np.zeros((self.n_entries, self.real_dim), dtype=complex)
        D = np.zeros((self.real_dim, self.n_entries), dtype=complex)
        for k in range(n):
            for i in range(d):
                e = self.entry_index(k, i, i)
                c = self.diag_index(k, i)
                E[e, c] = 1.0
                D[c, e] = 1.0
            for (i, j) in pairs:
                re = self.re_index(k, i, j)
                im = self.im_index(k, i, j)
                e_ij = self.entry_index(k, i, j)
                e_ji = self.entry_index(k, j, i)
                E[e_ij, re] = 1.0
                E[e_ij, im] = 1.0j
                E[e_ji, re] = 1.0
                E[e_ji, im] = -1.0j
                D[re, e_ij] = 0.5
                D[re, e_ji] = 0.5
                D[im, e_ij] = -0.5j
                D[im, e_ji] = 0.5j
        self.E = E
        self.D = D

    def entry_index(self, k, i, j):
        return k * self.block + i * self.d + j

    def diag_index(self, k, i):
        return k * self.block + i

    def re_index(self, k, i, j):
        return k * self.block + self.d + 2 * self._pair_pos[(i, j)]

    def im_index(self, k, i, j):
        return k * self.block + self.d + 2 * self._pair_pos[(i, j)] + 1

    def to_real(self, Z_list):
        Z_list = [np.asarray(Z) for Z in Z_list]
        x = np.empty(self.real_dim)
        for k, Z in enumerate(Z_list):
            for i in range(self.d):
                x[self.diag_index(k, i)] = Z[i, i].real
            for (i, j) in self.pairs:
                x[self.re_index(k, i, j)] = Z[i, j].real
                x[self.im_index(k, i, j)] = Z[i, j].imag
        return x

    def from_real(self, x):
        out = []
        for k in range(self.n):
            Z = np.zeros((self.d, self.d), dtype=complex)
            for i in range(self.d):
                Z[i, i] = x[self.diag_index(k, i)]
            for (i, j) in self.pairs:
                z = x[self.re_index(k, i, j)] + 1j * x[self.im_index(k, i, j)]
                Z[i, j] = z
                Z[j, i] = np.conj(z)
            out.append(Z)
        return out


class CplxLayout(Realifier):
    """m unconstrained complex coordinates (e.g. a flattened matrix).

    Real coordinates interleave as (Re z_0, Im z_0, Re z_1, Im z_1, ...);
    the entry list is (z_0..z_{m-1}, conj z_0..conj z_{m-1}).
    """

    def __init__(self, m, shape=None):
        self.m = m
        self.shape = shape
        self.real_dim = 2 * m
        self.n_entries = 2 * m

        E = np.zeros((2 * m, 2 * m), dtype=complex)
        D = np.zeros((2 * m, 2 * m), dtype=complex)
        for a in range(m):
            E[a, 2 * a] = 1.0
            E[a, 2 * a + 1] = 1.0j
            E[m + a, 2 * a] = 1.0
            E[m + a, 2 * a + 1] = -1.0j
            D[2 * a, a] = 0.5
            D[2 * a, m + a] = 0.5
            D[2 * a + 1, a] = -0.5j
            D[2 * a + 1, m + a] = 0.5j
        self.E = E
        self.D = D

    def to_real(self, z):
        z = np.asarray(z, dtype=complex).ravel()
        x = np.empty(2 * self.m)
        x[0::2] = z.real
        x[1::2] = z.imag
        return x

    def from_real(self, x):
        z = np.asarray(x[0::2]) + 1j * np.asarray(x[1::2])
        if self.shape is not None:
            z = z.reshape(self.shape)
        return z

    def assemble_entry_gamma(self, Gzz, Gzw):
        """Full 2m x 2m entry table from Gamma(z,z) and Gamma(z, conj z)."""
        Gzz = np.asarray(Gzz)
        Gzw = np.asarray(Gzw)
        top = np.hstack([Gzz, Gzw])
        bot = np.hstack([Gzw.conj(), Gzz.conj()])
        return np.vstack([top, bot])

    def split_entry_gamma(self, T):
        """Inverse of assemble_entry_gamma: returns (Gzz, Gzw)."""
        m = self.m
        return np.asarray(T)[:m, :m], np.asarray(T)[:m, m:]

    def assemble_entry_drift(self, Lz):
        Lz = np.asarray(Lz, dtype=complex).ravel()
        return np.concatenate([Lz, Lz.conj()])


class RealLayout(Realifier):
    """Plain real coordinates (identity layout), for mixed coordinate stacks."""

    def __init__(self, m):
        self.m = m
        self.real_dim = m
        self.n_entries = m
        self.E = np.eye(m, dtype=complex)
        self.D = np.eye(m, dtype=complex)

    def to_real(self, v):
        return np.asarray(v, dtype=float).ravel()

    def from_real(self, x):
        return np.asarray(x)


class CoordStack:
    """Named concatenation of layouts, with block slicing helpers."""

    def __init__(self, segments):
        # segments: list of (name, layout)
        self.segments = list(segments)
        self.layouts = {}
        self.slices = {}
        off = 0
        for name, layout in self.segments:
            self.layouts[name] = layout
            self.slices[name] = slice(off, off + layout.real_dim)
            off += layout.real_dim
        self.real_dim = off

    def pack(self, parts):
        """parts: dict name -> native value for that layout."""
        x = np.empty(self.real_dim)
        for name, layout in self.segments:
            x[self.slices[name]] = layout.to_real(parts[name])
        return x

    def unpack(self, x, name):
        return self.layouts[name].from_real(x[self.slices[name]])

    def block(self, M, a, b):
        """Extract the (a, b) block of a stacked real matrix."""
        return np.asarray(M)[self.slices[a], self.slices[b]]

    def entries_block(self, G, a, b):
        """Entry-space Gamma table for segments a, b of a real co-metric."""
        la, lb = self.layouts[a], self.layouts[b]
        return la.gamma_to_entries(self.block(G, a, b), lb)

    def drift_entries(self, l_real, a):
        return self.layouts[a].drift_to_entries(np.asarray(l_real)[self.slices[a]])
