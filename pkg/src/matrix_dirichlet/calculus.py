"""Chain-rule pushforward engine and identity/boundary/reversibility checks.

The generator convention throughout is

    L(f) = sum_ij g^ij d2_ij f + sum_i b^i d_i f        (no 1/2 in front)

so for a smooth projection F the image operators are

    Gamma(F, F) = J G J^T
    L(F)        = J b + sum_ij G_ij d2_ij F

with J the Jacobian of F.  The Hessian contraction is evaluated through the
spectral directions of G (directional second differences with Richardson
extrapolation), which is algebraically identical to the full contraction but
needs O(dim) instead of O(dim^2) evaluations of F.
"""

import numpy as np

from .errors import DerivativeError, RankDeficientFit


class DiffusionModel:
    """A coordinate chart with co-metric and drift callables."""

    def __init__(self, dim, gamma, drift, domain_test=None, name=""):
        self.dim = dim
        self.gamma = gamma
        self.drift = drift
        self.domain_test = domain_test if domain_test is not None else (lambda x: True)
        self.name = name


class ProjectionMap:
    """A smooth map from ambient coordinates to derived coordinates."""

    def __init__(self, in_dim, out_dim, eval_fn, name=""):
        self.in_dim = in_dim
        self.out_dim = out_dim
        self._eval = eval_fn
        self.name = name

    def __call__(self, x):
        return np.asarray(self._eval(np.asarray(x, dtype=float)), dtype=float)


class VerificationReport:
    """Pass/fail record for one identity (or one suite thereof)."""

    def __init__(self, name, n_samples, max_abs_residual, tol,
                 max_rel_residual=None, worst_index=None, details=None):
        self.name = name
        self.n_samples = n_samples
        self.max_abs_residual = float(max_abs_residual)
        self.max_rel_residual = (None if max_rel_residual is None
                                 else float(max_rel_residual))
        self.tol = tol
        self.passed = bool(self.max_abs_residual <= tol)
        self.worst_index = worst_index
        self.details = details or {}

    def __repr__(self):
        status = "pass" if self.passed else "FAIL"
        return ("<%s %s: max residual %.3e (tol %.1e, %d samples)>"
                % (self.name, status, self.max_abs_residual, self.tol,
                   self.n_samples))


def _try_eval(F, x, domain_test):
    if domain_test is not None and not domain_test(x):
        return None
    return F(x)


def jacobian(F, x, h=1e-5, domain_test=None):
    """Central-difference Jacobian with per-coordinate scaled steps."""
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(F(x))
    J = np.empty((f0.size, x.size))
    for i in range(x.size):
        hi = h * (1.0 + abs(x[i]))
        for _ in range(4):
            xp = x.copy()
            xm = x.copy()
            xp[i] += hi
            xm[i] -= hi
            fp = _try_eval(F, xp, domain_test)
            fm = _try_eval(F, xm, domain_test)
            if fp is not None and fm is not None:
                J[:, i] = (np.asarray(fp) - np.asarray(fm)) / (2.0 * hi)
                break
            hi /= 4.0
        else:
            raise DerivativeError(
                "stencil for coordinate %d leaves the domain" % i)
    return J


def _directional_second(F, x, v, h, domain_test, f0):
    def d2(step):
        fp = _try_eval(F, x + step * v, domain_test)
        fm = _try_eval(F, x - step * v, domain_test)
        if fp is None or fm is None:
            raise DerivativeError("directional stencil leaves the domain")
        return (np.asarray(fp) - 2.0 * f0 + np.asarray(fm)) / (step * step)

    for _ in range(4):
        try:
            coarse = d2(h)
            fine = d2(0.5 * h)
            return (4.0 * fine - coarse) / 3.0
        except DerivativeError:
            h /= 4.0
    raise DerivativeError("directional stencil leaves the domain")


def pushforward_gamma(ambient, F, x, h=1e-5):
    """J Gamma J^T: the co-metric of the image coordinates at F(x)."""
    J = jacobian(F, x, h=h, domain_test=ambient.domain_test)
    return J @ ambient.gamma(x) @ J.T


def pushforward_generator(ambient, F, x, h=1e-5, h2=1e-3, return_jacobian=False):
    """J b + sum_ij G_ij d2_ij F: the drift of the image coordinates."""
    x = np.asarray(x, dtype=float)
    J = jacobian(F, x, h=h, domain_test=ambient.domain_test)
    out = J @ np.asarray(ambient.drift(x))
    G = np.asarray(ambient.gamma(x))
    w, V = np.linalg.eigh(0.5 * (G + G.T))
    cutoff = 1e-13 * max(np.max(np.abs(w)), 1.0)
    f0 = np.asarray(F(x))
    step = h2 * (1.0 + float(np.max(np.abs(x))))
    for m in range(w.size):
        if abs(w[m]) <= cutoff:
            continue
        d2 = _directional_second(F, x, V[:, m], step, ambient.domain_test, f0)
        out = out + w[m] * d2
    if return_jacobian:
        return out, J
    return out


def check_identity(ambient, F, closed_gamma, closed_drift, sampler,
                   n_samples=30, tol_g=1e-6, tol_l=1e-4, name="identity"):
    """Compare pushforward Gamma/L against closed forms at sampled points.

    closed_gamma/closed_drift are called with the ambient sample point and
    must return the expected out_dim x out_dim matrix / out_dim vector in the
    image coordinates (they may build whatever frame data they need from the
    point).  Either may be None to skip that half.
    """
    res_g = 0.0
    res_l = 0.0
    worst = None
    for s in range(n_samples):
        x = np.asarray(sampler(), dtype=float)
        if closed_gamma is not None:
            Gp = pushforward_gamma(ambient, F, x)
            r = float(np.max(np.abs(Gp - np.asarray(closed_gamma(x)))))
            if r > res_g:
                res_g, worst = r, s
        if closed_drift is not None:
            Lp = pushforward_generator(ambient, F, x)
            r = float(np.max(np.abs(Lp - np.asarray(closed_drift(x)))))
            if r > res_l:
                res_l, worst = r, s
    details = {}
    if closed_gamma is not None:
        details["gamma"] = {"residual": res_g, "tol": tol_g,
                            "pass": res_g <= tol_g}
    if closed_drift is not None:
        details["drift"] = {"residual": res_l, "tol": tol_l,
                            "pass": res_l <= tol_l}
    # normalize both halves to a single pass flag via their own tolerances
    scaled = max([d["residual"] / d["tol"] for d in details.values()] or [0.0])
    rep = VerificationReport(name, n_samples,
                             max(res_g, res_l),
                             tol=max(tol_g, tol_l),
                             worst_index=worst, details=details)
    rep.passed = scaled <= 1.0
    return rep


def reversibility_residual(model, grad_log_density, x, h=1e-5):
    """b - div(g) - g grad(log rho); zero iff rho is reversible for L."""
    x = np.asarray(x, dtype=float)
    G = np.asarray(model.gamma(x))
    b = np.asarray(model.drift(x))
    div = np.zeros(model.dim)
    for j in range(model.dim):
        hj = h * (1.0 + abs(x[j]))
        for _ in range(4):
            xp = x.copy()
            xm = x.copy()
            xp[j] += hj
            xm[j] -= hj
            if model.domain_test(xp) and model.domain_test(xm):
                div += (np.asarray(model.gamma(xp))[:, j]
                        - np.asarray(model.gamma(xm))[:, j]) / (2.0 * hj)
                break
            hj /= 4.0
        else:
            raise DerivativeError("divergence stencil leaves the domain")
    return b - div - G @ np.asarray(grad_log_density(x))


def grad_log_numeric(log_f, x, h=1e-6, domain_test=None):
    """Central-difference gradient of a scalar log-function."""
    x = np.asarray(x, dtype=float)
    g = np.empty(x.size)
    for i in range(x.size):
        hi = h * (1.0 + abs(x[i]))
        for _ in range(4):
            xp = x.copy()
            xm = x.copy()
            xp[i] += hi
            xm[i] -= hi
            fp = _try_eval(log_f, xp, domain_test)
            fm = _try_eval(log_f, xm, domain_test)
            if fp is not None and fm is not None:
                g[i] = (fp - fm) / (2.0 * hi)
                break
            hi /= 4.0
        else:
            raise DerivativeError("gradient stencil leaves the domain")
    return g


def check_boundary_affine_numeric(model, P_eval, sampler, n_samples=None,
                                  tol=1e-8, name="boundary"):
    """Affine least-squares fit of Gamma(x_i, log P) over interior samples.

    Returns (report, coeffs) where coeffs has shape (dim + 1, dim): row 0 the
    intercepts, rows 1.. the linear parts, one column per coordinate, so that
    Gamma(x_i, log P)(x) ~= coeffs[0, i] + x . coeffs[1:, i].
    """
    dim = model.dim
    if n_samples is None:
        n_samples = 4 * (dim + 1)
    if n_samples < dim + 2:
        raise RankDeficientFit(
            "%d samples for an affine fit in dimension %d" % (n_samples, dim))
    X = np.empty((n_samples, dim + 1))
    Y = np.empty((n_samples, dim))
    def log_P(x):
        # log |P|: the affine identity is insensitive to the sign of P
        val = abs(P_eval(x))
        if val == 0.0:
            return None
        return np.log(val)

    for s in range(n_samples):
        x = np.asarray(sampler(), dtype=float)
        grad = grad_log_numeric(log_P, x, domain_test=model.domain_test)
        Y[s] = np.asarray(model.gamma(x)) @ grad
        X[s, 0] = 1.0
        X[s, 1:] = x
    coeffs, _, rank, _ = np.linalg.lstsq(X, Y, rcond=None)
    if rank < dim + 1:
        raise RankDeficientFit("design matrix rank %d < %d" % (rank, dim + 1))
    resid = float(np.max(np.abs(Y - X @ coeffs)))
    rep = VerificationReport(name, n_samples, resid, tol)
    return rep, coeffs
