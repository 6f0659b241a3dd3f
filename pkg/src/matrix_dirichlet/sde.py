"""Euler-Maruyama integration for any DiffusionModel.

The generator convention L = sum g^ij d2_ij + sum b^i d_i carries no 1/2
in front of the second-order term, so the SDE matching it is

    dX = b dt + sigma dW   with   sigma sigma^T = 2 g.

The factor 2 is easy to drop and hard to notice (it only rescales time),
so it is produced in exactly one place, `diffusion_factor`.

Steps that leave the model's domain are retried with halved step size,
chaining accepted sub-steps until the full increment is consumed.  Paths
stream their moments; batch means (20 batches) give an effective sample
size and a standard error for the mean.
"""

import csv
import json

import numpy as np
from scipy.linalg.lapack import dpstrf

from .calculus import DiffusionModel
from .errors import NotPsdError, StepRejectedError


class SimConfig:
    """Integration parameters: step size, length, thinning, seed."""

    def __init__(self, dt, n_steps, thin=1, seed=0, max_step_retries=8,
                 burn_in=0):
        if dt <= 0:
            raise ValueError("dt must be positive")
        if thin < 1:
            raise ValueError("thin must be >= 1")
        if max_step_retries < 0:
            raise ValueError("max_step_retries must be >= 0")
        if not (0 <= burn_in < n_steps):
            raise ValueError("burn_in must lie in [0, n_steps)")
        self.dt = float(dt)
        self.n_steps = int(n_steps)
        self.thin = int(thin)
        self.seed = int(seed)
        self.max_step_retries = int(max_step_retries)
        self.burn_in = int(burn_in)

    def to_dict(self):
        return {"dt": self.dt, "n_steps": self.n_steps, "thin": self.thin,
                "seed": self.seed, "max_step_retries": self.max_step_retries,
                "burn_in": self.burn_in}


def diffusion_factor(G):
    """Matrix sigma with sigma sigma^T = 2 G, via pivoted Cholesky.

    Diagonal pivoting handles semidefinite G (boundary points of the
    state space), where the factor has trailing zero columns.  Raises
    NotPsdError when G has an eigenvalue below -1e-10 * scale.
    """
    G = np.asarray(G, dtype=float)
    A = G + G.T  # = 2 G for symmetric G, symmetrizes roundoff otherwise
    scale = max(float(np.max(np.abs(A))), 1e-300)
    c, piv, rank, info = dpstrf(A, lower=1)
    if info < 0:
        raise NotPsdError("pivoted Cholesky failed (info %d)" % info)
    n = A.shape[0]
    L = np.tril(c)
    L[:, rank:] = 0.0
    sigma = np.zeros_like(L)
    sigma[piv - 1, :] = L  # undo the permutation: A = P L L^T P^T
    resid = float(np.max(np.abs(sigma @ sigma.T - A)))
    if resid > 1e-10 * scale:
        raise NotPsdError(
            "matrix is not psd (factor residual %.3e)" % resid)
    return sigma


def _em_chain(model, x, dt, rng, retries):
    """Advance time dt with step-halving on domain exits.

    Returns (x', n_rejections).  Raises StepRejectedError once a single
    sub-step has been halved more than `retries` times.
    """
    x = np.asarray(x, dtype=float)
    t = 0.0
    h = dt
    n_rej = 0
    fails = 0
    while t < dt * (1.0 - 1e-12):
        h = min(h, dt - t)
        b = np.asarray(model.drift(x))
        sigma = diffusion_factor(model.gamma(x))
        xi = rng.standard_normal(x.size)
        prop = x + b * h + np.sqrt(h) * (sigma @ xi)
        if model.domain_test(prop):
            x = prop
            t += h
            fails = 0
        else:
            n_rej += 1
            fails += 1
            if fails > retries:
                raise StepRejectedError(
                    "step left the domain after %d halvings" % retries,
                    position=x, proposal=prop)
            h *= 0.5
    return x, n_rej


def em_step(model, x, dt, rng, retries=8):
    """One Euler-Maruyama increment of total length dt (sub-stepped on
    domain exits)."""
    out, _ = _em_chain(model, x, dt, rng, retries)
    return out


class PathSummary:
    """Streaming moments of a simulated path.

    mean and second are the sample mean and second-moment matrix of the
    recorded (post burn-in, thinned) states; ess and se_mean come from
    20-batch batch means.  states is the recorded array when requested.
    """

    def __init__(self, dim, count, mean, second, batch_means, n_rejections,
                 config, states=None):
        self.dim = dim
        self.count = count
        self.mean = mean
        self.second = second
        self.cov = second - np.outer(mean, mean)
        self.n_rejections = n_rejections
        self.config = config
        self.states = states
        nb = batch_means.shape[0]
        self.n_batches = nb
        var_bm = np.var(batch_means, axis=0, ddof=1)
        self.se_mean = np.sqrt(var_bm / nb)
        var_x = np.clip(np.diag(self.cov), 1e-300, None)
        bs = count // nb
        with np.errstate(divide="ignore"):
            self.ess = np.minimum(count, var_x / np.clip(
                var_bm, 1e-300, None) * nb)
        self.batch_size = bs

    @property
    def rejection_fraction(self):
        return self.n_rejections / max(self.config.n_steps, 1)


def simulate(model, x0, config, record=False):
    """Integrate the model from x0 and stream moments.

    Deterministic given config.seed (counter-based Philox stream).
    Records every thin-th state after burn_in; the number of recorded
    states must cover the 20 batch-means batches.
    """
    x = np.asarray(x0, dtype=float).copy()
    if not model.domain_test(x):
        raise StepRejectedError("x0 outside the domain", position=x)
    rng = np.random.Generator(np.random.Philox(config.seed))
    count = (config.n_steps - config.burn_in) // config.thin
    nb = 20
    if count < nb:
        raise ValueError("only %d recorded states for %d batches"
                         % (count, nb))
    bs = count // nb
    used = nb * bs
    dim = x.size
    s1 = np.zeros(dim)
    s2 = np.zeros((dim, dim))
    batch_means = np.zeros((nb, dim))
    states = np.empty((count, dim)) if record else None
    n_rej = 0
    recorded = 0
    for step in range(config.n_steps):
        x, rej = _em_chain(model, x, config.dt, rng,
                           config.max_step_retries)
        n_rej += rej
        k = step - config.burn_in
        if k >= 0 and (k + 1) % config.thin == 0 and recorded < count:
            s1 += x
            s2 += np.outer(x, x)
            if record:
                states[recorded] = x
            if recorded < used:
                batch_means[recorded // bs] += x / bs
            recorded += 1
    return PathSummary(dim, count, s1 / count, s2 / count, batch_means,
                       n_rej, config, states=states)


def write_path_csv(summary, path, names=None):
    """Recorded states as CSV: three metadata comment lines, a header
    row of coordinate names, then one row per state."""
    if summary.states is None:
        raise ValueError("summary was built without record=True")
    dim = summary.dim
    if names is None:
        names = ["x%d" % i for i in range(dim)]
    with open(path, "w", newline="") as fh:
        fh.write("# config: %s\n" % json.dumps(summary.config.to_dict()))
        fh.write("# count: %d\n" % summary.count)
        fh.write("# rejections: %d\n" % summary.n_rejections)
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in summary.states:
            writer.writerow(["%.12g" % v for v in row])


# 1-D reference diffusions used to calibrate the integrator.  All three
# are classical orthogonal-polynomial generators; the factor-2 SDE
# convention makes their stationary laws N(0,1), gamma(a), and the
# (-1,1) beta law respectively.

def ou_model():
    """L = d^2/dx^2 - x d/dx; stationary law N(0, 1)."""
    return DiffusionModel(
        1, gamma=lambda x: np.array([[1.0]]),
        drift=lambda x: -np.asarray(x), name="ou")


def ou_grad_log(x):
    return -np.asarray(x)


def laguerre_model(a, margin=1e-12):
    """L = x d^2/dx^2 + (a - x) d/dx on (0, inf); stationary gamma(a)."""
    return DiffusionModel(
        1, gamma=lambda x: np.array([[x[0]]]),
        drift=lambda x: np.array([a - x[0]]),
        domain_test=lambda x: x[0] > margin, name="laguerre")


def laguerre_grad_log(a, x):
    return np.array([(a - 1.0) / x[0] - 1.0])


def jacobi_model(a, b, margin=1e-12):
    """L = (1 - x^2) d^2/dx^2 - (a - b + (a + b) x) d/dx on (-1, 1).

    Stationary density proportional to (1-x)^(a-1) (1+x)^(b-1).
    """
    return DiffusionModel(
        1, gamma=lambda x: np.array([[1.0 - x[0] ** 2]]),
        drift=lambda x: np.array([-(a - b + (a + b) * x[0])]),
        domain_test=lambda x: abs(x[0]) < 1.0 - margin, name="jacobi")


def jacobi_grad_log(a, b, x):
    return np.array([-(a - 1.0) / (1.0 - x[0]) + (b - 1.0) / (1.0 + x[0])])
