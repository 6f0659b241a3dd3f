"""Scalar and matrix Dirichlet diffusions.

Simulation (Euler-Maruyama over real coordinates) and numerical verification
of closed-form generator/co-metric identities via a generic chain-rule
pushforward engine, for:

* scalar Dirichlet diffusions on the simplex and their sphere / product /
  warped-product ambient constructions,
* the two polynomial diffusion families on the complex matrix simplex,
* the unitary-group, Wishart, and polar-decomposition constructions that
  project onto them.
"""

__version__ = "0.1.0"
