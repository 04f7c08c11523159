"""Pure-numpy reference kernels.

Every function here has a numba twin in :mod:`._numba` with an identical
signature; the two are checked against each other in the test-suite.
"""

import numpy as np


def apply_matrix(amps, local_dim, n_sites, matrix, sites):
    k = len(sites)
    psi = amps.reshape((local_dim,) * n_sites)
    psi = np.moveaxis(psi, list(sites), list(range(k)))
    shape = psi.shape
    psi = matrix @ psi.reshape(local_dim**k, -1)
    psi = np.moveaxis(psi.reshape(shape), list(range(k)), list(sites))
    return np.ascontiguousarray(psi).reshape(-1)


def apply_monomial(amps, local_dim, n_sites, site, perm, phases):
    """Apply ``|l> -> phases[l] |perm[l]>`` on one site."""
    psi = amps.reshape(local_dim**site, local_dim, -1)
    out = np.empty_like(psi)
    out[:, perm, :] = psi * phases[None, :, None]
    return out.reshape(-1)


def weyl_syndromes(checks, errors, modulus):
    """Batched ``errors @ checks.T mod modulus`` on integer exponent vectors."""
    return np.mod(errors @ checks.T, modulus)


def site_marginal(probs, local_dim, n_sites, site):
    p = probs.reshape(local_dim**site, local_dim, -1)
    return p.sum(axis=(0, 2))
