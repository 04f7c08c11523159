"""numba-compiled kernels; same contracts as :mod:`._numpy`."""

import numpy as np
from numba import njit


@njit(cache=True)
def _block_offsets(local_dim, n_sites, sites):
    k = sites.shape[0]
    blk = local_dim**k
    offs = np.zeros(blk, dtype=np.int64)
    for a in range(blk):
        rem = a
        off = 0
        for q in range(k - 1, -1, -1):
            digit = rem % local_dim
            rem //= local_dim
            off += digit * local_dim ** (n_sites - 1 - sites[q])
        offs[a] = off
    return offs


@njit(cache=True)
def _apply_matrix(amps, local_dim, n_sites, matrix, sites):
    total = amps.shape[0]
    k = sites.shape[0]
    blk = local_dim**k
    offs = _block_offsets(local_dim, n_sites, sites)
    strides = np.empty(k, dtype=np.int64)
    for q in range(k):
        strides[q] = local_dim ** (n_sites - 1 - sites[q])
    out = np.empty_like(amps)
    sub = np.empty(blk, dtype=amps.dtype)
    for i in range(total):
        base = True
        for q in range(k):
            if (i // strides[q]) % local_dim != 0:
                base = False
                break
        if not base:
            continue
        for b in range(blk):
            sub[b] = amps[i + offs[b]]
        for a in range(blk):
            acc = 0.0j
            for b in range(blk):
                acc += matrix[a, b] * sub[b]
            out[i + offs[a]] = acc
    return out


def apply_matrix(amps, local_dim, n_sites, matrix, sites):
    return _apply_matrix(
        np.ascontiguousarray(amps, dtype=np.complex128),
        local_dim,
        n_sites,
        np.ascontiguousarray(matrix, dtype=np.complex128),
        np.asarray(sites, dtype=np.int64),
    )


@njit(cache=True)
def _apply_monomial(amps, local_dim, n_sites, site, perm, phases):
    outer = local_dim**site
    inner = amps.shape[0] // (outer * local_dim)
    out = np.empty_like(amps)
    for o in range(outer):
        for l in range(local_dim):
            src = (o * local_dim + l) * inner
            dst = (o * local_dim + perm[l]) * inner
            ph = phases[l]
            for r in range(inner):
                out[dst + r] = ph * amps[src + r]
    return out


def apply_monomial(amps, local_dim, n_sites, site, perm, phases):
    return _apply_monomial(
        np.ascontiguousarray(amps, dtype=np.complex128),
        local_dim,
        n_sites,
        site,
        np.asarray(perm, dtype=np.int64),
        np.asarray(phases, dtype=np.complex128),
    )


@njit(cache=True)
def _weyl_syndromes(checks, errors, modulus):
    n_trials, n = errors.shape
    m = checks.shape[0]
    out = np.zeros((n_trials, m), dtype=np.int64)
    for t in range(n_trials):
        for c in range(m):
            acc = 0
            for e in range(n):
                acc += checks[c, e] * errors[t, e]
            out[t, c] = acc % modulus
    return out


def weyl_syndromes(checks, errors, modulus):
    return _weyl_syndromes(
        np.ascontiguousarray(checks, dtype=np.int64),
        np.ascontiguousarray(errors, dtype=np.int64),
        int(modulus),
    )


@njit(cache=True)
def _site_marginal(probs, local_dim, site):
    outer = local_dim**site
    inner = probs.shape[0] // (outer * local_dim)
    out = np.zeros(local_dim)
    for o in range(outer):
        for l in range(local_dim):
            base = (o * local_dim + l) * inner
            for r in range(inner):
                out[l] += probs[base + r]
    return out


def site_marginal(probs, local_dim, n_sites, site):
    return _site_marginal(np.ascontiguousarray(probs, dtype=np.float64), local_dim, site)
