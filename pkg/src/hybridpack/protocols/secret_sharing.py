"""GHZ secret sharing over the hybrid alphabet.

The dealer (party 0) applies ``X^s`` (family 0) or ``Z^s`` (family 1) to her
share of ``|GHZ_n>``. Family 0 is read in the computational basis with
``s = a_0 - a_1``; family 1 in the Fourier basis with ``s = sum_i a_i``.
After the run the dealer announces the family, so the secret is the pair
``(family, s)``. An intercepting Eve must guess both.
"""

from __future__ import annotations

import numpy as np

from ..bases import ghz_vector
from ..errors import InvalidArgumentError
from ..gates import h_matrix, x_matrix, z_matrix
from ..hilbert import HybridDims
from ..state import as_rng
from .qkd import _sample_rows
from .report import ExperimentReport, binomial_sigma, sigma_distance

FAMILIES = ("X", "Z")


def family_basis(N: int, family: int) -> np.ndarray:
    return np.eye(N, dtype=complex) if family == 0 else h_matrix(N)


def encoded_ghz(n_parties: int, N: int, family: int, s: int) -> np.ndarray:
    V = np.linalg.matrix_power(x_matrix(N) if family == 0 else z_matrix(N), s)
    psi = ghz_vector(n_parties, N).reshape(N, -1)
    return (V @ psi).reshape(-1)


def _in_basis(psi: np.ndarray, basis: np.ndarray, n: int) -> np.ndarray:
    """Amplitudes of ``psi`` in ``basis^{(x) n}``, shaped ``(N,) * n``."""
    N = basis.shape[0]
    t = psi.reshape((N,) * n)
    Bd = basis.conj().T
    for ax in range(n):
        t = np.moveaxis(np.tensordot(Bd, t, axes=([1], [ax])), 0, ax)
    return t


def reconstruct(outcomes: np.ndarray, family: np.ndarray, N: int) -> np.ndarray:
    """Secret estimate per row of ``outcomes`` (shape ``(trials, n)``)."""
    diff = (outcomes[:, 0] - outcomes[:, 1]) % N
    total = outcomes.sum(axis=1) % N
    return np.where(family == 0, diff, total)


def correlation_table(n_parties: int, N: int) -> np.ndarray:
    """Computational-basis joint distribution of ``|GHZ_n>``."""
    return (np.abs(ghz_vector(n_parties, N)) ** 2).reshape((N,) * n_parties)


def _tables(n: int, N: int, M: int, eve: bool) -> np.ndarray:
    """Joint tables indexed ``[f, s, g, e, outcome]``; ``g = e = 0`` without Eve."""
    G = M if eve else 1
    E = N if eve else 1
    T = np.zeros((M, N, G, E, N**n))
    for f in range(M):
        Bf = family_basis(N, f)
        for s in range(N):
            psi = encoded_ghz(n, N, f, s)
            if not eve:
                T[f, s, 0, 0] = np.abs(_in_basis(psi, Bf, n).reshape(-1)) ** 2
                continue
            for g in range(M):
                Bg = family_basis(N, g)
                c = (Bg.conj().T @ psi.reshape(N, -1))  # [e, rest]
                rest = np.abs(np.stack([_in_basis(c[e], Bf, n - 1).reshape(-1) for e in range(N)])) ** 2
                over = np.abs(Bf.conj().T @ Bg) ** 2  # [a, e]
                T[f, s, g] = (over.T[:, :, None] * rest[:, None, :]).reshape(N, -1)
    return T


def secret_share(n_parties: int, dims: HybridDims, M_bases: int = 2, seed=0, trials: int = 10_000,
                 eve: bool = False) -> ExperimentReport:
    if n_parties < 3:
        raise InvalidArgumentError("secret sharing needs at least three parties")
    if M_bases not in (1, 2):
        raise InvalidArgumentError("GHZ correlations support M_bases in {1, 2}")
    N = dims.N
    rng = as_rng(seed)
    T = _tables(n_parties, N, M_bases, eve)
    fam = rng.integers(0, M_bases, trials)
    s = rng.integers(0, N, trials)
    if eve:
        g = rng.integers(0, M_bases, trials)
        joint = T[fam, s, g].reshape(trials, -1)
        flat = _sample_rows(rng, joint)
        e, out = np.divmod(flat, N**n_parties)
    else:
        g = np.full(trials, -1)
        e = np.full(trials, -1)
        out = _sample_rows(rng, T[fam, s, 0, 0])
    outcomes = np.stack(np.unravel_index(out, (N,) * n_parties), axis=1)
    s_hat = reconstruct(outcomes, fam, N)
    success = float(np.mean(s_hat == s))
    agg = {"rounds": trials, "success_rate": success}
    ref = {"success_rate": 1.0}
    dev = {}
    if eve:
        acc = float(np.mean((g == fam) & (e == s)))
        p_ref = 1.0 / (M_bases * N)
        agg.update({"eve_accuracy": acc, "eve_accuracy_sigma": binomial_sigma(p_ref, trials),
                    "disturbance": 1 - success})
        ref = {"eve_accuracy_formula": p_ref, "eve_accuracy_exact": p_ref}
        dev["eve_accuracy"] = sigma_distance(acc, p_ref, trials)
    rep = ExperimentReport(
        "secret-sharing",
        {"d": dims.d, "D": dims.D, "n_parties": n_parties, "M_bases": M_bases, "trials": trials,
         "eve": "intercept-resend" if eve else "none"},
        {"family": fam, "secret": s, "outcomes": outcomes, "eve_family": g, "eve_outcome": e},
        agg, ref, dev)
    rep.passed = dev["eve_accuracy"] <= 3 if eve else success == 1.0
    return rep
