"""Quantum Fisher information for packaged probes.

The parameter is imprinted as ``exp(-i phi G)`` with ``G = sum_k g^{(k)}``
a sum of single-site terms. Site counts are always called ``n_sites`` here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ContractViolation, InvalidArgumentError
from .gates import embed_computational
from .hilbert import HybridDims
from .state import RegisterState, as_rng, from_amplitudes


def _is_hermitian(m, tol=1e-10) -> bool:
    m = m.toarray() if sp.issparse(m) else np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def site_sum(local: np.ndarray, n_sites: int) -> sp.csr_matrix:
    """``sum_k I (x) ... (x) local^{(k)} (x) ... (x) I`` as a sparse matrix."""
    local = sp.csr_matrix(np.asarray(local, dtype=complex))
    ld = local.shape[0]
    G = sp.csr_matrix((ld**n_sites, ld**n_sites), dtype=complex)
    for k in range(n_sites):
        G = G + sp.kron(sp.kron(sp.identity(ld**k), local), sp.identity(ld ** (n_sites - k - 1)), format="csr")
    return G.tocsr()


@dataclass
class MetrologyProbe:
    state: RegisterState
    local_generator: np.ndarray
    n_sites: int = field(init=False)

    def __post_init__(self):
        g = np.asarray(self.local_generator, dtype=complex)
        if not _is_hermitian(g):
            raise ContractViolation("generator must be hermitian")
        ld = self.state.local_dim
        if g.shape[0] != ld:
            if g.shape[0] != self.state.N:
                raise InvalidArgumentError("generator does not match the local dimension")
            g = embed_computational(g, self.state.N, ld, 1)
            # the embedding pads with identity; the generator should vanish off the span
            g[self.state.N:, self.state.N:] = 0
        self.local_generator = g
        self.n_sites = self.state.n_sites

    @property
    def G(self) -> sp.csr_matrix:
        return site_sum(self.local_generator, self.n_sites)


def qfi_pure(probe: MetrologyProbe) -> float:
    """``4 (<G^2> - <G>^2)``."""
    psi = probe.state.amplitudes
    Gpsi = probe.G @ psi
    mean = np.vdot(psi, Gpsi).real
    return float(max(4 * (np.vdot(Gpsi, Gpsi).real - mean**2), 0.0))


def qfim_pure(state: RegisterState, generators) -> np.ndarray:
    """``4 Re(<G_a psi|G_b psi> - <G_a><G_b>)`` for a list of hermitian generators."""
    psi = state.amplitudes
    vecs = []
    for G in generators:
        if not _is_hermitian(G):
            raise ContractViolation("generators must be hermitian")
        vecs.append(G @ psi)
    means = np.array([np.vdot(psi, v).real for v in vecs])
    k = len(vecs)
    F = np.empty((k, k))
    for a in range(k):
        for b in range(a, k):
            F[a, b] = F[b, a] = 4 * (np.vdot(vecs[a], vecs[b]).real - means[a] * means[b])
    return F


def fidelity_curvature_qfi(probe: MetrologyProbe, h: float = 1e-3) -> float:
    """``-2 d^2/dphi^2 |<psi|exp(-i phi G)|psi>|^2`` at 0 by central differences."""
    psi = probe.state.amplitudes
    G = probe.G
    # G is hermitian; evolve in its eigenbasis restricted to the support of psi
    w, V = np.linalg.eigh(G.toarray()) if G.shape[0] <= 4096 else (None, None)
    if w is None:
        from scipy.sparse.linalg import expm_multiply

        def ov(phi):
            return abs(np.vdot(psi, expm_multiply(-1j * phi * G, psi))) ** 2
    else:
        c = V.conj().T @ psi

        def ov(phi):
            return abs(np.vdot(c, np.exp(-1j * phi * w) * c)) ** 2
    return float(-2 * (ov(h) - 2 * ov(0.0) + ov(-h)) / h**2)


def qfi_mixed(rho: np.ndarray, G, tol: float = 1e-12) -> float:
    """Symmetric-logarithmic-derivative QFI ``2 sum (l_k - l_l)^2/(l_k + l_l) |G_kl|^2``."""
    G = G.toarray() if sp.issparse(G) else np.asarray(G)
    lam, U = np.linalg.eigh(rho)
    Gk = U.conj().T @ G @ U
    L1, L2 = np.meshgrid(lam, lam, indexing="ij")
    s = L1 + L2
    mask = s > tol
    return float(2 * np.sum(((L1 - L2) ** 2)[mask] / s[mask] * np.abs(Gk[mask]) ** 2))


# ---------------------------------------------------------------- probes

def ghz_probe(n_sites: int, dims: HybridDims, j0: int = 0) -> MetrologyProbe:
    """``d^-1/2 sum_j |j, 0_E>^{(x) n}`` with ``g = |j0><j0| (x) I_D``."""
    d, D = dims.d, dims.D
    N = dims.N
    psi = np.zeros(N**n_sites, dtype=complex)
    for j in range(d):
        idx = sum((j * D) * N ** (n_sites - 1 - k) for k in range(n_sites))
        psi[idx] = 1 / np.sqrt(d)
    g = np.kron(np.diag(np.eye(d)[j0]), np.eye(D))
    return MetrologyProbe(from_amplitudes(psi, dims, n_sites), g)


def noon_probe(n_sites: int, dims: HybridDims) -> MetrologyProbe:
    """``(|0_P 0_E>^{(x) n} + |0_P 1_E>^{(x) n}) / sqrt 2`` with ``g = I_d (x) |1_E><1_E|``."""
    if dims.D < 2:
        raise InvalidArgumentError("NOON probe needs D >= 2")
    N, D = dims.N, dims.D
    psi = np.zeros(N**n_sites, dtype=complex)
    psi[0] = 1 / np.sqrt(2)
    psi[sum(1 * N ** (n_sites - 1 - k) for k in range(n_sites))] = 1 / np.sqrt(2)
    g = np.kron(np.eye(dims.d), np.diag(np.eye(D)[1]))
    return MetrologyProbe(from_amplitudes(psi, dims, n_sites), g)


def spin_matrices(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-``(d-1)/2`` matrices ``(J_x, J_y, J_z)``."""
    j = (d - 1) / 2
    m = j - np.arange(d)
    jp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        jp[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    return (jp + jp.conj().T) / 2, (jp - jp.conj().T) / 2j, np.diag(m).astype(complex)


def collective_su2(n_sites: int, dims: HybridDims):
    """Collective internal spin generators ``sum_k J_a (x) I_D``."""
    return [site_sum(np.kron(J, np.eye(dims.D)), n_sites) for J in spin_matrices(dims.d)]


# ------------------------------------------------------------ references

def ghz_reference(n_sites: int, d: int) -> float:
    return 4 * n_sites**2 * (1 / d - 1 / d**2)


def noon_reference(n_sites: int) -> float:
    return 4.0 * n_sites**2


def qfi_dephased_ghz(n_sites: int, d: int, gamma: float, t: float) -> float:
    """Closed-form decay ``4 (n^2/d) exp(-gamma t)``."""
    if min(n_sites, d, gamma, t) < 0:
        raise InvalidArgumentError("parameters must be nonnegative")
    return 4 * n_sites**2 / d * math.exp(-gamma * t)


def dephased_ghz_rho(n_sites: int, d: int, gamma: float, t: float) -> np.ndarray:
    """GHZ state on the ``d``-dimensional branch span with coherences ``exp(-gamma t)``."""
    c = math.exp(-gamma * t)
    rho = np.full((d, d), c / d, dtype=complex)
    np.fill_diagonal(rho, 1 / d)
    return rho


def dephased_ghz_trajectories(n_sites: int, d: int, gamma: float, t: float, samples: int, seed) -> dict:
    """Random branch phases with ``E[exp(i(theta_j - theta_j'))] = exp(-gamma t)``.

    The trajectory-averaged state is formed on the ``d`` GHZ branches and its
    exact QFI evaluated for ``G`` restricted there (``n`` on branch ``j0 = 0``).
    """
    rng = as_rng(seed)
    theta = rng.normal(0.0, math.sqrt(gamma * t), size=(samples, d))
    psi = np.exp(1j * theta) / np.sqrt(d)
    rho = np.einsum("si,sj->ij", psi, psi.conj()) / samples
    G = np.diag(np.eye(d)[0] * n_sites)
    mc = qfi_mixed(rho, G)
    exact = qfi_mixed(dephased_ghz_rho(n_sites, d, gamma, t), G)
    formula = qfi_dephased_ghz(n_sites, d, gamma, t)
    var_form = ghz_reference(n_sites, d) * math.exp(-gamma * t)
    return {"monte_carlo": mc, "exact_dephased": exact, "decay_formula": formula,
            "variance_prefactor_formula": var_form,
            "mc_vs_exact_rel": abs(mc - exact) / exact if exact else (0.0 if mc == 0 else math.inf),
            "mc_vs_decay_formula_rel": abs(mc - formula) / formula if formula else math.inf,
            "prefactor_mismatch": formula - var_form}


def report_triple(formula: float, numeric: float) -> dict:
    rel = abs(numeric - formula) / abs(formula) if formula else (0.0 if numeric == 0 else math.inf)
    return {"formula": formula, "numeric": numeric, "relative_deviation": rel}
