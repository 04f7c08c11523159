"""Entangled bases, MUBs and GHZ states on hybrid sites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError
from .gates import h_matrix, x_matrix, z_matrix
from .hilbert import ChargeAssignment, HybridDims
from .state import RegisterState, from_amplitudes


@dataclass(frozen=True)
class BellIndex:
    m: int
    n: int

    def check(self, N: int):
        if not (0 <= self.m < N and 0 <= self.n < N):
            raise InvalidArgumentError(f"Bell labels ({self.m},{self.n}) out of range for N={N}")


def bell_vector(N: int, m: int, n: int) -> np.ndarray:
    """``N^-1/2 sum_J w^{mJ} |J>|J+n>`` as an ``N**2`` vector."""
    BellIndex(m, n).check(N)
    J = np.arange(N)
    v = np.zeros(N * N, dtype=complex)
    v[J * N + (J + n) % N] = np.exp(2j * np.pi * m * J / N) / np.sqrt(N)
    return v


def bell_state(idx: BellIndex | tuple[int, int], dims: HybridDims, charge: ChargeAssignment | None = None) -> RegisterState:
    if not isinstance(idx, BellIndex):
        idx = BellIndex(*idx)
    return from_amplitudes(bell_vector(dims.N, idx.m, idx.n), dims, 2, charge)


def bell_basis_matrix(N: int) -> np.ndarray:
    """Columns are ``|Phi_{m,n}>`` ordered by ``m*N + n``."""
    return np.column_stack([bell_vector(N, m, n) for m in range(N) for n in range(N)])


def bell_projectors(N: int) -> list[np.ndarray]:
    B = bell_basis_matrix(N)
    return [np.outer(B[:, i], B[:, i].conj()) for i in range(N * N)]


def bell_inverse_product(N: int, J: int, n: int) -> np.ndarray:
    """Rebuild ``|J>|J+n>`` as ``N^-1/2 sum_m w^{-mJ} |Phi_{m,n}>``."""
    return sum(np.exp(-2j * np.pi * m * J / N) * bell_vector(N, m, n) for m in range(N)) / np.sqrt(N)


def bell_two_index_vector(mu: int, nu: int, n_int: int, n_ext: int, dims: HybridDims) -> np.ndarray:
    d, D = dims.d, dims.D
    if not (0 <= mu < d and 0 <= n_int < d and 0 <= nu < D and 0 <= n_ext < D):
        raise InvalidArgumentError("two-index Bell labels out of range")
    N = dims.N
    v = np.zeros(N * N, dtype=complex)
    for j in range(d):
        for k in range(D):
            a = j * D + k
            b = ((j + n_int) % d) * D + (k + n_ext) % D
            v[a * N + b] = np.exp(2j * np.pi * (mu * j / d + nu * k / D))
    return v / np.sqrt(N)


def bell_two_index(mu, nu, n_int, n_ext, dims: HybridDims, charge: ChargeAssignment | None = None) -> RegisterState:
    return from_amplitudes(bell_two_index_vector(mu, nu, n_int, n_ext, dims), dims, 2, charge)


def bell_two_index_inverse(j, k, n_int, n_ext, dims: HybridDims) -> np.ndarray:
    """``|j,k>|j+n_int, k+n_ext>`` from the two-index family's inverse expansion."""
    d, D = dims.d, dims.D
    out = np.zeros(dims.N**2, dtype=complex)
    for mu in range(d):
        for nu in range(D):
            ph = np.exp(-2j * np.pi * (mu * j / d + nu * k / D))
            out += ph * bell_two_index_vector(mu, nu, n_int, n_ext, dims)
    return out / np.sqrt(dims.N)


def bell_two_index_matrix(dims: HybridDims) -> np.ndarray:
    d, D = dims.d, dims.D
    cols = [bell_two_index_vector(mu, nu, a, b, dims)
            for mu in range(d) for nu in range(D) for a in range(d) for b in range(D)]
    return np.column_stack(cols)


def two_index_family_coincides(dims: HybridDims, tol: float = 1e-10) -> bool:
    """Whether ``(m, n) = (mu*D + nu, n_int*D + n_ext)`` maps the two families onto each other."""
    d, D = dims.d, dims.D
    for mu, nu, a, b in itertools.product(range(d), range(D), range(d), range(D)):
        v2 = bell_two_index_vector(mu, nu, a, b, dims)
        v1 = bell_vector(dims.N, mu * D + nu, a * D + b)
        if abs(abs(np.vdot(v1, v2)) - 1) > tol:
            return False
    return True


# ----------------------------------------------------------------------- MUBs

class MUBKind(str, Enum):
    CANONICAL = "canonical-triplet"
    PRODUCT = "product-extension"


@dataclass(frozen=True)
class MUBFamily:
    N: int
    bases: tuple[np.ndarray, ...]
    kind: MUBKind
    labels: tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.bases)


def quadratic_phase(N: int) -> np.ndarray:
    """``m(m+1)/2`` for odd ``N`` and ``m(m+N)/2`` for even ``N`` (may be half-integer)."""
    m = np.arange(N, dtype=float)
    return m * (m + 1) / 2 if N % 2 else m * (m + N) / 2


def xz_basis(N: int) -> np.ndarray:
    """Columns ``N^-1/2 sum_m w^{theta(m) - n m} |m>``."""
    m = np.arange(N)
    theta = quadratic_phase(N)
    expo = theta[:, None] - np.outer(m, m)
    return np.exp(2j * np.pi * expo / N) / np.sqrt(N)


def xz_eigenphase_offset(N: int) -> float:
    """``c`` with ``(X Z)|psi_n> = exp(2 pi i (n + c)/N) |psi_n>`` for :func:`xz_basis`."""
    return -1.0 if N % 2 else -(N + 1) / 2


def xz_eigenvalues(N: int) -> np.ndarray:
    """Eigenvalue of ``X Z`` on each column of :func:`xz_basis`, computed directly."""
    B = xz_basis(N)
    XZ = x_matrix(N) @ z_matrix(N)
    return np.array([np.vdot(B[:, n], XZ @ B[:, n]) for n in range(N)])


def mub_triplet(N: int) -> MUBFamily:
    if N < 2:
        raise InvalidArgumentError("MUBs need N >= 2")
    return MUBFamily(N, (np.eye(N, dtype=complex), h_matrix(N), xz_basis(N)), MUBKind.CANONICAL, ("Z", "X", "XZ"))


def product_mubs(d_family: MUBFamily, D_family: MUBFamily) -> MUBFamily:
    bases, labels = [], []
    for a, la in zip(d_family.bases, d_family.labels or range(len(d_family))):
        for b, lb in zip(D_family.bases, D_family.labels or range(len(D_family))):
            bases.append(np.kron(a, b))
            labels.append(f"{la}x{lb}")
    return MUBFamily(d_family.N * D_family.N, tuple(bases), MUBKind.PRODUCT, tuple(labels))


def overlap_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``|<a_i|b_j>|^2`` for the columns of two bases."""
    return np.abs(a.conj().T @ b) ** 2


def unbiased(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    N = a.shape[0]
    return bool(np.max(np.abs(overlap_table(a, b) - 1.0 / N)) <= tol)


def product_vs_canonical(d: int, D: int) -> list[dict]:
    """Unbiasedness of every product basis against every canonical basis of ``N = dD``."""
    canon = mub_triplet(d * D)
    prod = product_mubs(mub_triplet(d), mub_triplet(D))
    rows = []
    for pl, pb in zip(prod.labels, prod.bases):
        for cl, cb in zip(canon.labels, canon.bases):
            tab = overlap_table(pb, cb)
            rows.append({"product": pl, "canonical": cl, "min": float(tab.min()), "max": float(tab.max()),
                         "unbiased": unbiased(pb, cb)})
    return rows


# ------------------------------------------------------------------------ GHZ

def ghz_vector(n_parties: int, N: int) -> np.ndarray:
    if n_parties < 2:
        raise InvalidArgumentError("GHZ needs at least two parties")
    v = np.zeros(N**n_parties, dtype=complex)
    step = sum(N**i for i in range(n_parties))
    v[np.arange(N) * step] = 1 / np.sqrt(N)
    return v


def ghz_state(n_parties: int, dims: HybridDims, charge: ChargeAssignment | None = None) -> RegisterState:
    return from_amplitudes(ghz_vector(n_parties, dims.N), dims, n_parties, charge)


# ------------------------------------------------------------ packaged qubits

def packaged_qubit_bell_basis() -> dict[str, np.ndarray]:
    """The four N=2 Bell states by name."""
    return {
        "Phi+": bell_vector(2, 0, 0),
        "Phi-": bell_vector(2, 1, 0),
        "Psi+": bell_vector(2, 0, 1),
        "Psi-": bell_vector(2, 1, 1),
    }


def encoding_isometry(dims: HybridDims, charge: ChargeAssignment) -> np.ndarray:
    """``local_dim_ext x N`` isometry placing logical labels onto the computational span."""
    W = np.zeros((charge.local_dim_ext, dims.N))
    W[np.arange(dims.N), np.arange(dims.N)] = 1.0
    return W
