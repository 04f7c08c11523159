"""Coined discrete-time and continuous-time walks.

The coin lives on the internal factor (``d`` levels, one per edge direction)
and the position on the external factor (``D`` vertices), so ``N = dD``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from ..errors import InvalidArgumentError
from ..gates import GateOp, h_matrix
from ..hilbert import HybridDims


def grover_coin(d: int) -> np.ndarray:
    return 2.0 / d * np.ones((d, d), dtype=complex) - np.eye(d)


def hadamard_coin() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def cycle_shifts(D: int, offsets=(-1, 1)) -> list[np.ndarray]:
    """Permutations ``sigma_j(k) = k + offsets[j] mod D`` of a circulant graph."""
    return [(np.arange(D) + o) % D for o in offsets]


def shift_matrix(shifts, D: int) -> np.ndarray:
    """``S = sum_j |j><j| (x) sum_k |sigma_j(k)><k|``."""
    d = len(shifts)
    S = np.zeros((d * D, d * D), dtype=complex)
    for j, sig in enumerate(shifts):
        sig = np.asarray(sig)
        if sorted(sig.tolist()) != list(range(D)):
            raise InvalidArgumentError(f"sigma_{j} is not a permutation of {D} vertices")
        S[j * D + sig, j * D + np.arange(D)] = 1
    return S


def dtqw_step(coin, shifts, dims: HybridDims) -> GateOp:
    """``V = S (C (x) I_ext)``."""
    C = np.asarray(getattr(coin, "matrix", coin), dtype=complex)
    if C.shape != (dims.d, dims.d) or len(shifts) != dims.d:
        raise InvalidArgumentError("coin and shift count must match the internal dimension")
    V = shift_matrix(shifts, dims.D) @ np.kron(C, np.eye(dims.D))
    return GateOp("V_walk", V)


def position_distribution(psi: np.ndarray, dims: HybridDims) -> np.ndarray:
    return np.sum(np.abs(psi.reshape(dims.d, dims.D)) ** 2, axis=0)


def dtqw_run(steps: int, initial: np.ndarray, coin, shifts, dims: HybridDims) -> np.ndarray:
    """Position distribution after each of ``0..steps`` steps, shape ``(steps+1, D)``."""
    V = dtqw_step(coin, shifts, dims).matrix
    psi = np.asarray(initial, dtype=complex)
    out = [position_distribution(psi, dims)]
    for _ in range(steps):
        psi = V @ psi
        out.append(position_distribution(psi, dims))
    return np.array(out)


def time_averaged(steps: int, initial: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``M(t) = t^-1 sum_{s<t} |psi_s|^2`` over the full ``N = dD`` labels."""
    psi = np.asarray(initial, dtype=complex)
    acc = np.zeros(psi.size)
    for _ in range(steps):
        acc += np.abs(psi) ** 2
        psi = V @ psi
    return acc / steps


def momentum_blocks(V: np.ndarray, dims: HybridDims) -> tuple[np.ndarray, float]:
    """Conjugate by ``I_d (x) F_D``; returns ``(blocks[p], off-block norm)``."""
    d, D = dims.d, dims.D
    F = np.kron(np.eye(d), h_matrix(D))
    W = F.conj().T @ V @ F
    # reorder (j, p) -> (p, j) so momentum blocks are contiguous
    W = W.reshape(d, D, d, D).transpose(1, 0, 3, 2).reshape(D * d, D * d)
    blocks = np.stack([W[p * d:(p + 1) * d, p * d:(p + 1) * d] for p in range(D)])
    mask = np.kron(np.eye(D), np.ones((d, d))).astype(bool)
    off = float(np.linalg.norm(W[~mask]))
    return blocks, off


def block_phases(blocks: np.ndarray) -> np.ndarray:
    """Eigenphases ``phi_{j,p}`` of each momentum block."""
    return np.angle(np.linalg.eigvals(blocks))


def position_variance(dist: np.ndarray, origin: int) -> float:
    D = dist.size
    x = (np.arange(D) - origin + D // 2) % D - D // 2
    mean = np.dot(dist, x)
    return float(np.dot(dist, x**2) - mean**2)


def ballistic_exponent(variances: np.ndarray, t0: int = 5) -> float:
    """Slope of ``log var`` against ``log t`` for ``t >= t0`` (2 for ballistic, 1 for diffusive)."""
    t = np.arange(len(variances))[t0:]
    if t.size < 2:
        return float("nan")
    return float(np.polyfit(np.log(t), np.log(variances[t0:]), 1)[0])


def cycle_laplacian(D: int) -> np.ndarray:
    A = np.zeros((D, D))
    for k in range(D):
        A[k, (k + 1) % D] = A[(k + 1) % D, k] = 1
    return np.diag(A.sum(1)) - A


def ctqw_run(L: np.ndarray, t: float, initial: np.ndarray, d: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Evolve under ``I_int (x) L``; returns ``(position distribution, final state)``."""
    L = np.asarray(L, dtype=float)
    if not np.allclose(L, L.T, atol=1e-12):
        raise InvalidArgumentError("laplacian must be symmetric")
    D = L.shape[0]
    psi = np.asarray(initial, dtype=complex).reshape(d, D)
    psi = psi @ expm(-1j * t * L).T
    return np.sum(np.abs(psi) ** 2, axis=0), psi.reshape(-1)


def internal_reduced(psi: np.ndarray, d: int) -> np.ndarray:
    m = np.asarray(psi).reshape(d, -1)
    return m @ m.conj().T
