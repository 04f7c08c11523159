"""Phase estimation with an ``n_c``-qudit control register."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidArgumentError
from ..gates import GateOp
from .qft import qft_matrix


def qpe_kernel(theta: float, n_c: int, N: int) -> np.ndarray:
    """``P(y) = |N_C^-1 sum_x exp(2 pi i x (theta - y/N_C))|^2``."""
    Q = N**n_c
    x = np.arange(Q)
    y = np.arange(Q)
    amp = np.exp(2j * np.pi * np.outer(theta - y / Q, x)).sum(axis=1) / Q
    return np.abs(amp) ** 2


def qpe_estimate(u: GateOp | np.ndarray, eigenstate: np.ndarray, n_c: int, N: int) -> np.ndarray:
    """Outcome distribution of the control register, simulated gate by gate.

    Control digit ``i`` (big-endian) applies ``u^(N^(n_c-1-i))`` to the power of its label.
    """
    U = np.asarray(getattr(u, "matrix", u), dtype=complex)
    psi = np.asarray(eigenstate, dtype=complex)
    if U.shape[0] != psi.size:
        raise InvalidArgumentError("eigenstate size does not match the unitary")
    Q = N**n_c
    # uniform control register (Fourier gate on every digit) times the target
    state = np.full((Q, psi.size), 1 / np.sqrt(Q), dtype=complex) * psi[None, :]
    digits = np.stack(np.unravel_index(np.arange(Q), (N,) * n_c), axis=1)
    for i in range(n_c):
        W = np.linalg.matrix_power(U, N ** (n_c - 1 - i))
        pows = [np.eye(U.shape[0], dtype=complex)]
        for _ in range(N - 1):
            pows.append(W @ pows[-1])
        for c in range(1, N):
            sel = digits[:, i] == c
            state[sel] = state[sel] @ pows[c].T
    state = qft_matrix(N, n_c, inverse=True) @ state
    return np.sum(np.abs(state) ** 2, axis=1)


def eigenphase(u: np.ndarray, eigenstate: np.ndarray) -> float:
    """``theta in [0, 1)`` with ``u psi = exp(2 pi i theta) psi``."""
    psi = np.asarray(eigenstate, dtype=complex)
    lam = np.vdot(psi, np.asarray(u) @ psi) / np.vdot(psi, psi)
    return float(np.mod(np.angle(lam) / (2 * np.pi), 1.0))
