"""Steane-like 7-qudit code lifted from the [7,4] Hamming code.

Shift checks use the Hamming rows with all coefficients +1. For N > 2 the
phase checks need signs so that every pair commutes; at N = 2 they reduce to
the usual all-Z checks (``-1 = +1 mod 2``).
"""

from __future__ import annotations

import numpy as np

from ..gates import h_matrix, kron_all
from ..hilbert import ChargeAssignment, HybridDims
from ..state import RegisterState, from_amplitudes
from ._stabilizer import CodeInstance, WeylCheck, build_lookup_table, lookup_correct

N_PHYS = 7
# 0-indexed supports of the Hamming-matrix rows
HAMMING_ROWS = np.array([
    [0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0, 1],
])
SIGNED_Z_ROWS = np.array([
    [0, 0, 0, 1, -1, -1, 1],
    [0, 1, -1, 0, 0, -1, 1],
    [1, 0, -1, 0, -1, 0, 1],
])


def steane_checks(N: int) -> list[WeylCheck]:
    zero = np.zeros(N_PHYS, dtype=np.int64)
    xs = [WeylCheck(row, zero, N, name=f"Xrow{i}") for i, row in enumerate(HAMMING_ROWS)]
    zs = [WeylCheck(zero, row, N, name=f"Zrow{i}") for i, row in enumerate(SIGNED_Z_ROWS)]
    return xs + zs


def steane_logicals(N: int) -> dict[str, WeylCheck]:
    zero = np.zeros(N_PHYS, dtype=np.int64)
    return {
        "X": WeylCheck(np.ones(N_PHYS, dtype=np.int64), zero, N, name="Xbar"),
        "Z": WeylCheck(zero, np.array([1, 1, -1, 0, 0, 0, 0]), N, name="Zbar"),
    }


def steane_build(N: int, dims: HybridDims | None = None) -> CodeInstance:
    checks = steane_checks(N)
    return CodeInstance("steane7", N, N_PHYS, tuple(checks), steane_logicals(N),
                        build_lookup_table(checks, N_PHYS, N), dims)


def steane_codeword_vector(J: int, N: int) -> np.ndarray:
    """``N^-3/2 sum_{a in Z_N^3} |a.H + J*1 mod N>``."""
    out = np.zeros(N**N_PHYS, dtype=complex)
    powers = N ** np.arange(N_PHYS - 1, -1, -1)
    for a in np.ndindex(N, N, N):
        word = (np.array(a) @ HAMMING_ROWS + J) % N
        out[int(word @ powers)] += 1.0
    return out / np.linalg.norm(out)


def steane_codeword(J: int, N: int, dims: HybridDims | None = None, charge: ChargeAssignment | None = None) -> RegisterState:
    dims = dims if dims is not None else HybridDims(N, 1)
    return from_amplitudes(steane_codeword_vector(J, N), dims, N_PHYS, charge)


def steane_correct(corrupted: RegisterState, code: CodeInstance | None = None, seed=None):
    code = code if code is not None else steane_build(corrupted.N)
    state, syn, _ = lookup_correct(corrupted, code, seed)
    return state, syn


def transversal_h(N: int) -> np.ndarray:
    return kron_all([h_matrix(N)] * N_PHYS)
