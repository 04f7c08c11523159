"""Shor-like 9-qudit code.

Sites form three blocks ``(0,1,2), (3,4,5), (6,7,8)``. Codewords are

    |J_L> = N^-3/2 sum_{K,L,M} w^{J(K+L+M)} |KKK>|LLL>|MMM>.

Phase checks ``Z Z^dagger`` inside each block catch shifts; block checks
``X^{(x)3} (x) X^dagger^{(x)3}`` on neighbouring blocks catch phase errors.
"""

from __future__ import annotations

import numpy as np

from ..gates import csum, fourier_h
from ..hilbert import ChargeAssignment, HybridDims
from ..state import RegisterState, apply_local, basis_state, from_amplitudes
from ._stabilizer import CodeInstance, WeylCheck, build_lookup_table, lookup_correct

N_PHYS = 9
BLOCKS = ((0, 1, 2), (3, 4, 5), (6, 7, 8))


def _vec(entries: dict[int, int]) -> np.ndarray:
    v = np.zeros(N_PHYS, dtype=np.int64)
    for i, e in entries.items():
        v[i] = e
    return v


def shor_checks(N: int) -> list[WeylCheck]:
    zero = np.zeros(N_PHYS, dtype=np.int64)
    checks = []
    for b, (a0, a1, a2) in enumerate(BLOCKS):
        checks.append(WeylCheck(zero, _vec({a0: 1, a1: -1}), N, name=f"Z{a0}Z{a1}†"))
        checks.append(WeylCheck(zero, _vec({a1: 1, a2: -1}), N, name=f"Z{a1}Z{a2}†"))
    for b in range(2):
        x = _vec({i: 1 for i in BLOCKS[b]} | {i: -1 for i in BLOCKS[b + 1]})
        checks.append(WeylCheck(x, zero, N, name=f"XXX{b}·X†X†X†{b + 1}"))
    return checks


def shor_logicals(N: int) -> dict[str, WeylCheck]:
    zero = np.zeros(N_PHYS, dtype=np.int64)
    return {
        # |J_L> -> |J+1_L>: one Z per block
        "X": WeylCheck(zero, _vec({0: 1, 3: 1, 6: 1}), N, name="Xbar"),
        # |J_L> -> w^J |J_L>
        "Z": WeylCheck(_vec({0: -1, 1: -1, 2: -1}), zero, N, name="Zbar"),
    }


def shor_build(N: int, dims: HybridDims | None = None) -> CodeInstance:
    checks = shor_checks(N)
    return CodeInstance("shor9", N, N_PHYS, tuple(checks), shor_logicals(N),
                        build_lookup_table(checks, N_PHYS, N), dims)


def _dims(N, dims):
    return dims if dims is not None else HybridDims(N, 1)


def encoder_circuit(N: int):
    """``(gate, sites)`` list taking ``|J>|0...0>`` to ``|J_L>``."""
    C, H = csum(N), fourier_h(N)
    circ = [(C, [0, 3]), (C, [0, 6])]
    for lead, a, b in BLOCKS:
        circ += [(H, [lead]), (C, [lead, a]), (C, [lead, b])]
    return circ


def shor_encode(logical: RegisterState, N: int | None = None) -> RegisterState:
    """Encode a one-site state (on the computational span) into nine sites."""
    N = logical.N if N is None else N
    dims, charge = logical.dims, logical.charge
    ancilla = basis_state([0] * (N_PHYS - 1), dims, charge)
    state = logical.tensor(ancilla)
    for g, sites in encoder_circuit(N):
        state = apply_local(state, g, sites)
    return state


def shor_codeword_vector(J: int, N: int) -> np.ndarray:
    """Direct evaluation of the codeword sum on the ``N**9`` computational space."""
    out = np.zeros(N**N_PHYS, dtype=complex)
    rep = N**2 + N + 1
    for K in range(N):
        for L in range(N):
            for M in range(N):
                idx = (K * rep) * N**6 + (L * rep) * N**3 + M * rep
                out[idx] += np.exp(2j * np.pi * J * (K + L + M) / N)
    return out / N**1.5


def shor_codeword(J: int, N: int, dims: HybridDims | None = None, charge: ChargeAssignment | None = None) -> RegisterState:
    return from_amplitudes(shor_codeword_vector(J, N), _dims(N, dims), N_PHYS, charge)


def shor_correct(corrupted: RegisterState, N: int | None = None, code: CodeInstance | None = None, seed=None):
    """Measure the eight checks and undo the looked-up single-site error."""
    code = code if code is not None else shor_build(corrupted.N if N is None else N)
    state, syn, _ = lookup_correct(corrupted, code, seed)
    return state, syn
