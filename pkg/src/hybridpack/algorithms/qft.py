"""Quantum Fourier transform on registers of ``n`` hybrid qudits."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidArgumentError
from ..gates import GateOp, GaugeStatus, fourier_h, hybrid_swap
from ..state import RegisterState, apply_circuit, apply_local


def qft_matrix(N: int, n: int = 1, inverse: bool = False) -> np.ndarray:
    """``|x> -> Q^-1/2 sum_y exp(2 pi i x y / Q) |y>`` with ``Q = N**n``."""
    Q = N**n
    x = np.arange(Q)
    sign = -1 if inverse else 1
    return np.exp(sign * 2j * np.pi * np.outer(x, x) / Q) / np.sqrt(Q)


def controlled_phase(N: int, m: int) -> GateOp:
    """``|a, b> -> exp(2 pi i a b / N^m) |a, b>``."""
    a = np.arange(N)
    ph = np.exp(2j * np.pi * np.outer(a, a).reshape(-1) / N**m)
    return GateOp(f"R{m}", np.diag(ph), arity=2, gauge_status=GaugeStatus.VERIFIED)


def qft_circuit(N: int, n: int, inverse: bool = False) -> list[tuple[GateOp, tuple[int, ...]]]:
    """Fourier gate plus controlled phases on each qudit, then a digit reversal.

    Sites are big-endian. Working down from the most significant qudit ``j``,
    each less significant qudit ``k`` controls a phase ``exp(2 pi i x_j x_k / N^{k-j+1})``.
    """
    if n < 1:
        raise InvalidArgumentError("register needs at least one qudit")
    circ = []
    for j in range(n):
        circ.append((fourier_h(N), (j,)))
        for k in range(j + 1, n):
            circ.append((controlled_phase(N, k - j + 1), (k, j)))
    for h in range(n // 2):
        circ.append((hybrid_swap(N), (h, n - 1 - h)))
    if inverse:
        circ = [(op.dagger(), sites) for op, sites in reversed(circ)]
    return circ


def circuit_unitary(circ, N: int, n: int) -> np.ndarray:
    """Dense matrix of a circuit on ``n`` computational qudits."""
    from ..hilbert import make_dims
    from ..state import from_amplitudes

    dims = make_dims(N, 1)
    cols = []
    for x in range(N**n):
        e = np.zeros(N**n, dtype=complex)
        e[x] = 1
        st = apply_circuit(from_amplitudes(e, dims, n), circ)
        cols.append(st.amplitudes)
    return np.stack(cols, axis=1)


def qft_apply(state: RegisterState, sites=None, inverse: bool = False, method: str = "dense") -> RegisterState:
    """Apply the transform to ``sites`` (default: all), densely or gate by gate."""
    sites = list(range(state.n_sites)) if sites is None else list(sites)
    N, n = state.N, len(sites)
    if method == "dense":
        return apply_local(state, qft_matrix(N, n, inverse), sites)
    if method != "circuit":
        raise InvalidArgumentError(f"unknown method {method!r}")
    circ = qft_circuit(N, n, inverse)
    return apply_circuit(state, [(op, tuple(sites[s] for s in ss)) for op, ss in circ])
