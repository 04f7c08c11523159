"""Gate teleportation of the diagonal phase gate ``Theta_r``.

The ancilla holds ``|M_r> = Theta_r H |0>``. After ``CSUM^dagger`` (data as
control) the ancilla reads ``m = K - J``; the data then carries
``sum_J psi_J theta_{J+m} |J>`` and the diagonal fix
``D_m = Theta_r X^-m Theta_r^dagger X^m`` restores ``Theta_r |psi>``.
``D_m`` is diagonal but in general not a Clifford gate.
"""

from __future__ import annotations

import numpy as np

from ..gates import ThetaGateParam, csum, h_matrix, is_clifford, theta_phases, theta_r, x_matrix
from ..hilbert import total_charge_operator
from ..state import RegisterState, apply_local, as_rng, fidelity, from_amplitudes


def magic_state_vector(r: int, N: int) -> np.ndarray:
    ThetaGateParam(r, N)
    return theta_phases(r, N) * (h_matrix(N)[:, 0])


def magic_state(r: int, dims, charge=None) -> RegisterState:
    return from_amplitudes(magic_state_vector(r, dims.N), dims, 1, charge)


def correction_matrix(r: int, N: int, m: int) -> np.ndarray:
    T = np.diag(theta_phases(r, N))
    Xm = np.linalg.matrix_power(x_matrix(N), m % N)
    return T @ np.linalg.inv(Xm) @ T.conj().T @ Xm


def injection_branches(psi: RegisterState, magic: RegisterState, r: int) -> list[dict]:
    """Run every measurement branch; report probability and fidelity with ``Theta_r psi``."""
    N = psi.N
    if psi.n_sites != 1 or magic.n_sites != 1:
        raise ValueError("injection acts on one data and one ancilla site")
    joint = apply_local(psi.tensor(magic), csum(N).dagger(), [0, 1])
    target = apply_local(psi, theta_r(ThetaGateParam(r, N)), [0])
    ld = joint.local_dim
    amps = joint.amplitudes.reshape(ld, ld)
    q_ok = bool(np.all(total_charge_operator(2, joint.charge)[np.abs(joint.amplitudes) > 1e-14] == 0))
    out = []
    for m in range(N):
        branch = amps[:, m]
        p = float(np.vdot(branch, branch).real)
        if p < 1e-14:
            out.append({"m": m, "probability": p, "fidelity": None, "correction_is_clifford": None})
            continue
        data = psi.with_amplitudes(branch / np.sqrt(p))
        fixed = apply_local(data, correction_matrix(r, N, m), [0])
        out.append({
            "m": m,
            "probability": p,
            "fidelity": fidelity(fixed, target),
            "correction_is_clifford": is_clifford(correction_matrix(r, N, m), N),
            "charge_neutral": q_ok,
        })
    return out


def inject_theta(psi: RegisterState, magic: RegisterState, r: int, seed) -> tuple[RegisterState, int]:
    """Sample one branch of the injection and return the corrected data qudit."""
    N = psi.N
    joint = apply_local(psi.tensor(magic), csum(N).dagger(), [0, 1])
    ld = joint.local_dim
    amps = joint.amplitudes.reshape(ld, ld)
    probs = np.sum(np.abs(amps) ** 2, axis=0)
    m = int(as_rng(seed).choice(ld, p=probs / probs.sum()))
    data = psi.with_amplitudes(amps[:, m] / np.sqrt(probs[m]))
    return apply_local(data, correction_matrix(r, N, m), [0]), m
