"""Qudit teleportation and superdense coding over the single-index Bell family."""

from __future__ import annotations

import math

import numpy as np

from ..bases import bell_projectors, bell_vector
from ..gates import weyl_matrix
from ..hilbert import ChargeAssignment, HybridDims
from ..noise import apply_gv_error, measure_sector
from ..state import (
    RegisterState,
    apply_local,
    as_rng,
    fidelity,
    from_amplitudes,
    measure_projective,
)
from .report import ExperimentReport


def teleport_correction(N: int, m: int, n: int) -> np.ndarray:
    """``X^-n Z^m``: Z^m acts first, then the shift back."""
    return weyl_matrix(N, -n, 0) @ weyl_matrix(N, 0, m)


def _three_party(psi: RegisterState) -> RegisterState:
    dims, charge = psi.dims, psi.charge
    pair = from_amplitudes(bell_vector(dims.N, 0, 0), dims, 2, charge)
    return psi.tensor(pair)


def teleport_branch(psi: RegisterState, m: int, n: int) -> tuple[float, float, RegisterState]:
    """Project Alice's pair onto ``Phi_{m,n}``; return (probability, fidelity, Bob's corrected state)."""
    N = psi.N
    total = _three_party(psi)
    P = np.outer(bell_vector(N, m, n), bell_vector(N, m, n).conj())
    from ..state import apply_nonunitary

    post, prob = apply_nonunitary(total, P, [0, 1])
    ld = total.local_dim
    amps = post.amplitudes.reshape(ld * ld, ld)
    idx = int(np.argmax(np.linalg.norm(amps, axis=1)))
    bob = psi.with_amplitudes(amps[idx] / np.linalg.norm(amps[idx]))
    bob = apply_local(bob, teleport_correction(N, m, n), [0])
    return prob, fidelity(bob, psi), bob


def bob_uncorrected_expected(psi_amps: np.ndarray, m: int, n: int) -> np.ndarray:
    """``sum_k a_k w^{-mk} |k+n>`` (normalized)."""
    N = psi_amps.size
    k = np.arange(N)
    out = np.zeros(N, dtype=complex)
    out[(k + n) % N] = psi_amps * np.exp(-2j * np.pi * m * k / N)
    return out / np.linalg.norm(out)


def teleport(psi: RegisterState, dims: HybridDims | None = None, seed=None, exhaustive: bool = True,
             trials: int = 1, inject_gv: bool = False) -> ExperimentReport:
    """Teleport a one-site state; ``exhaustive`` checks every Bell branch by projection."""
    dims = psi.dims if dims is None else dims
    N = dims.N
    rec_m, rec_n, rec_p, rec_f = [], [], [], []
    if exhaustive:
        for m in range(N):
            for n in range(N):
                p, f, _ = teleport_branch(psi, m, n)
                rec_m.append(m)
                rec_n.append(n)
                rec_p.append(p)
                rec_f.append(f)
    rng = as_rng(seed if seed is not None else 0)
    sector = []
    projs = bell_projectors(N)
    for _ in range(trials if not exhaustive else 0):
        total = _three_party(psi)
        if inject_gv:
            total, _ = apply_gv_error(total, 2, seed=rng, force=True)
        out = measure_projective(total, projs, [0, 1], rng)
        m, n = divmod(out.outcome_label, N)
        post = apply_local(out.post_state, teleport_correction(N, m, n), [2])
        Q, _ = measure_sector(post, rng)
        ld = post.local_dim
        amps = post.amplitudes.reshape(ld * ld, ld)
        idx = int(np.argmax(np.linalg.norm(amps, axis=1)))
        bob = psi.with_amplitudes(amps[idx] / np.linalg.norm(amps[idx]))
        rec_m.append(m)
        rec_n.append(n)
        rec_p.append(out.probability)
        rec_f.append(fidelity(bob, psi))
        sector.append(Q)
    fmin = float(min(rec_f)) if rec_f else float("nan")
    rep = ExperimentReport(
        "teleport",
        {"d": dims.d, "D": dims.D, "exhaustive": exhaustive, "inject_gv": inject_gv},
        {"m": rec_m, "n": rec_n, "probability": rec_p, "fidelity": rec_f, "sector": sector},
        {"min_fidelity": fmin, "branches": len(rec_f), "probability_sum": float(sum(rec_p)),
         "gv_detected": bool(any(q != 0 for q in sector))},
        {"fidelity": 1.0, "branch_probability": 1.0 / N**2},
    )
    rep.passed = fmin >= 1 - 1e-9 if not inject_gv else rep.aggregates["gv_detected"]
    return rep


# ------------------------------------------------------------- superdense

def superdense_encoding(N: int, message: int) -> tuple[int, int]:
    if not 0 <= message < N * N:
        raise ValueError(f"message must lie in [0, {N * N})")
    return divmod(message, N)


def superdense(message: int, dims: HybridDims, seed=0, charge: ChargeAssignment | None = None) -> int:
    """Encode ``message = a N + b`` with ``Z^a X^b`` on Alice's half and decode by a Bell measurement.

    ``(Z^a X^b (x) 1)|Phi_00> = w^{ab} |Phi_{a,-b}>``, so the Bell label ``(m, n)``
    decodes as ``a = m``, ``b = -n``.
    """
    N = dims.N
    a, b = superdense_encoding(N, message)
    pair = from_amplitudes(bell_vector(N, 0, 0), dims, 2, charge)
    pair = apply_local(pair, weyl_matrix(N, 0, a) @ weyl_matrix(N, b, 0), [0])
    out = measure_projective(pair, bell_projectors(N), [0, 1], seed)
    m, n = divmod(out.outcome_label, N)
    return m * N + (-n) % N


def superdense_capacity(N: int) -> float:
    return 2 * math.log2(N)


def superdense_report(dims: HybridDims, seed=0) -> ExperimentReport:
    N = dims.N
    decoded = [superdense(msg, dims, seed) for msg in range(N * N)]
    ok = all(dm == msg for msg, dm in enumerate(decoded))
    rep = ExperimentReport("superdense", {"d": dims.d, "D": dims.D},
                           {"message": list(range(N * N)), "decoded": decoded},
                           {"all_decoded": ok, "capacity_bits": superdense_capacity(N)},
                           {"capacity_bits": 2 * math.log2(N)})
    rep.passed = ok
    return rep
