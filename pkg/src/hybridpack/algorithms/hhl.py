"""HHL linear solver with an exactly representable spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ContractViolation, InvalidArgumentError
from .qft import qft_matrix


@dataclass
class HHLInstance:
    A: np.ndarray
    b: np.ndarray
    C: float
    m: int

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex)
        if np.max(np.abs(self.A - self.A.conj().T)) > 1e-10:
            raise InvalidArgumentError("A must be hermitian")
        if self.b.size != self.A.shape[0]:
            raise InvalidArgumentError("b has the wrong size")
        lam = np.linalg.eigvalsh(self.A)
        if lam.min() <= 0:
            raise InvalidArgumentError("A must be positive definite")
        if self.C > lam.min() + 1e-12:
            raise ContractViolation("C must not exceed the smallest eigenvalue")


def phase_scale(eigenvalues, m: int, tol: float = 1e-9) -> float:
    """Unit ``c`` with every ``lambda / c`` an integer in ``[1, 2^m)``."""
    lam = np.asarray(eigenvalues, dtype=float)
    lo = lam.min()
    fracs = [Fraction(float(x / lo)).limit_denominator(2**m) for x in lam]
    if any(abs(float(f) - x / lo) > tol for f, x in zip(fracs, lam)):
        raise InvalidArgumentError("spectrum is not representable on the phase register")
    den = math.lcm(*(f.denominator for f in fracs))
    if max(f * den for f in fracs) >= 2**m:
        raise InvalidArgumentError(f"spectrum needs more than {m} phase bits")
    return lo / den


def hhl_solve(inst: HHLInstance) -> tuple[np.ndarray, float, dict]:
    """Returns ``(normalized solution state, residual, info)``.

    Registers: ancilla (2) x phase (2^m) x system. Phase estimation uses
    ``U = exp(i A t)`` with ``t = 2 pi / (c 2^m)``, so eigenvalue ``lambda`` reads ``y = lambda / c``.
    """
    A, b, C, m = inst.A, inst.b / np.linalg.norm(inst.b), inst.C, inst.m
    n = b.size
    Q = 2**m
    lam, vecs = np.linalg.eigh(A)
    c = phase_scale(lam, m)
    t = 2 * np.pi / (c * Q)
    U = (vecs * np.exp(1j * lam * t)) @ vecs.conj().T
    # phase estimation: uniform register, controlled U^x, inverse transform
    pows = [np.eye(n, dtype=complex)]
    for _ in range(Q - 1):
        pows.append(U @ pows[-1])
    reg = np.stack([pows[x] @ b for x in range(Q)]) / np.sqrt(Q)
    F_inv = qft_matrix(2, m, inverse=True)
    reg = F_inv @ reg
    # conditional rotation on the ancilla; y = 0 carries no amplitude for exact spectra
    y = np.arange(Q)
    with np.errstate(divide="ignore"):
        ratio = np.where(y > 0, C / (c * np.maximum(y, 1)), 0.0)
    if ratio.max() > 1 + 1e-12:
        raise ContractViolation("rotation angle C / lambda exceeds 1")
    anc1 = ratio[:, None] * reg
    # uncompute phase estimation on the post-selected branch
    anc1 = qft_matrix(2, m) @ anc1
    out = sum(pows[x].conj().T @ anc1[x] for x in range(Q)) / np.sqrt(Q)
    # the phase register returns to uniform; project onto it
    p_success = float(np.vdot(out, out).real)
    x = out / np.linalg.norm(out)
    exact = np.linalg.solve(A, b)
    exact = exact / np.linalg.norm(exact)
    fid = float(abs(np.vdot(exact, x)) ** 2)
    Ax = A @ x
    scale = np.vdot(Ax, b) / np.vdot(Ax, Ax)
    resid = float(np.linalg.norm(scale * Ax - b))
    info = {"success_probability": p_success, "fidelity": fid, "scale": c, "t": t,
            "phase_labels": (lam / c).round().astype(int).tolist(),
            "success_reference": float(np.sum(np.abs(vecs.conj().T @ b) ** 2 * (C / lam) ** 2))}
    return x, resid, info
