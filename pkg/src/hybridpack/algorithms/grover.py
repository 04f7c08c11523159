"""Grover search on ``n`` hybrid qudits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from ..hilbert import HybridDims


@dataclass(frozen=True)
class GroverPlan:
    N: int
    marked: int
    theta: float
    k: int

    @classmethod
    def make(cls, N: int, marked: int = 0, k: int | None = None) -> "GroverPlan":
        if N < 2 or not 0 <= marked < N:
            raise InvalidArgumentError("need N >= 2 and 0 <= marked < N")
        theta = math.asin(1 / math.sqrt(N))
        return cls(N, marked, theta, int(math.floor(math.pi / 4 * math.sqrt(N))) if k is None else k)

    def closed_form(self, k: int | None = None) -> float:
        k = self.k if k is None else k
        return math.sin((2 * k + 1) * self.theta) ** 2


def oracle_matrix(N: int, marked: int) -> np.ndarray:
    O = np.eye(N, dtype=complex)
    O[marked, marked] = -1
    return O


def diffusion_matrix(N: int) -> np.ndarray:
    return 2 * np.full((N, N), 1 / N, dtype=complex) - np.eye(N)


def register_sites(N: int, dims: HybridDims | None) -> int:
    """Number of hybrid qudits spanning the search space."""
    if dims is None:
        return 1
    n = round(math.log(N, dims.N))
    if dims.N**n != N:
        raise InvalidArgumentError(f"search size {N} is not a power of the local dimension {dims.N}")
    return n


def grover_search(plan: GroverPlan, dims: HybridDims | None = None, trace: bool = False):
    """Returns ``(success probability, final amplitudes)``, plus the marked amplitude per step if ``trace``."""
    register_sites(plan.N, dims)
    N = plan.N
    psi = np.full(N, 1 / np.sqrt(N), dtype=complex)
    amps = [psi[plan.marked]]
    for _ in range(plan.k):
        psi = psi.copy()
        psi[plan.marked] *= -1
        psi = 2 * psi.mean() - psi
        amps.append(psi[plan.marked])
    p = float(abs(psi[plan.marked]) ** 2)
    return (p, psi, np.array(amps)) if trace else (p, psi)


def rotation_model(plan: GroverPlan, steps: int) -> np.ndarray:
    return np.sin((2 * np.arange(steps + 1) + 1) * plan.theta)
