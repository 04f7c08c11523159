"""Dimension bookkeeping, charge labels and sector projection.

A hybrid site carries an internal label ``j < d`` and an external label
``k < D``, merged into the single index ``J = j*D + k``. Beyond the ``N = d*D``
computational labels a site may carry extra labels:

* leakage labels: neutral, one per (internal label, leaked external level),
  so a leaked site keeps its internal value;
* charged labels: non-zero charge, reachable only by gauge-violating events.

Local label layout is ``[computational | leak | charged]``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._config import TOL_EXACT
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class HybridDims:
    d: int
    D: int

    def __post_init__(self):
        for name, val in (("d", self.d), ("D", self.D)):
            if not isinstance(val, (int, np.integer)) or val < 1:
                raise InvalidArgumentError(f"{name} must be a positive integer, got {val!r}")

    @property
    def N(self) -> int:
        return self.d * self.D

    @property
    def omega_N(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.N)

    @property
    def omega_d(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.d)

    @property
    def omega_D(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.D)

    def merge(self, j: int, k: int) -> int:
        return merge_index(j, k, self)

    def split(self, J: int) -> tuple[int, int]:
        return split_index(J, self)


def make_dims(d: int, D: int) -> HybridDims:
    return HybridDims(int(d) if isinstance(d, np.integer) else d, int(D) if isinstance(D, np.integer) else D)


def split_index(J: int, dims: HybridDims) -> tuple[int, int]:
    """Single index ``J`` to ``(j, k)`` with ``J = j*D + k``."""
    if not 0 <= J < dims.N:
        raise InvalidArgumentError(f"label {J} out of range for N={dims.N}")
    return J // dims.D, J % dims.D


def merge_index(j: int, k: int, dims: HybridDims) -> int:
    if not (0 <= j < dims.d and 0 <= k < dims.D):
        raise InvalidArgumentError(f"(j,k)=({j},{k}) out of range for (d,D)=({dims.d},{dims.D})")
    return j * dims.D + k


@dataclass(frozen=True)
class ChargeAssignment:
    """Per-label charges of one site.

    ``leak_levels`` extra external levels are appended for every internal
    label, followed by one label per entry of ``charged``.
    """

    dims: HybridDims
    leak_levels: int = 1
    charged: tuple[int, ...] = (1, -1)

    def __post_init__(self):
        if self.leak_levels < 0:
            raise InvalidArgumentError("leak_levels must be >= 0")
        if any(q == 0 for q in self.charged):
            raise InvalidArgumentError("charged labels must carry non-zero charge")
        object.__setattr__(self, "charged", tuple(int(q) for q in self.charged))

    @classmethod
    def minimal(cls, dims: HybridDims) -> "ChargeAssignment":
        """Computational labels only; the smallest local space."""
        return cls(dims, leak_levels=0, charged=())

    @classmethod
    def charged_only(cls, dims: HybridDims, charged=(1, -1)) -> "ChargeAssignment":
        return cls(dims, leak_levels=0, charged=charged)

    @property
    def N(self) -> int:
        return self.dims.N

    @property
    def n_leak(self) -> int:
        return self.dims.d * self.leak_levels

    @property
    def local_dim_ext(self) -> int:
        return self.N + self.n_leak + len(self.charged)

    @cached_property
    def charges(self) -> np.ndarray:
        q = np.zeros(self.local_dim_ext, dtype=np.int64)
        q[self.N + self.n_leak :] = self.charged
        q.setflags(write=False)
        return q

    @property
    def computational_span(self) -> range:
        return range(self.N)

    @property
    def leak_span(self) -> range:
        return range(self.N, self.N + self.n_leak)

    @property
    def charged_span(self) -> range:
        return range(self.N + self.n_leak, self.local_dim_ext)

    def leak_label(self, j: int, level: int = 0) -> int:
        """Label of internal value ``j`` with external level ``D + level``."""
        if not (0 <= j < self.dims.d and 0 <= level < self.leak_levels):
            raise InvalidArgumentError("no such leak label")
        return self.N + level * self.dims.d + j

    def leak_internal(self, label: int) -> int:
        if label not in self.leak_span:
            raise InvalidArgumentError(f"label {label} is not a leak label")
        return (label - self.N) % self.dims.d

    def charged_label(self, charge: int) -> int:
        for off, q in enumerate(self.charged):
            if q == charge:
                return self.N + self.n_leak + off
        raise InvalidArgumentError(f"no label with charge {charge}")


def site_digits(n_sites: int, local_dim: int) -> np.ndarray:
    """``(local_dim**n_sites, n_sites)`` array of big-endian digits."""
    idx = np.arange(local_dim**n_sites)
    powers = local_dim ** np.arange(n_sites - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % local_dim


def total_charge_operator(n_sites: int, charge: ChargeAssignment) -> np.ndarray:
    """Diagonal of the total charge on ``n_sites`` sites (dense vector)."""
    if n_sites < 1:
        raise InvalidArgumentError("n_sites must be >= 1")
    q = charge.charges
    diag = np.zeros(1, dtype=np.int64)
    for _ in range(n_sites):
        diag = (diag[:, None] + q[None, :]).reshape(-1)
    return diag


def commutes_with_charge(op, charge: ChargeAssignment, tol: float = TOL_EXACT) -> bool:
    """True iff ``max |V Q - Q V| <= tol`` on the operator's support."""
    mat = op.extended(charge)
    qd = total_charge_operator(op.arity, charge)
    if mat.shape != (qd.size, qd.size):
        raise InvalidArgumentError(
            f"operator of shape {mat.shape} does not act on {op.arity} sites of dim {charge.local_dim_ext}"
        )
    comm = mat * (qd[None, :] - qd[:, None])
    return bool(np.max(np.abs(comm), initial=0.0) <= tol)


@dataclass(frozen=True)
class SectorProjector:
    """Orthogonal projector onto total charge ``target_Q`` over ``n_sites``."""

    charge: ChargeAssignment
    n_sites: int
    target_Q: int = 0

    @property
    def dims(self) -> HybridDims:
        return self.charge.dims

    @cached_property
    def mask(self) -> np.ndarray:
        return (total_charge_operator(self.n_sites, self.charge) == self.target_Q).astype(float)

    def matrix(self) -> np.ndarray:
        return np.diag(self.mask)

    def probability(self, amplitudes: np.ndarray) -> float:
        return float(np.sum(np.abs(amplitudes) ** 2 * self.mask))
