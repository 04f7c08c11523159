"""Gauge-respecting gate library on hybrid sites.

Gates are stored on the computational span (``N**arity`` matrices) and
extended by the identity on leak/charged labels when applied to an extended
register. Single-index conventions:

    X_N |J> = |J+1 mod N>,   Z_N |J> = w^J |J>,   H_N |J> = N^-1/2 sum_K w^{JK} |K>

with ``w = exp(2 pi i / N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce

import numpy as np

from ._config import TOL_EXACT
from .errors import ContractViolation, InvalidArgumentError
from .hilbert import ChargeAssignment, HybridDims, commutes_with_charge


class GaugeStatus(str, Enum):
    VERIFIED = "verified-invariant"
    VIOLATING = "violating"
    UNCHECKED = "unchecked"


@dataclass(frozen=True, eq=False)
class GateOp:
    """A named unitary on ``arity`` sites of local dimension ``local_dim``.

    ``local_dim`` is the dimension the matrix is written on: either the
    computational ``N`` (the usual case) or a full extended dimension for
    deliberately gauge-violating operators.
    """

    name: str
    matrix: np.ndarray
    arity: int = 1
    local_dim: int | None = None
    gauge_status: GaugeStatus = GaugeStatus.UNCHECKED
    check_unitary: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"{self.name}: matrix must be square")
        ld = self.local_dim
        if ld is None:
            ld = round(m.shape[0] ** (1.0 / self.arity))
            object.__setattr__(self, "local_dim", ld)
        if ld**self.arity != m.shape[0]:
            raise InvalidArgumentError(f"{self.name}: shape {m.shape} inconsistent with arity {self.arity}")
        if self.check_unitary and not is_unitary(m):
            raise ContractViolation(f"{self.name}: matrix is not unitary")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "GateOp":
        name = self.name[:-1] if self.name.endswith("†") else self.name + "†"
        return GateOp(name, self.matrix.conj().T, self.arity, self.local_dim, self.gauge_status)

    def power(self, k: int) -> "GateOp":
        return GateOp(f"{self.name}^{k}", np.linalg.matrix_power(self.matrix, k), self.arity, self.local_dim, self.gauge_status)

    def __matmul__(self, other: "GateOp") -> "GateOp":
        if (self.arity, self.local_dim) != (other.arity, other.local_dim):
            raise InvalidArgumentError("gate product needs matching arity and local dimension")
        status = GaugeStatus.VERIFIED if GaugeStatus.VERIFIED == self.gauge_status == other.gauge_status else GaugeStatus.UNCHECKED
        return GateOp(f"{self.name}·{other.name}", self.matrix @ other.matrix, self.arity, self.local_dim, status)

    def extended(self, charge: ChargeAssignment) -> np.ndarray:
        """Matrix on the extended local space, identity off the computational span."""
        ext = charge.local_dim_ext
        if self.local_dim == ext:
            return self.matrix
        if self.local_dim != charge.N:
            raise InvalidArgumentError(
                f"{self.name}: written on local dim {self.local_dim}, register has N={charge.N}, ext={ext}"
            )
        return embed_computational(self.matrix, charge.N, ext, self.arity)

    def verified(self, charge: ChargeAssignment | None = None) -> "GateOp":
        """Return a copy whose gauge status has been checked against ``charge``."""
        if charge is None:
            charge = ChargeAssignment(_dims_for(self.local_dim))
        ok = commutes_with_charge(self, charge, TOL_EXACT)
        status = GaugeStatus.VERIFIED if ok else GaugeStatus.VIOLATING
        return GateOp(self.name, self.matrix, self.arity, self.local_dim, status, check_unitary=False)


def _dims_for(N: int) -> HybridDims:
    return HybridDims(N, 1)


def embed_computational(matrix: np.ndarray, N: int, ext: int, arity: int) -> np.ndarray:
    if ext == N:
        return matrix
    digits = np.indices((ext,) * arity).reshape(arity, -1).T
    comp = np.all(digits < N, axis=1)
    big = np.eye(ext**arity, dtype=complex)
    comp_idx = np.flatnonzero(comp)
    # comp_idx is lexicographic in the extended digits, matching the N-digit order
    big[np.ix_(comp_idx, comp_idx)] = matrix
    return big


def is_unitary(m: np.ndarray, tol: float = TOL_EXACT * 100) -> bool:
    n = m.shape[0]
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(n)), initial=0.0) <= tol)


def _library(name, matrix, arity=1) -> GateOp:
    return GateOp(name, matrix, arity, gauge_status=GaugeStatus.VERIFIED)


# ----------------------------------------------------------------- single index

def omega(N: int) -> complex:
    return np.exp(2j * np.pi / N)


def x_matrix(N: int) -> np.ndarray:
    return np.roll(np.eye(N, dtype=complex), 1, axis=0)


def z_matrix(N: int) -> np.ndarray:
    return np.diag(omega(N) ** np.arange(N))


def h_matrix(N: int) -> np.ndarray:
    J = np.arange(N)
    return omega(N) ** np.outer(J, J) / math.sqrt(N)


def weyl_x(N: int) -> GateOp:
    return _library("XN", x_matrix(N))


def weyl_z(N: int) -> GateOp:
    return _library("ZN", z_matrix(N))


def fourier_h(N: int) -> GateOp:
    return _library("HN", h_matrix(N))


def weyl_matrix(N: int, s: int, t: int) -> np.ndarray:
    """``X^s Z^t`` on one site."""
    return np.linalg.matrix_power(x_matrix(N), s % N) @ np.linalg.matrix_power(z_matrix(N), t % N)


def weyl_monomial(N: int, s: int, t: int) -> tuple[np.ndarray, np.ndarray]:
    """``X^s Z^t`` as ``(perm, phases)``: ``|J> -> phases[J] |perm[J]>``."""
    J = np.arange(N)
    return (J + s) % N, omega(N) ** ((t * J) % N)


def fractional_x(N: int, power: float) -> np.ndarray:
    """Spectral ``X_N**power`` with eigenphases on the principal branch (-pi, pi].

    ``X = H Z H^dagger`` so the eigenphase of column ``J`` of ``H`` is ``2 pi J/N``,
    mapped into (-pi, pi] before scaling.
    """
    H = h_matrix(N)
    ph = 2 * np.pi * np.arange(N) / N
    ph = np.where(ph > np.pi, ph - 2 * np.pi, ph)
    return H @ np.diag(np.exp(1j * power * ph)) @ H.conj().T


# ------------------------------------------------------------ two-index blocks

def _factor_op(dims: HybridDims, internal: np.ndarray | None, external: np.ndarray | None) -> np.ndarray:
    a = internal if internal is not None else np.eye(dims.d)
    b = external if external is not None else np.eye(dims.D)
    return np.kron(a, b)


def internal_block(dims: HybridDims) -> dict[str, GateOp]:
    d = dims.d
    return {
        "Xd": _library("Xd", _factor_op(dims, x_matrix(d), None)),
        "Zd": _library("Zd", _factor_op(dims, z_matrix(d), None)),
        "Hd": _library("Hd", _factor_op(dims, h_matrix(d), None)),
    }


def external_block(dims: HybridDims) -> dict[str, GateOp]:
    D = dims.D
    return {
        "XD": _library("XD", _factor_op(dims, None, x_matrix(D))),
        "ZD": _library("ZD", _factor_op(dims, None, z_matrix(D))),
        "HD": _library("HD", _factor_op(dims, None, h_matrix(D))),
    }


# ----------------------------------------------------------------- entanglers

def _controlled(control_projectors, target_ops) -> np.ndarray:
    return sum(np.kron(p, u) for p, u in zip(control_projectors, target_ops))


def csum(N: int) -> GateOp:
    """``|J>|K> -> |J>|K+J mod N>``."""
    X = x_matrix(N)
    projs = [np.outer(e, e) for e in np.eye(N)]
    return _library("CSUM", _controlled(projs, [np.linalg.matrix_power(X, J) for J in range(N)]), arity=2)


def csum_internal(dims: HybridDims) -> GateOp:
    """Internal-internal SUM: ``|j,k>|j',k'> -> |j,k>|j'+j mod d, k'>``."""
    Xd = x_matrix(dims.d)
    projs = [np.kron(np.outer(e, e), np.eye(dims.D)) for e in np.eye(dims.d)]
    ops = [_factor_op(dims, np.linalg.matrix_power(Xd, j), None) for j in range(dims.d)]
    return _library("CSUMd", _controlled(projs, ops), arity=2)


def cphi(dims: HybridDims) -> GateOp:
    """External label of the control site drives ``Z_d^k`` on the target's internal label."""
    Zd = z_matrix(dims.d)
    projs = [np.kron(np.eye(dims.d), np.outer(e, e)) for e in np.eye(dims.D)]
    ops = [_factor_op(dims, np.linalg.matrix_power(Zd, k), None) for k in range(dims.D)]
    return _library("CPHI", _controlled(projs, ops), arity=2)


def hybrid_swap(dims: HybridDims | int) -> GateOp:
    N = dims if isinstance(dims, int) else dims.N
    S = np.zeros((N * N, N * N))
    for a in range(N):
        for b in range(N):
            S[b * N + a, a * N + b] = 1.0
    return _library("SWAP", S, arity=2)


def factor_swaps(dims: HybridDims) -> tuple[np.ndarray, np.ndarray]:
    """Internal-only and external-only swaps on two hybrid sites (``N**2`` matrices)."""
    d, D, N = dims.d, dims.D, dims.N
    s_int = np.zeros((N * N, N * N))
    s_ext = np.zeros((N * N, N * N))
    for j in range(d):
        for k in range(D):
            for j2 in range(d):
                for k2 in range(D):
                    src = (j * D + k) * N + (j2 * D + k2)
                    s_int[(j2 * D + k) * N + (j * D + k2), src] = 1.0
                    s_ext[(j * D + k2) * N + (j2 * D + k), src] = 1.0
    return s_int, s_ext


# ---------------------------------------------------------------- non-Clifford

@dataclass(frozen=True)
class ThetaGateParam:
    r: int
    N: int

    def __post_init__(self):
        if math.gcd(self.r, self.N) != 1 or self.r in (1, 2, 4):
            raise InvalidArgumentError(f"theta gate needs gcd(r,N)=1 and r not in {{1,2,4}}; got r={self.r}, N={self.N}")


def theta_phases(r: int, N: int) -> np.ndarray:
    J = np.arange(N)
    return np.exp(2j * np.pi * r * J**2 / N**2)


def theta_r(param: ThetaGateParam | tuple[int, int]) -> GateOp:
    if not isinstance(param, ThetaGateParam):
        param = ThetaGateParam(*param)
    return _library(f"THETA({param.r})", np.diag(theta_phases(param.r, param.N)))


def packaged_t() -> GateOp:
    """Qubit ``T = diag(1, exp(i pi/4))``; the non-Clifford generator at N=2."""
    return _library("T", np.diag([1.0, np.exp(1j * np.pi / 4)]))


def mixed_flag(dims: HybridDims) -> GateOp:
    """``F = X_d Z_D``: ``|j,k> -> w_D^k |j+1 mod d, k>``."""
    return _library("F", _factor_op(dims, x_matrix(dims.d), z_matrix(dims.D)))


def controlled_power(u: GateOp, control_dim: int) -> GateOp:
    """``sum_x |x><x| (x) u^x`` with a ``control_dim``-level control."""
    projs = [np.outer(e, e) for e in np.eye(control_dim)]
    mat = _controlled(projs, [np.linalg.matrix_power(u.matrix, x) for x in range(control_dim)])
    return GateOp(f"C-{u.name}", mat, u.arity + 1, gauge_status=u.gauge_status if control_dim == u.local_dim else GaugeStatus.UNCHECKED)


def raising_operator(charge: ChargeAssignment, from_label: int = 0, to_charge: int = 1) -> GateOp:
    """A deliberately charge-changing unitary: swaps a neutral label with a charged one."""
    ext = charge.local_dim_ext
    to_label = charge.charged_label(to_charge)
    perm = np.arange(ext)
    perm[[from_label, to_label]] = perm[[to_label, from_label]]
    mat = np.eye(ext)[perm]
    return GateOp("RAISE", mat, 1, local_dim=ext, gauge_status=GaugeStatus.VIOLATING)


def library(dims: HybridDims, r: int | None = None) -> list[GateOp]:
    """All library constructors for ``dims``; ``r`` picks the theta gate if valid."""
    N = dims.N
    gates = [weyl_x(N), weyl_z(N), fourier_h(N), csum(N), hybrid_swap(dims), mixed_flag(dims),
             csum_internal(dims), cphi(dims)]
    gates += list(internal_block(dims).values()) + list(external_block(dims).values())
    if r is None:
        r = default_theta_r(N)
    if r is not None:
        gates.append(theta_r(ThetaGateParam(r, N)))
    return gates


def default_theta_r(N: int) -> int | None:
    """Smallest admissible ``r`` for the theta gate (``None`` for N=1)."""
    if N < 2:
        return None
    r = 3
    while math.gcd(r, N) != 1 or r in (1, 2, 4):
        r += 1
    return r


# -------------------------------------------------------------- Weyl analysis

def kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats)


def weyl_string(N: int, xs, ts) -> np.ndarray:
    return kron_all([weyl_matrix(N, s, t) for s, t in zip(xs, ts)])


def weyl_decompose(m: np.ndarray, N: int, n_sites: int, tol: float = 1e-9):
    """If ``m`` equals ``c * X^s Z^t`` (tensor string) return ``(s, t, c)``, else None."""
    dim = N**n_sites
    if m.shape != (dim, dim):
        raise InvalidArgumentError("shape mismatch")
    col0 = m[:, 0]
    row = int(np.argmax(np.abs(col0)))
    if abs(abs(col0[row]) - 1) > tol:
        return None
    s = np.array([(row // N ** (n_sites - 1 - i)) % N for i in range(n_sites)])
    c = col0[row]
    t = np.zeros(n_sites, dtype=int)
    for i in range(n_sites):
        col = N ** (n_sites - 1 - i)
        entry = m[:, col]
        r = int(np.argmax(np.abs(entry)))
        ratio = entry[r] / c
        t[i] = int(round(np.angle(ratio) / (2 * np.pi / N))) % N
    cand = c * weyl_string(N, s, t)
    if np.max(np.abs(cand - m)) > tol:
        return None
    return s, t, c


def is_clifford(u: np.ndarray, N: int, n_sites: int = 1, tol: float = 1e-9) -> bool:
    """True iff conjugation by ``u`` maps every single-site X and Z into the Weyl group."""
    ident = [np.eye(N)] * n_sites
    for i in range(n_sites):
        for gen in (x_matrix(N), z_matrix(N)):
            mats = list(ident)
            mats[i] = gen
            w = kron_all(mats)
            if weyl_decompose(u @ w @ u.conj().T, N, n_sites, tol) is None:
                return False
    return True


def max_norm(a: np.ndarray, b: np.ndarray | None = None) -> float:
    diff = a if b is None else a - b
    return float(np.max(np.abs(diff), initial=0.0))


def verify_identities(dims: HybridDims, tol: float = TOL_EXACT) -> list[dict]:
    """Algebraic identity checks used by ``gates-verify``."""
    N = dims.N
    w = omega(N)
    X, Z, H = x_matrix(N), z_matrix(N), h_matrix(N)
    Hd = H.conj().T
    I = np.eye(N)
    checks = [
        ("ZX = w XZ", max_norm(Z @ X, w * X @ Z)),
        ("H X H† = Z", max_norm(H @ X @ Hd, Z)),
        ("H Z H† = X†", max_norm(H @ Z @ Hd, X.conj().T)),
        ("H^4 = I", max_norm(np.linalg.matrix_power(H, 4), I)),
    ]
    ib, eb = internal_block(dims), external_block(dims)
    xd, zd, hd = (ib[k].matrix for k in ("Xd", "Zd", "Hd"))
    xD, zD = eb["XD"].matrix, eb["ZD"].matrix
    checks += [
        ("Zd Xd = wd Xd Zd", max_norm(zd @ xd, dims.omega_d * xd @ zd)),
        ("ZD XD = wD XD ZD", max_norm(zD @ xD, dims.omega_D * xD @ zD)),
        ("[Xd, ZD] = 0", max_norm(xd @ zD, zD @ xd)),
        ("[XD, Zd] = 0", max_norm(xD @ zd, zd @ xD)),
        ("Hd Xd Hd† = Zd", max_norm(hd @ xd @ hd.conj().T, zd)),
    ]
    S = hybrid_swap(dims).matrix
    checks.append(("SWAP^2 = I", max_norm(S @ S, np.eye(N * N))))
    charge = ChargeAssignment(dims)
    for g in library(dims):
        checks.append((f"[{g.name}, Q] = 0", 0.0 if commutes_with_charge(g, charge, tol) else 1.0))
    return [{"check": name, "error": err, "passed": err <= tol} for name, err in checks]
