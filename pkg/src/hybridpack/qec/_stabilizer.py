"""Weyl-string checks, code containers and a lookup decoder.

A check is ``prod_i X^{x_i} Z^{z_i}`` (X before Z on each site) acting on one
layer of the local space: the full index (``"N"``), the internal factor
(``"int"``) or the external factor (``"ext"``). For checks ``S`` and errors
``E`` on the same layer, ``S E = w^lam E S`` with

    lam = sum_i (S.z_i E.x_i - S.x_i E.z_i)  (mod q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import InvalidArgumentError
from ..gates import GateOp, GaugeStatus, kron_all, weyl_matrix, weyl_monomial
from ..hilbert import HybridDims
from ..state import RegisterState, apply_monomial, as_rng

LAYERS = ("N", "int", "ext")


@dataclass(frozen=True, eq=False)
class WeylCheck:
    x: np.ndarray
    z: np.ndarray
    modulus: int
    layer: str = "N"
    name: str = ""

    def __post_init__(self):
        if self.layer not in LAYERS:
            raise InvalidArgumentError(f"unknown layer {self.layer!r}")
        x = np.asarray(self.x, dtype=np.int64) % self.modulus
        z = np.asarray(self.z, dtype=np.int64) % self.modulus
        if x.shape != z.shape:
            raise InvalidArgumentError("x and z vectors differ in length")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def n_sites(self) -> int:
        return self.x.size

    @property
    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero((self.x != 0) | (self.z != 0))]

    def phase_with(self, other: "WeylCheck") -> int:
        """``lam`` in ``self other = w^lam other self`` (0 across different layers)."""
        if self.layer != other.layer:
            return 0
        if self.modulus != other.modulus:
            raise InvalidArgumentError("moduli differ within one layer")
        lam = int(np.dot(self.z, other.x) - np.dot(self.x, other.z))
        return lam % self.modulus

    def power(self, a: int) -> "WeylCheck":
        return WeylCheck(self.x * a, self.z * a, self.modulus, self.layer, self.name)

    def local_matrix(self, site: int, dims: HybridDims | None) -> np.ndarray:
        s, t = int(self.x[site]), int(self.z[site])
        if self.layer == "N":
            return weyl_matrix(self.modulus, s, t)
        if dims is None:
            raise InvalidArgumentError("layered checks need dims")
        w = weyl_matrix(self.modulus, s, t)
        if self.layer == "int":
            return np.kron(w, np.eye(dims.D))
        return np.kron(np.eye(dims.d), w)

    def local_monomial(self, site: int, dims: HybridDims | None):
        """``(perm, phases)`` of the single-site factor on the computational span."""
        s, t = int(self.x[site]), int(self.z[site])
        if self.layer == "N":
            return weyl_monomial(self.modulus, s, t)
        p, ph = weyl_monomial(self.modulus, s, t)
        d, D = dims.d, dims.D
        j, k = np.divmod(np.arange(d * D), D)
        if self.layer == "int":
            return p[j] * D + k, ph[j]
        return j * D + p[k], ph[k]

    def gate(self, dims: HybridDims | None = None) -> tuple[GateOp, list[int]]:
        sites = self.support
        mat = kron_all([self.local_matrix(i, dims) for i in sites])
        return GateOp(self.name or "S", mat, len(sites), gauge_status=GaugeStatus.VERIFIED), sites

    def dense(self, dims: HybridDims | None = None) -> np.ndarray:
        return kron_all([self.local_matrix(i, dims) for i in range(self.n_sites)])


def commutation_matrix(checks) -> np.ndarray:
    n = len(checks)
    out = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            out[a, b] = checks[a].phase_with(checks[b])
    return out


def all_commute(checks) -> bool:
    return not np.any(commutation_matrix(checks))


@dataclass(frozen=True)
class Recovery:
    site: int
    s: int
    t: int


@dataclass(frozen=True, eq=False)
class CodeInstance:
    kind: str
    N: int
    n_phys: int
    checks: tuple[WeylCheck, ...]
    logicals: dict = field(default_factory=dict)
    syndrome_table: dict = field(default_factory=dict)
    dims: HybridDims | None = None
    meta: dict = field(default_factory=dict)

    @cached_property
    def stabilizers(self) -> list[tuple[GateOp, list[int]]]:
        return [c.gate(self.dims) for c in self.checks]

    @property
    def n_checks(self) -> int:
        return len(self.checks)

    def syndrome_of(self, ex: np.ndarray, ez: np.ndarray, layer: str = "N") -> tuple[int, ...]:
        """Syndrome word of the error ``X^ex Z^ez`` on ``layer``."""
        return tuple(
            int((np.dot(c.z, ex) - np.dot(c.x, ez)) % c.modulus) if c.layer == layer else 0
            for c in self.checks
        )


def single_site_errors(n: int, N: int):
    for site in range(n):
        for s in range(N):
            for t in range(N):
                if (s, t) != (0, 0):
                    yield site, s, t


def build_lookup_table(code_checks, n: int, N: int) -> dict[tuple[int, ...], Recovery]:
    """First single-site error (lexicographic) seen per syndrome."""
    tmp = CodeInstance("tmp", N, n, tuple(code_checks))
    table: dict[tuple[int, ...], Recovery] = {}
    for site, s, t in single_site_errors(n, N):
        ex = np.zeros(n, dtype=np.int64)
        ez = np.zeros(n, dtype=np.int64)
        ex[site], ez[site] = s, t
        syn = tmp.syndrome_of(ex, ez)
        table.setdefault(syn, Recovery(site, s, t))
    return table


# ---------------------------------------------------------- dense simulation

def apply_check(state: RegisterState, check: WeylCheck, power: int = 1) -> RegisterState:
    c = check.power(power)
    for site in c.support:
        perm, ph = c.local_monomial(site, state.dims)
        state = apply_monomial(state, site, perm, ph)
    return state


def apply_error(state: RegisterState, site: int, s: int, t: int) -> RegisterState:
    perm, ph = weyl_monomial(state.N, s, t)
    return apply_monomial(state, site, perm, ph)


def undo_error(state: RegisterState, rec: Recovery) -> RegisterState:
    """Apply ``(X^s Z^t)^-1 = Z^-t X^-s``."""
    perm, ph = weyl_monomial(state.N, 0, -rec.t)
    state = apply_monomial(state, rec.site, perm, ph)
    perm, ph = weyl_monomial(state.N, -rec.s, 0)
    return apply_monomial(state, rec.site, perm, ph)


def measure_check(state: RegisterState, check: WeylCheck, seed=None) -> tuple[int, RegisterState]:
    """Projective eigenphase measurement of ``check`` via ``P_k = q^-1 sum_a w^{-ka} S^a``.

    Deterministic outcomes (probability 1) do not consume randomness.
    """
    q = check.modulus
    powers = [state.amplitudes]
    cur = state
    for _ in range(1, q):
        cur = apply_check(cur, check)
        powers.append(cur.amplitudes)
    stack = np.array(powers)
    w = np.exp(-2j * np.pi * np.outer(np.arange(q), np.arange(q)) / q)
    proj = (w @ stack) / q
    probs = np.real(np.einsum("ki,ki->k", proj.conj(), proj))
    probs = np.clip(probs, 0, None)
    top = int(np.argmax(probs))
    if probs[top] > 1 - 1e-12:
        k = top
    else:
        k = int(as_rng(seed).choice(q, p=probs / probs.sum()))
    return k, state.with_amplitudes(proj[k] / np.linalg.norm(proj[k]))


def measure_syndrome(state: RegisterState, code: CodeInstance, seed=None) -> tuple[tuple[int, ...], RegisterState]:
    rng = None if seed is None else as_rng(seed)
    word = []
    for c in code.checks:
        k, state = measure_check(state, c, rng)
        word.append(k)
    return tuple(word), state


def lookup_correct(state: RegisterState, code: CodeInstance, seed=None):
    """Measure, look up and undo. Returns ``(state, syndrome, recovery or None)``."""
    syn, state = measure_syndrome(state, code, seed)
    if not any(syn):
        return state, syn, None
    rec = code.syndrome_table.get(syn)
    if rec is None:
        return state, syn, None
    return undo_error(state, rec), syn, rec


def exhaustive_single_errors(code: CodeInstance, codeword: RegisterState, tol: float = 1e-9) -> dict:
    """Apply every single-site Weyl error and check recovery fidelity."""
    from ..state import fidelity

    tested = corrected = 0
    failures = []
    for site, s, t in single_site_errors(code.n_phys, code.N):
        bad = apply_error(codeword, site, s, t)
        fixed, syn, rec = lookup_correct(bad, code)
        f = fidelity(fixed, codeword)
        tested += 1
        if f >= 1 - tol:
            corrected += 1
        else:
            failures.append({"site": site, "s": s, "t": t, "syndrome": list(syn), "fidelity": f})
    return {"code": code.kind, "N": code.N, "errors_tested": tested, "errors_corrected": corrected, "failures": failures}


def code_projector(code: CodeInstance) -> np.ndarray:
    """Dense projector onto the joint +1 eigenspace (small codes only)."""
    dim = code.N**code.n_phys if code.dims is None else code.dims.N**code.n_phys
    P = np.eye(dim, dtype=complex)
    for c in code.checks:
        S = c.dense(code.dims)
        acc = np.eye(dim, dtype=complex)
        cur = np.eye(dim, dtype=complex)
        for _ in range(1, c.modulus):
            cur = cur @ S
            acc = acc + cur
        P = P @ (acc / c.modulus)
    return P
