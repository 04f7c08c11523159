"""Dense state vectors on registers of hybrid sites.

Sites are big-endian in the flattened index: site 0 is the most significant
digit, matching left-to-right tensor notation. Every stochastic routine takes
a ``seed`` (an int or a ``numpy.random.Generator``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._config import TOL_NORM
from .errors import ContractViolation, InvalidArgumentError
from .hilbert import ChargeAssignment, HybridDims, total_charge_operator


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise InvalidArgumentError("a seed is required for stochastic operations")
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class RegisterState:
    dims: HybridDims
    charge: ChargeAssignment
    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.local_dim**self.n_sites,):
            raise InvalidArgumentError(
                f"expected {self.local_dim**self.n_sites} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL_NORM:
            raise ContractViolation(f"state norm {norm} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def local_dim(self) -> int:
        return self.charge.local_dim_ext

    @property
    def N(self) -> int:
        return self.dims.N

    def with_amplitudes(self, amps: np.ndarray, renormalize: bool = False) -> "RegisterState":
        if renormalize:
            amps = amps / np.linalg.norm(amps)
        return RegisterState(self.dims, self.charge, self.n_sites, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self, other: "RegisterState") -> "RegisterState":
        if other.charge != self.charge:
            raise InvalidArgumentError("cannot join registers with different charge assignments")
        return RegisterState(self.dims, self.charge, self.n_sites + other.n_sites,
                             np.kron(self.amplitudes, other.amplitudes))

    def total_charge_expectation(self) -> float:
        q = total_charge_operator(self.n_sites, self.charge)
        return float(np.sum(self.probabilities() * q))

    def dump(self, threshold: float = 1e-14) -> list[tuple[int, float, float]]:
        idx = np.flatnonzero(np.abs(self.amplitudes) > threshold)
        return [(int(i), float(self.amplitudes[i].real), float(self.amplitudes[i].imag)) for i in idx]

    def dumps(self) -> str:
        return json.dumps({"local_dim": self.local_dim, "n_sites": self.n_sites, "amplitudes": self.dump()})


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome_label: int
    probability: float
    post_state: RegisterState


def _resolve_charge(dims: HybridDims, charge: ChargeAssignment | None) -> ChargeAssignment:
    return ChargeAssignment.minimal(dims) if charge is None else charge


def basis_state(labels, dims: HybridDims, charge: ChargeAssignment | None = None) -> RegisterState:
    """Product basis state ``|l_0> (x) |l_1> (x) ...``."""
    charge = _resolve_charge(dims, charge)
    labels = [int(l) for l in labels]
    if not labels:
        raise InvalidArgumentError("need at least one site")
    ld = charge.local_dim_ext
    idx = 0
    for l in labels:
        if not 0 <= l < ld:
            raise InvalidArgumentError(f"label {l} outside local dimension {ld}")
        idx = idx * ld + l
    amps = np.zeros(ld ** len(labels), dtype=complex)
    amps[idx] = 1.0
    return RegisterState(dims, charge, len(labels), amps)


def from_amplitudes(amps, dims: HybridDims, n_sites: int, charge: ChargeAssignment | None = None,
                    normalize: bool = False) -> RegisterState:
    """Wrap an amplitude vector written on the register's local dimension.

    When the charge assignment has extra labels and ``amps`` only covers the
    computational span (``N**n_sites`` entries), the vector is embedded.
    """
    charge = _resolve_charge(dims, charge)
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    ld = charge.local_dim_ext
    if ld != dims.N and amps.size == dims.N**n_sites:
        full = np.zeros((ld,) * n_sites, dtype=complex)
        full[(slice(0, dims.N),) * n_sites] = amps.reshape((dims.N,) * n_sites)
        amps = full.reshape(-1)
    if normalize:
        amps = amps / np.linalg.norm(amps)
    return RegisterState(dims, charge, n_sites, amps)


def _check_sites(state: RegisterState, sites) -> list[int]:
    sites = [int(s) for s in sites]
    if len(set(sites)) != len(sites):
        raise InvalidArgumentError(f"overlapping sites {sites}")
    for s in sites:
        if not 0 <= s < state.n_sites:
            raise InvalidArgumentError(f"site {s} out of range for {state.n_sites} sites")
    return sites


def _op_matrix(state: RegisterState, op, n_targets: int) -> np.ndarray:
    if hasattr(op, "extended"):
        if op.arity != n_targets:
            raise InvalidArgumentError(f"{op.name} acts on {op.arity} sites, got {n_targets}")
        return op.extended(state.charge)
    mat = np.asarray(op, dtype=complex)
    if mat.shape != (state.local_dim**n_targets,) * 2:
        if state.local_dim != state.N and mat.shape == (state.N**n_targets,) * 2:
            from .gates import embed_computational

            return embed_computational(mat, state.N, state.local_dim, n_targets)
        raise InvalidArgumentError(f"operator shape {mat.shape} does not match {n_targets} sites")
    return mat


def apply_local(state: RegisterState, op, sites, check_unitary: bool = False) -> RegisterState:
    """Apply a ``GateOp`` (or raw matrix) to ``sites`` in the given order."""
    sites = _check_sites(state, sites)
    mat = _op_matrix(state, op, len(sites))
    if check_unitary:
        from .gates import is_unitary

        if not is_unitary(mat):
            raise ContractViolation("operator is not unitary")
    out = kernels.apply_matrix(state.amplitudes, state.local_dim, state.n_sites, mat, sites)
    return state.with_amplitudes(out)


def apply_nonunitary(state: RegisterState, mat: np.ndarray, sites) -> tuple[RegisterState | None, float]:
    """Apply a Kraus-type operator; returns the renormalized state and its weight."""
    sites = _check_sites(state, sites)
    mat = _op_matrix(state, mat, len(sites))
    out = kernels.apply_matrix(state.amplitudes, state.local_dim, state.n_sites, mat, sites)
    w = float(np.vdot(out, out).real)
    if w <= 1e-300:
        return None, 0.0
    return state.with_amplitudes(out / np.sqrt(w)), w


def apply_monomial(state: RegisterState, site: int, perm, phases) -> RegisterState:
    """Apply ``|l> -> phases[l] |perm[l]>`` on one site (Weyl operators and friends)."""
    _check_sites(state, [site])
    perm = np.asarray(perm, dtype=np.int64)
    phases = np.asarray(phases, dtype=np.complex128)
    ld = state.local_dim
    if perm.size < ld:
        perm = np.concatenate([perm, np.arange(perm.size, ld)])
        phases = np.concatenate([phases, np.ones(ld - phases.size)])
    out = kernels.apply_monomial(state.amplitudes, ld, state.n_sites, site, perm, phases)
    return state.with_amplitudes(out)


def apply_circuit(state: RegisterState, circuit) -> RegisterState:
    """Apply a sequence of ``(op, sites)`` pairs."""
    for op, sites in circuit:
        state = apply_local(state, op, sites)
    return state


def reduced_probabilities(state: RegisterState, sites) -> np.ndarray:
    """Joint outcome distribution of computational-basis labels on ``sites``."""
    sites = _check_sites(state, sites)
    if len(sites) == 1:
        return kernels.site_marginal(state.probabilities(), state.local_dim, state.n_sites, sites[0])
    p = state.probabilities().reshape((state.local_dim,) * state.n_sites)
    rest = tuple(i for i in range(state.n_sites) if i not in sites)
    p = p.sum(axis=rest)
    order = sorted(sites)
    p = np.moveaxis(p, [order.index(s) for s in sites], range(len(sites)))
    return p.reshape(-1)


def _projector_set(state: RegisterState, projectors, n_targets: int) -> list[np.ndarray]:
    """Projectors on the register's local space.

    Projectors written on the computational span of an extended register are
    zero-padded, and one extra outcome (the complement; label ``len(projectors)``)
    collects every non-computational label.
    """
    ld, N = state.local_dim, state.N
    mats = [np.asarray(P, dtype=complex) for P in projectors]
    if ld != N and mats and mats[0].shape == (N**n_targets,) * 2:
        digits = np.indices((ld,) * n_targets).reshape(n_targets, -1).T
        comp = np.flatnonzero(np.all(digits < N, axis=1))
        padded = []
        for P in mats:
            big = np.zeros((ld**n_targets,) * 2, dtype=complex)
            big[np.ix_(comp, comp)] = P
            padded.append(big)
        padded.append(np.eye(ld**n_targets) - sum(padded))
        return padded
    return [_op_matrix(state, P, n_targets) for P in mats]


def outcome_probabilities(state: RegisterState, projectors, sites) -> np.ndarray:
    sites = _check_sites(state, sites)
    probs = []
    for P in _projector_set(state, projectors, len(sites)):
        v = kernels.apply_matrix(state.amplitudes, state.local_dim, state.n_sites, P, sites)
        probs.append(float(np.vdot(v, v).real))
    return np.array(probs)


def _validate_projectors(mats, tol=TOL_NORM):
    total = sum(mats)
    dim = total.shape[0]
    if np.max(np.abs(total - np.eye(dim))) > tol:
        raise InvalidArgumentError("projectors do not sum to the identity")
    for P in mats:
        if np.max(np.abs(P @ P - P)) > 1e-8 or np.max(np.abs(P - P.conj().T)) > 1e-8:
            raise InvalidArgumentError("operator in projector list is not an orthogonal projector")


def measure_projective(state: RegisterState, projectors, sites, seed) -> MeasurementOutcome:
    """Sample one outcome of a complete projective measurement on ``sites``."""
    sites = _check_sites(state, sites)
    mats = _projector_set(state, projectors, len(sites))
    _validate_projectors(mats)
    rng = as_rng(seed)
    vecs = [kernels.apply_matrix(state.amplitudes, state.local_dim, state.n_sites, P, sites) for P in mats]
    probs = np.array([float(np.vdot(v, v).real) for v in vecs])
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    k = int(rng.choice(len(mats), p=probs))
    post = state.with_amplitudes(vecs[k] / np.linalg.norm(vecs[k]))
    return MeasurementOutcome(k, float(probs[k]), post)


def computational_projectors(local_dim: int, n_sites: int = 1) -> list[np.ndarray]:
    dim = local_dim**n_sites
    return [np.diag(np.eye(dim)[i]) for i in range(dim)]


def basis_projectors(basis: np.ndarray) -> list[np.ndarray]:
    """Rank-one projectors onto the columns of ``basis``."""
    return [np.outer(basis[:, i], basis[:, i].conj()) for i in range(basis.shape[1])]


def measure_computational(state: RegisterState, site: int, seed) -> MeasurementOutcome:
    """Fast computational-basis measurement of one site over all local labels."""
    _check_sites(state, [site])
    rng = as_rng(seed)
    probs = kernels.site_marginal(state.probabilities(), state.local_dim, state.n_sites, site)
    probs = probs / probs.sum()
    k = int(rng.choice(probs.size, p=probs))
    amps = state.amplitudes.reshape((state.local_dim,) * state.n_sites).copy()
    keep = np.zeros(state.local_dim, dtype=bool)
    keep[k] = True
    idx = [slice(None)] * state.n_sites
    idx[site] = ~keep
    amps[tuple(idx)] = 0.0
    amps = amps.reshape(-1)
    return MeasurementOutcome(k, float(probs[k]), state.with_amplitudes(amps / np.linalg.norm(amps)))


def measure_in_basis(state: RegisterState, basis: np.ndarray, site: int, seed) -> MeasurementOutcome:
    """Measure one site in the orthonormal basis given by the columns of ``basis`` (N x N)."""
    rot = basis.conj().T
    rotated = apply_local(state, rot, [site])
    out = measure_computational(rotated, site, seed)
    if out.outcome_label >= basis.shape[1]:
        return out
    post = apply_local(out.post_state, basis, [site])
    return MeasurementOutcome(out.outcome_label, out.probability, post)


def _same_register(a: RegisterState, b: RegisterState):
    if a.local_dim != b.local_dim or a.n_sites != b.n_sites:
        raise InvalidArgumentError("states live on different registers")


def inner(a: RegisterState, b: RegisterState) -> complex:
    _same_register(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: RegisterState, b: RegisterState) -> float:
    return float(min(1.0, abs(inner(a, b)) ** 2))


def expectation(state: RegisterState, observable, sites) -> float:
    sites = _check_sites(state, sites)
    mat = _op_matrix(state, observable, len(sites))
    if np.max(np.abs(mat - mat.conj().T)) > TOL_NORM:
        raise ContractViolation("observable is not hermitian")
    v = kernels.apply_matrix(state.amplitudes, state.local_dim, state.n_sites, mat, sites)
    return float(np.vdot(state.amplitudes, v).real)


def number_operator(N: int) -> np.ndarray:
    return np.diag(np.arange(N, dtype=float))


def uniform_superposition(dims: HybridDims, n_sites: int = 1, charge: ChargeAssignment | None = None) -> RegisterState:
    amps = np.ones(dims.N**n_sites) / np.sqrt(dims.N**n_sites)
    return from_amplitudes(amps, dims, n_sites, charge)
