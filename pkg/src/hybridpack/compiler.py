"""Solovay-Kitaev synthesis of single-qudit unitaries over the gate library.

Words are tuples of letter indices into a generator table containing every
generator and its inverse. The epsilon net is a breadth-first enumeration of
short words, deduplicated on a grid in phase-fixed SU(N) coordinates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, logm
from scipy.spatial import cKDTree

from .errors import InvalidArgumentError
from .gates import (
    GateOp,
    ThetaGateParam,
    default_theta_r,
    fourier_h,
    is_unitary,
    packaged_t,
    theta_r,
    weyl_x,
    weyl_z,
)
from .hilbert import ChargeAssignment, HybridDims, commutes_with_charge

log = logging.getLogger(__name__)


# ------------------------------------------------------------------ distance

def to_special(u: np.ndarray) -> np.ndarray:
    """Scale ``u`` to determinant 1 (one of the N equivalent branches)."""
    N = u.shape[0]
    det = np.linalg.det(u)
    return u / det ** (1.0 / N)


def operator_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``min_phi ||a - e^{i phi} b||_op``.

    With eigenphases ``theta_k`` of ``b a^dagger`` and ``arc`` the shortest arc
    covering them all, the minimum is ``2 sin(arc / 4)``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise InvalidArgumentError("operator_distance needs equal shapes")
    ev = np.linalg.eigvals(b @ a.conj().T)
    th = np.sort(np.mod(np.angle(ev), 2 * np.pi))
    gaps = np.diff(np.concatenate([th, [th[0] + 2 * np.pi]]))
    arc = 2 * np.pi - float(gaps.max())
    return float(2 * math.sin(min(arc, 2 * np.pi) / 4))


# ------------------------------------------------------------------- library

@dataclass(frozen=True, eq=False)
class Letter:
    name: str
    matrix: np.ndarray
    inverse: int
    gate: GateOp


def single_qudit_library(N: int, r: int | None = None) -> list[GateOp]:
    """Single-qudit generators: X, Z, H and the non-Clifford phase.

    At N=2 every admissible ``Theta_r`` is Clifford, so the qubit T gate is used.
    """
    gens = [weyl_x(N), weyl_z(N), fourier_h(N)]
    if N == 2:
        gens.append(packaged_t())
    else:
        gens.append(theta_r(ThetaGateParam(r if r is not None else default_theta_r(N), N)))
    return gens


def letter_table(gens: list[GateOp], tol: float = 1e-12) -> list[Letter]:
    """Generators plus inverses; self-inverse generators are not duplicated."""
    mats, names, gates = [], [], []
    for g in gens:
        mats.append(g.matrix)
        names.append(g.name)
        gates.append(g)
    for g in gens:
        inv = g.matrix.conj().T
        if not any(np.max(np.abs(inv - m)) < tol for m in mats):
            mats.append(inv)
            names.append(g.name + "†")
            gates.append(g.dagger())
    letters = []
    for i, m in enumerate(mats):
        inv = m.conj().T
        j = next(k for k, mm in enumerate(mats) if np.max(np.abs(mm - inv)) < tol)
        letters.append(Letter(names[i], m, j, gates[i]))
    return letters


@dataclass(frozen=True)
class GateWord:
    letters: tuple[int, ...]
    table: tuple = field(repr=False, compare=False, default=())

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self):
        return len(self.letters)

    def unitary(self) -> np.ndarray:
        N = self.table[0].matrix.shape[0]
        out = np.eye(N, dtype=complex)
        # letters are listed in application order: the last one acts last
        for i in self.letters:
            out = self.table[i].matrix @ out
        return out

    def inverse(self) -> "GateWord":
        return GateWord(tuple(self.table[i].inverse for i in reversed(self.letters)), self.table)

    def then(self, other: "GateWord") -> "GateWord":
        """``self`` followed by ``other``."""
        return GateWord(self.letters + other.letters, self.table)

    def simplified(self) -> "GateWord":
        out: list[int] = []
        for i in self.letters:
            if out and self.table[out[-1]].inverse == i:
                out.pop()
            else:
                out.append(i)
        return GateWord(tuple(out), self.table)

    def tokens(self) -> str:
        return " ".join(self.table[i].name for i in self.letters)

    def prefix_gauge_ok(self, charge: ChargeAssignment, tol: float = 1e-12) -> bool:
        N = charge.N
        acc = np.eye(N, dtype=complex)
        for i in self.letters:
            acc = self.table[i].matrix @ acc
            op = GateOp("prefix", acc, 1, check_unitary=False)
            if not commutes_with_charge(op, charge, tol):
                return False
        return True


def parse_word(text: str, table: list[Letter]) -> GateWord:
    lookup = {l.name: i for i, l in enumerate(table)}
    try:
        return GateWord(tuple(lookup[t] for t in text.split()), tuple(table))
    except KeyError as exc:
        raise InvalidArgumentError(f"unknown generator token {exc}") from None


# ---------------------------------------------------------------------- net

def _phase_copies(u: np.ndarray) -> np.ndarray:
    """All ``N`` determinant-1 representatives of ``u``, flattened to reals."""
    N = u.shape[0]
    s = to_special(u)
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    copies = roots[:, None, None] * s[None]
    flat = copies.reshape(N, -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _grid_key(u: np.ndarray, cell: float) -> bytes:
    c = _phase_copies(u)
    # canonical representative: lexicographically smallest rounded copy
    keys = np.round(c / cell).astype(np.int64)
    order = np.lexsort(keys.T[::-1])
    return keys[order[0]].tobytes()


@dataclass(eq=False)
class EpsilonNet:
    N: int
    depth: int
    table: tuple
    words: list
    unitaries: np.ndarray
    delta0: float = float("nan")
    partial: bool = False
    _tree: cKDTree | None = field(default=None, repr=False)

    def __post_init__(self):
        pts = np.concatenate([_phase_copies(u) for u in self.unitaries])
        self._tree = cKDTree(pts)

    def __len__(self):
        return len(self.words)

    def nearest(self, target: np.ndarray, k: int = 8) -> tuple[GateWord, float]:
        return self.nearest_k(target, 1, k)[0]

    def nearest_k(self, target: np.ndarray, count: int, pool: int = 8) -> list[tuple[GateWord, float]]:
        """The ``count`` closest net words by operator distance (ties by net order)."""
        q = _phase_copies(target)[0]
        kk = min(max(pool, count) * self.N, len(self.words) * self.N)
        _, idx = self._tree.query(q, k=kk)
        cand = {}
        for i in np.atleast_1d(idx):
            w = int(i) // self.N
            if w not in cand:
                cand[w] = operator_distance(target, self.unitaries[w])
        ranked = sorted(cand.items(), key=lambda kv: (kv[1], kv[0]))[:count]
        return [(GateWord(self.words[w], self.table), dist) for w, dist in ranked]

    def probe_radius(self, n_targets: int, seed) -> float:
        rng = np.random.default_rng(seed)
        return max(self.nearest(haar_unitary(self.N, rng))[1] for _ in range(n_targets))


def build_net(library: list[GateOp] | None, t0: int, N: int, cell: float = 0.02,
              max_size: int = 200_000, probe_targets: int = 0, seed=0) -> EpsilonNet:
    """Breadth-first net over words of length <= ``t0``."""
    if library is None:
        library = single_qudit_library(N)
    table = tuple(letter_table(library))
    for l in table:
        if l.matrix.shape != (N, N):
            raise InvalidArgumentError("net generators must be single-qudit N x N matrices")
    words = [()]
    mats = [np.eye(N, dtype=complex)]
    seen = {_grid_key(mats[0], cell)}
    frontier = [0]
    partial = False
    for _ in range(t0):
        nxt = []
        for w in frontier:
            for li, letter in enumerate(table):
                if words[w] and table[words[w][-1]].inverse == li:
                    continue
                u = letter.matrix @ mats[w]
                key = _grid_key(u, cell)
                if key in seen:
                    continue
                seen.add(key)
                words.append(words[w] + (li,))
                mats.append(u)
                nxt.append(len(words) - 1)
                if len(words) >= max_size:
                    partial = True
                    break
            if partial:
                break
        frontier = nxt
        if partial:
            log.warning("epsilon net truncated at %d entries (memory budget)", max_size)
            break
    net = EpsilonNet(N, t0, table, words, np.array(mats), partial=partial)
    if probe_targets:
        net.delta0 = net.probe_radius(probe_targets, seed)
    elif t0 == 0:
        net.delta0 = 2.0
    return net


# ---------------------------------------------------------------- SK proper

def haar_unitary(N: int, rng) -> np.ndarray:
    z = (rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _su2_axis_angle(u: np.ndarray):
    s = to_special(u)
    if np.real(np.trace(s)) < 0:
        s = -s
    a = np.real(np.trace(s)) / 2
    theta = 2 * math.acos(max(-1.0, min(1.0, a)))
    v = np.array([np.imag(s[0, 1] + s[1, 0]), np.real(s[0, 1] - s[1, 0]), np.imag(s[0, 0] - s[1, 1])]) / -2
    nrm = np.linalg.norm(v)
    axis = v / nrm if nrm > 1e-15 else np.array([0.0, 0.0, 1.0])
    return axis, theta


_PAULI = (np.array([[0, 1], [1, 0]], dtype=complex), np.array([[0, -1j], [1j, 0]]), np.diag([1.0 + 0j, -1.0]))


def _su2_rot(axis, theta) -> np.ndarray:
    gen = sum(a * p for a, p in zip(axis, _PAULI))
    return math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * gen


def _su2_basis_change(a, b) -> np.ndarray:
    """A unitary ``S`` rotating axis ``a`` onto axis ``b``."""
    cross = np.cross(a, b)
    s = np.linalg.norm(cross)
    c = float(np.dot(a, b))
    if s < 1e-12:
        if c > 0:
            return np.eye(2, dtype=complex)
        perp = np.array([1.0, 0, 0]) if abs(a[0]) < 0.9 else np.array([0, 1.0, 0])
        perp = perp - np.dot(perp, a) * a
        return _su2_rot(perp / np.linalg.norm(perp), math.pi)
    return _su2_rot(cross / s, math.atan2(s, c))


def balanced_commutator_su2(delta: np.ndarray):
    """Exact ``V W V^dagger W^dagger = delta`` in SU(2) (up to sign)."""
    axis, theta = _su2_axis_angle(delta)
    st = math.sin(theta / 2)
    # sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2))
    x = math.sqrt(max(0.0, (1 - math.sqrt(max(0.0, 1 - st * st))) / 2))
    phi = 2 * math.asin(math.sqrt(x))
    V = _su2_rot(np.array([1.0, 0, 0]), phi)
    W = _su2_rot(np.array([0, 1.0, 0]), phi)
    comm = V @ W @ V.conj().T @ W.conj().T
    c_axis, _ = _su2_axis_angle(comm)
    S = _su2_basis_change(c_axis, axis)
    return S @ V @ S.conj().T, S @ W @ S.conj().T


def balanced_commutator(delta: np.ndarray):
    """``V, W`` with ``V W V^dagger W^dagger ~ delta`` for small ``delta``.

    SU(2) uses the exact rotation construction. For N > 2, the residual's
    logarithm is rotated (by the Fourier matrix in its eigenbasis) to zero
    diagonal and split as a commutator of a diagonal and an off-diagonal
    hermitian generator, balanced in norm.
    """
    N = delta.shape[0]
    if N == 2:
        return balanced_commutator_su2(delta)
    s = to_special(delta)
    Hlog = -1j * logm(s)
    Hlog = (Hlog + Hlog.conj().T) / 2
    Hlog -= np.trace(Hlog) / N * np.eye(N)
    evals, Q = np.linalg.eigh(Hlog)
    J = np.arange(N)
    F = np.exp(2j * np.pi * np.outer(J, J) / N) / np.sqrt(N)
    B = Q @ F
    Hp = B.conj().T @ Hlog @ B
    g = J - (N - 1) / 2
    diff = g[None, :] - g[:, None]
    np.fill_diagonal(diff, 1.0)
    Fm = -1j * Hp / diff
    np.fill_diagonal(Fm, 0.0)
    G = np.diag(g).astype(complex)
    nf, ng = np.linalg.norm(Fm, 2), np.linalg.norm(G, 2)
    if nf < 1e-15:
        return np.eye(N, dtype=complex), np.eye(N, dtype=complex)
    scale = math.sqrt(ng / nf)
    V = expm(1j * scale * Fm)
    W = expm(1j * G / scale)
    return B @ V @ B.conj().T, B @ W @ B.conj().T


@dataclass(frozen=True)
class CompileResult:
    word: GateWord
    epsilon: float
    levels: int

    @property
    def length(self) -> int:
        return self.word.length


def sk_compile(target: np.ndarray, net: EpsilonNet, levels: int, n_rotations: int = 4,
               n_candidates: int = 16) -> CompileResult:
    """Approximate ``target`` by ``levels`` rounds of group-commutator refinement.

    Search knobs (both leave the recursion itself unchanged):

    * ``n_rotations`` conjugations of the commutator pair by ``exp(i a log(delta))``,
      which keep the commutator fixed;
    * ``n_candidates`` nearest net words tried for each factor at the bottom level.

    The closest resulting word wins at every level.
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (net.N, net.N) or not is_unitary(target, 1e-9):
        raise InvalidArgumentError("target must be a unitary on one qudit")
    word = _sk(target, net, levels, max(1, n_rotations), max(1, n_candidates)).simplified()
    return CompileResult(word, operator_distance(target, word.unitary()), levels)


def _commutator_pairs(delta: np.ndarray, n_rotations: int):
    V, W = balanced_commutator(delta)
    if n_rotations == 1:
        return [(V, W)]
    Hlog = -1j * logm(to_special(delta))
    Hlog = (Hlog + Hlog.conj().T) / 2
    nrm = np.linalg.norm(Hlog, 2)
    if nrm < 1e-14:
        return [(V, W)]
    gen = Hlog / nrm
    pairs = []
    for i in range(n_rotations):
        C = expm(1j * (2 * np.pi * i / n_rotations) * gen)
        pairs.append((C @ V @ C.conj().T, C @ W @ C.conj().T))
    return pairs


def _factor_candidates(u, net, n, n_rotations, n_candidates) -> list[GateWord]:
    if n == 0:
        return [w for w, _ in net.nearest_k(u, n_candidates)]
    return [_sk(u, net, n, n_rotations, n_candidates)]


def _sk(u: np.ndarray, net: EpsilonNet, n: int, n_rotations: int, n_candidates: int) -> GateWord:
    if n == 0:
        return net.nearest(u)[0]
    prev = _sk(u, net, n - 1, n_rotations, n_candidates)
    prev_u = prev.unitary()
    delta = u @ prev_u.conj().T
    best, best_d = None, math.inf
    for V, W in _commutator_pairs(delta, n_rotations):
        cv = _factor_candidates(V, net, n - 1, n_rotations, n_candidates)
        cw = _factor_candidates(W, net, n - 1, n_rotations, n_candidates)
        for wv in cv:
            a = wv.unitary()
            for ww in cw:
                b = ww.unitary()
                approx = a @ b @ a.conj().T @ b.conj().T @ prev_u
                dist = operator_distance(u, approx)
                if dist < best_d:
                    best_d = dist
                    # u ~ V W V^dagger W^dagger prev: prev acts first
                    best = prev.then(ww.inverse()).then(wv.inverse()).then(ww).then(wv)
    return best


def compile_levels(target, net: EpsilonNet, max_level: int) -> list[CompileResult]:
    return [sk_compile(target, net, k) for k in range(max_level + 1)]
