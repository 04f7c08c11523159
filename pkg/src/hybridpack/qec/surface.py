"""Two-layer planar surface code and a matching decoder.

Qudits sit at grid points ``(r, c)`` with ``r + c`` even, ``0 <= r, c <= 2L-2``.
Star checks sit at (even r, odd c) and plaquette checks at (odd r, even c).
Each layer (internal, modulus ``d``; external, modulus ``D``) carries its own
stars (X type) and plaquettes (Z type). Orientation signs make the checks
commute for any modulus:

* star: ``+1`` on the neighbour at the larger coordinate, ``-1`` on the smaller;
* plaquette: vertical neighbour at row offset ``a`` gets ``a``, horizontal
  neighbour at column offset ``b`` gets ``-b``.

X-type errors are caught by plaquettes and escape at the top/bottom edges;
Z-type errors are caught by stars and escape at the left/right edges.
The simulation is Pauli-frame only (exponent vectors).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from .. import kernels
from ..errors import InvalidArgumentError
from ..hilbert import HybridDims
from ..state import as_rng
from ._stabilizer import CodeInstance, WeylCheck

LAYER_NAMES = {"int": "d", "ext": "D"}


@dataclass(frozen=True)
class Lattice:
    L: int

    def __post_init__(self):
        if self.L < 2:
            raise InvalidArgumentError("surface code needs L >= 2")

    @property
    def size(self) -> int:
        return 2 * self.L - 1

    @cached_property
    def qudits(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.size) for c in range(self.size) if (r + c) % 2 == 0]

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {q: i for i, q in enumerate(self.qudits)}

    @property
    def n(self) -> int:
        return len(self.qudits)

    @cached_property
    def stars(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(0, self.size, 2) for c in range(1, self.size, 2)]

    @cached_property
    def plaquettes(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(1, self.size, 2) for c in range(0, self.size, 2)]

    def _neighbours(self, pos):
        r, c = pos
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            q = (r + dr, c + dc)
            if q in self.index:
                yield q, dr, dc

    def star_signs(self, pos) -> dict[int, int]:
        return {self.index[q]: (dr + dc) for q, dr, dc in self._neighbours(pos)}

    def plaquette_signs(self, pos) -> dict[int, int]:
        return {self.index[q]: (dr if dr else -dc) for q, dr, dc in self._neighbours(pos)}

    def sign_matrix(self, kind: str) -> np.ndarray:
        """``(n_checks, n)`` integer matrix of orientation signs."""
        checks = self.stars if kind == "star" else self.plaquettes
        fn = self.star_signs if kind == "star" else self.plaquette_signs
        out = np.zeros((len(checks), self.n), dtype=np.int64)
        for i, pos in enumerate(checks):
            for q, s in fn(pos).items():
                out[i, q] = s
        return out

    def logical_x_support(self) -> list[int]:
        """North-south string down the left column."""
        return [self.index[(r, 0)] for r in range(0, self.size, 2)]

    def logical_z_support(self) -> list[int]:
        """East-west string along the top row."""
        return [self.index[(0, c)] for c in range(0, self.size, 2)]


def surface_build(L: int, dims: HybridDims) -> CodeInstance:
    lat = Lattice(L)
    n = lat.n
    zero = np.zeros(n, dtype=np.int64)
    S, P = lat.sign_matrix("star"), lat.sign_matrix("plaquette")
    checks, logicals = [], {}
    for layer, q in (("int", dims.d), ("ext", dims.D)):
        tag = LAYER_NAMES[layer]
        checks += [WeylCheck(row, zero, q, layer, f"A{tag}{pos}") for row, pos in zip(S, lat.stars)]
        checks += [WeylCheck(zero, row, q, layer, f"B{tag}{pos}") for row, pos in zip(P, lat.plaquettes)]
        lx = zero.copy()
        lx[lat.logical_x_support()] = 1
        lz = zero.copy()
        lz[lat.logical_z_support()] = 1
        logicals[f"X{tag}"] = WeylCheck(lx, zero, q, layer, f"Xbar{tag}")
        logicals[f"Z{tag}"] = WeylCheck(zero, lz, q, layer, f"Zbar{tag}")
    return CodeInstance(f"surface({L})", dims.N, n, tuple(checks), logicals, {}, dims,
                        {"L": L, "lattice": lat})


# ------------------------------------------------------------------ decoding

@dataclass(frozen=True)
class LayerProblem:
    """One of the four Z_q matching problems: X-type or Z-type errors on a layer."""

    lattice: Lattice
    modulus: int
    error_type: str  # "X" (plaquette syndromes) or "Z" (star syndromes)

    @cached_property
    def signs(self) -> np.ndarray:
        return self.lattice.sign_matrix("plaquette" if self.error_type == "X" else "star")

    @cached_property
    def positions(self) -> list[tuple[int, int]]:
        return self.lattice.plaquettes if self.error_type == "X" else self.lattice.stars

    def syndrome(self, err: np.ndarray) -> np.ndarray:
        """Defect charges for exponent vector(s) ``err``; batched over leading axis."""
        err = np.atleast_2d(err)
        out = kernels.weyl_syndromes(self.signs, err, self.modulus)
        # Z-type errors on stars pick up ``-sx.ez``
        return out if self.error_type == "X" else (-out) % self.modulus

    def _boundary_distance(self, pos) -> tuple[int, str]:
        r, c = pos
        edge = 2 * self.lattice.L - 1
        if self.error_type == "X":
            up, down = (r + 1) // 2, (edge - r) // 2
            return (up, "up") if up <= down else (down, "down")
        left, right = (c + 1) // 2, (edge - c) // 2
        return (left, "left") if left <= right else (right, "right")

    @staticmethod
    def _distance(a, b) -> int:
        return (abs(a[0] - b[0]) + abs(a[1] - b[1])) // 2

    def match(self, syndrome: np.ndarray) -> list[tuple[int, int | None]]:
        """Minimum-weight pairing of defects; ``None`` marks the boundary.

        Defects pair only when their charges cancel mod q. Ties are broken by
        the deterministic, index-ordered graph construction.
        """
        q = self.modulus
        defects = [int(i) for i in np.flatnonzero(syndrome)]
        if not defects:
            return []
        G = nx.Graph()
        big = 4 * self.lattice.size * (len(defects) + 1)
        for i in defects:
            G.add_node(("d", i))
            G.add_node(("b", i))
        for a_pos, a in enumerate(defects):
            da, _ = self._boundary_distance(self.positions[a])
            G.add_edge(("d", a), ("b", a), weight=big - da)
            for b in defects[a_pos + 1:]:
                G.add_edge(("b", a), ("b", b), weight=big)
                if (syndrome[a] + syndrome[b]) % q == 0:
                    w = self._distance(self.positions[a], self.positions[b])
                    G.add_edge(("d", a), ("d", b), weight=big - w)
        M = nx.max_weight_matching(G, maxcardinality=True)
        pairs = []
        for u, v in sorted(M, key=lambda e: sorted(e)):
            (ku, iu), (kv, iv) = u, v
            if ku == "d" and kv == "d":
                pairs.append((min(iu, iv), max(iu, iv)))
            elif ku == "d" and kv == "b" and iu == iv:
                pairs.append((iu, None))
            elif kv == "d" and ku == "b" and iu == iv:
                pairs.append((iv, None))
        return sorted(pairs, key=lambda p: (p[0], -1 if p[1] is None else p[1]))

    def _path(self, start, goal_or_dir):
        """Qudits crossed walking from check ``start`` (vertical first, then horizontal)."""
        r, c = start
        steps = []
        if isinstance(goal_or_dir, str):
            edge = self.lattice.size
            dr, dc = {"up": (-1, 0), "down": (1, 0), "left": (0, -1), "right": (0, 1)}[goal_or_dir]
            while True:
                qpos = (r + dr, c + dc)
                steps.append((qpos, (r + 2 * dr, c + 2 * dc)))
                r, c = r + 2 * dr, c + 2 * dc
                if not (0 <= r < edge and 0 <= c < edge):
                    return steps
        gr, gc = goal_or_dir
        while r != gr:
            dr = 1 if gr > r else -1
            steps.append(((r + dr, c), (r + 2 * dr, c)))
            r += 2 * dr
        while c != gc:
            dc = 1 if gc > c else -1
            steps.append(((r, c + dc), (r, c + 2 * dc)))
            c += 2 * dc
        return steps

    def correction(self, syndrome: np.ndarray) -> np.ndarray:
        """Exponent vector that clears ``syndrome``."""
        q = self.modulus
        lat = self.lattice
        pos_index = {p: i for i, p in enumerate(self.positions)}
        corr = np.zeros(lat.n, dtype=np.int64)
        sgn = -1 if self.error_type == "Z" else 1
        for a, b in self.match(syndrome):
            charge = int(syndrome[a])
            start = self.positions[a]
            goal = self._boundary_distance(start)[1] if b is None else self.positions[b]
            cur = a
            for qpos, nxt in self._path(start, goal):
                v = lat.index[qpos]
                # pick e so the current check's charge is cancelled
                e = (-charge * int(self.signs[cur, v]) * sgn) % q
                corr[v] = (corr[v] + e) % q
                if nxt in pos_index:
                    cur_next = pos_index[nxt]
                    charge = (sgn * int(self.signs[cur_next, v]) * e) % q
                    cur = cur_next
        return corr

    def logical_support(self) -> np.ndarray:
        """Support of the conjugate logical used to test residual errors."""
        lat = self.lattice
        sup = lat.logical_z_support() if self.error_type == "X" else lat.logical_x_support()
        v = np.zeros(lat.n, dtype=np.int64)
        v[sup] = 1
        return v

    def is_logical_error(self, residual: np.ndarray) -> np.ndarray:
        residual = np.atleast_2d(residual)
        return (residual @ self.logical_support()) % self.modulus != 0


def layer_problems(L: int, dims: HybridDims) -> list[LayerProblem]:
    lat = Lattice(L)
    out = []
    for q in (dims.d, dims.D):
        if q > 1:
            out += [LayerProblem(lat, q, "X"), LayerProblem(lat, q, "Z")]
    return out


def surface_decode(syndrome: dict, code: CodeInstance) -> dict:
    """Corrections per layer problem.

    ``syndrome`` maps ``(layer, error_type)`` (e.g. ``("int", "X")``) to a defect
    vector; the result maps the same keys to exponent vectors.
    """
    lat = code.meta["lattice"]
    mod = {"int": code.dims.d, "ext": code.dims.D}
    out = {}
    for (layer, etype), syn in syndrome.items():
        lp = LayerProblem(lat, mod[layer], etype)
        out[(layer, etype)] = lp.correction(np.asarray(syn, dtype=np.int64))
    return out


def sample_hybrid_errors(n: int, dims: HybridDims, p: float, trials: int, seed) -> np.ndarray:
    """``(trials, n, 4)`` exponents ``(a, b, alpha, beta)`` of ``X_d^a Z_d^b X_D^alpha Z_D^beta``.

    Each qudit independently suffers a uniformly random non-identity element
    with probability ``p``.
    """
    rng = as_rng(seed)
    d, D = dims.d, dims.D
    total = d * d * D * D
    hit = rng.random((trials, n)) < p
    idx = rng.integers(1, total, size=(trials, n))
    idx = np.where(hit, idx, 0)
    a, rest = np.divmod(idx, d * D * D)
    b, rest = np.divmod(rest, D * D)
    al, be = np.divmod(rest, D)
    return np.stack([a, b, al, be], axis=-1)


def monte_carlo_logical_rate(L: int, dims: HybridDims, p: float, trials: int, seed) -> dict:
    """Pauli-frame Monte Carlo: fraction of trials with any logical failure."""
    lat = Lattice(L)
    errs = sample_hybrid_errors(lat.n, dims, p, trials, seed)
    column = {("int", "X"): 0, ("int", "Z"): 1, ("ext", "X"): 2, ("ext", "Z"): 3}
    failed = np.zeros(trials, dtype=bool)
    for lp, key in zip(layer_problems(L, dims), [k for k in column if (dims.d > 1 if k[0] == "int" else dims.D > 1)]):
        e = errs[:, :, column[key]]
        syn = lp.syndrome(e)
        cache: dict[bytes, np.ndarray] = {}
        for t in range(trials):
            if not syn[t].any():
                if e[t].any():
                    failed[t] |= bool(lp.is_logical_error(e[t])[0])
                continue
            k = syn[t].tobytes()
            if k not in cache:
                cache[k] = lp.correction(syn[t])
            res = (e[t] + cache[k]) % lp.modulus
            failed[t] |= bool(lp.is_logical_error(res)[0])
    rate = float(failed.mean())
    return {"L": L, "p": p, "trials": trials, "failures": int(failed.sum()), "rate": rate,
            "sigma": float(np.sqrt(max(rate * (1 - rate), 1e-12) / trials))}


def single_edge_report(L: int, dims: HybridDims) -> dict:
    """Decode every single-qudit error in every layer problem and check the logical class."""
    tested = ok = 0
    failures = []
    for lp in layer_problems(L, dims):
        for v in range(lp.lattice.n):
            for e in range(1, lp.modulus):
                err = np.zeros(lp.lattice.n, dtype=np.int64)
                err[v] = e
                syn = lp.syndrome(err)[0]
                res = (err + lp.correction(syn)) % lp.modulus
                clean = not lp.syndrome(res)[0].any()
                good = clean and not lp.is_logical_error(res)[0]
                tested += 1
                ok += int(good)
                if not good:
                    failures.append({"q": lp.modulus, "type": lp.error_type, "qudit": v, "e": e})
    return {"L": L, "errors_tested": tested, "errors_corrected": ok, "failures": failures}
