"""Noise channels on pure-state trajectories and error-budget arithmetic.

* gauge-conserving (GC) errors are Weyl operators ``X^s Z^t`` on the
  computational span;
* gauge-violating (GV) events move a neutral label onto a charged label and
  are Boltzmann suppressed;
* leakage moves the external label of a site onto a leak level, preserving
  the internal label, and the leakage-reduction unit (LRU) resets it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .gates import weyl_monomial
from .hilbert import total_charge_operator
from .state import RegisterState, as_rng, reduced_probabilities

UNBOUNDED = math.inf


@dataclass(frozen=True)
class NoiseParams:
    p_gc: float = 0.0
    p_gv0: float = 0.0
    gap_over_kT: float = 0.0
    p_leak: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("p_gc", "p_leak"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidArgumentError(f"{name} must lie in [0, 1], got {v}")
        if self.p_gv0 < 0 or self.gap_over_kT < 0 or self.gamma < 0:
            raise InvalidArgumentError("p_gv0, gap_over_kT and gamma must be non-negative")

    @classmethod
    def from_dict(cls, cfg: dict) -> "NoiseParams":
        allowed = {"p_gc", "p_gv0", "gap_over_kT", "p_leak", "gamma", "weights"}
        unknown = set(cfg) - allowed
        if unknown:
            raise InvalidArgumentError(f"unknown noise keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in cfg.items() if k != "weights"})


@dataclass(frozen=True)
class ErrorBudget:
    p_eff: float
    p_th: float | None
    t_L: int


@dataclass(frozen=True, eq=False)
class WeylChannel:
    """Probabilities ``weights[s, t]`` of applying ``X^s Z^t``."""

    N: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.N, self.N):
            raise InvalidArgumentError(f"weights must be {self.N}x{self.N}")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError("weights must be a probability table")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def identity(cls, N: int) -> "WeylChannel":
        w = np.zeros((N, N))
        w[0, 0] = 1.0
        return cls(N, w)

    @classmethod
    def uniform(cls, N: int, p: float) -> "WeylChannel":
        """Total rate ``p`` spread evenly over the ``N**2 - 1`` non-identity pairs."""
        if not 0 <= p <= 1:
            raise InvalidArgumentError("p must lie in [0, 1]")
        w = np.full((N, N), p / (N * N - 1))
        w[0, 0] = 1 - p
        return cls(N, w)

    @classmethod
    def from_config(cls, N: int, p: float, weights="uniform") -> "WeylChannel":
        if isinstance(weights, str):
            if weights != "uniform":
                raise InvalidArgumentError(f"unknown weights spec {weights!r}")
            return cls.uniform(N, p)
        return cls(N, np.asarray(weights, dtype=float))

    def flat_pairs(self):
        s, t = np.divmod(np.arange(self.N * self.N), self.N)
        return s, t, self.weights.reshape(-1)


def sample_weyl_error(channel: WeylChannel, seed) -> tuple[int, int]:
    rng = as_rng(seed)
    s, t, w = channel.flat_pairs()
    i = int(rng.choice(w.size, p=w))
    return int(s[i]), int(t[i])


def sample_weyl_errors(channel: WeylChannel, count: int, seed) -> np.ndarray:
    """``(count, 2)`` array of sampled ``(s, t)`` pairs."""
    rng = as_rng(seed)
    s, t, w = channel.flat_pairs()
    idx = rng.choice(w.size, size=count, p=w)
    return np.column_stack([s[idx], t[idx]])


def apply_weyl_error(state: RegisterState, site: int, s: int, t: int) -> RegisterState:
    perm, phases = weyl_monomial(state.N, s, t)
    from .state import apply_monomial

    return apply_monomial(state, site, perm, phases)


def apply_gc_channel(state: RegisterState, channel: WeylChannel, site: int, seed) -> tuple[RegisterState, tuple[int, int]]:
    s, t = sample_weyl_error(channel, seed)
    if (s, t) == (0, 0):
        return state, (0, 0)
    return apply_weyl_error(state, site, s, t), (s, t)


# ---------------------------------------------------------------- GV events

def gv_event_probability(params: NoiseParams) -> float:
    q = params.p_gv0 * math.exp(-params.gap_over_kT)
    return min(1.0, max(0.0, q))


def _relabel_site(state: RegisterState, site: int, mapping: dict[int, int]) -> RegisterState | None:
    """Move the amplitude on label ``src`` of ``site`` to label ``dst``; drop the rest."""
    ld, n = state.local_dim, state.n_sites
    amps = state.amplitudes.reshape((ld,) * n)
    out = np.zeros_like(amps)
    for src, dst in mapping.items():
        sl_src = [slice(None)] * n
        sl_dst = [slice(None)] * n
        sl_src[site], sl_dst[site] = src, dst
        out[tuple(sl_dst)] += amps[tuple(sl_src)]
    out = out.reshape(-1)
    nrm = np.linalg.norm(out)
    if nrm < 1e-300:
        return None
    return state.with_amplitudes(out / nrm)


def apply_gv_error(state: RegisterState, site: int, params: NoiseParams | None = None, seed=None,
                   force: bool = False, target_charge: int = 1) -> tuple[RegisterState, bool]:
    """Sample a GV event; on an event a neutral label jumps to a charged label.

    The jumping label is chosen by its Born weight on ``site``. Returns the
    new state and whether an event happened.
    """
    charge = state.charge
    if not len(charge.charged_span):
        raise InvalidArgumentError("GV events need charged labels on the site")
    rng = as_rng(seed)
    q = 1.0 if force else gv_event_probability(params)
    if rng.random() >= q:
        return state, False
    probs = reduced_probabilities(state, [site]).copy()
    neutral = charge.charges == 0
    probs[~neutral] = 0.0
    if probs.sum() <= 0:
        return state, False
    label = int(rng.choice(probs.size, p=probs / probs.sum()))
    new = _relabel_site(state, site, {label: charge.charged_label(target_charge)})
    return new, True


def total_charge_distribution(state: RegisterState) -> dict[int, float]:
    q = total_charge_operator(state.n_sites, state.charge)
    p = state.probabilities()
    out: dict[int, float] = {}
    for val in np.unique(q):
        w = float(p[q == val].sum())
        if w > 1e-15:
            out[int(val)] = w
    return out


def measure_sector(state: RegisterState, seed=None) -> tuple[int, RegisterState]:
    """Projective total-charge measurement; returns ``(Q, post_state)``."""
    dist = total_charge_distribution(state)
    values = sorted(dist)
    if len(values) == 1:
        return values[0], state
    rng = as_rng(seed)
    p = np.array([dist[v] for v in values])
    Q = values[int(rng.choice(len(values), p=p / p.sum()))]
    mask = total_charge_operator(state.n_sites, state.charge) == Q
    amps = np.where(mask, state.amplitudes, 0)
    return Q, state.with_amplitudes(amps, renormalize=True)


# ------------------------------------------------------------------ leakage

def apply_leakage(state: RegisterState, site: int, p_leak: float, seed, force: bool = False) -> tuple[RegisterState, bool]:
    """With probability ``p_leak`` the site's external label leaves the code range.

    The leaked external value ``k`` is sampled by Born weight; ``|j,k> -> |j, leak>``
    keeps the internal label (and its coherence) intact.
    """
    charge = state.charge
    if charge.leak_levels < 1:
        raise InvalidArgumentError("leakage needs leak labels on the site")
    rng = as_rng(seed)
    if not force and rng.random() >= p_leak:
        return state, False
    dims = state.dims
    probs = reduced_probabilities(state, [site])[: dims.N].reshape(dims.d, dims.D).sum(axis=0)
    if probs.sum() <= 0:
        return state, False
    k = int(rng.choice(dims.D, p=probs / probs.sum()))
    mapping = {j * dims.D + k: charge.leak_label(j, 0) for j in range(dims.d)}
    return _relabel_site(state, site, mapping), True


def leak_probability(state: RegisterState, site: int) -> float:
    probs = reduced_probabilities(state, [site])
    span = state.charge.leak_span
    return float(probs[span.start : span.stop].sum())


def lru_reset(state: RegisterState, site: int, seed=None) -> tuple[RegisterState, bool]:
    """Measure {code, leak} on ``site``; on leak re-inject the external label at 0.

    Returns ``(state, leaked)``. A seed is only consulted when both outcomes
    have non-zero probability.
    """
    charge = state.charge
    if charge.leak_levels < 1:
        return state, False
    p_leak = leak_probability(state, site)
    if p_leak <= 1e-15:
        return state, False
    leaked = True
    if p_leak < 1 - 1e-15:
        leaked = bool(as_rng(seed).random() < p_leak)
    D = state.dims.D
    if leaked:
        mapping = {charge.leak_label(j, lvl): j * D for j in range(state.dims.d) for lvl in range(charge.leak_levels)}
    else:
        leak = set(charge.leak_span)
        mapping = {l: l for l in range(charge.local_dim_ext) if l not in leak}
    return _relabel_site(state, site, mapping), leaked


def flag_outcome(state: RegisterState, site: int, seed=None) -> int:
    """Mixed-flag readout: ``+1`` inside the code range, ``-1`` once the site has leaked."""
    p = leak_probability(state, site)
    if p <= 1e-15:
        return 1
    if p >= 1 - 1e-15:
        return -1
    return -1 if as_rng(seed).random() < p else 1


def leaked_fraction_mc(p: float, t_L: int, trials: int, seed) -> float:
    """Fraction of trajectories leaked at least once over ``t_L`` cycles at rate ``p``."""
    rng = as_rng(seed)
    return float(np.mean(np.any(rng.random((trials, t_L)) < p, axis=1)))


# ----------------------------------------------------------------- budgets

def effective_rate(params: NoiseParams, t_L: int, p_th: float | None = None) -> ErrorBudget:
    if t_L < 0:
        raise InvalidArgumentError("t_L must be non-negative")
    return ErrorBudget(params.p_gc + params.p_leak * t_L, p_th, int(t_L))


def lru_interval_bound(params: NoiseParams, p_th: float) -> float | int:
    """Largest ``t_L`` with ``p_gc + p_leak t_L <= p_th`` (at least 1)."""
    if params.p_leak == 0:
        return UNBOUNDED
    raw = (p_th - params.p_gc) / params.p_leak
    return max(1, math.floor(raw + 1e-9))


def threshold_bound(N: int, gap_over_kT: float) -> float:
    """Sufficient threshold ``(1 - exp(-gap)) / (2 (N - 1))``; a lower bound only."""
    if N < 2:
        raise InvalidArgumentError("N must be >= 2")
    return (1.0 - math.exp(-gap_over_kT)) / (2.0 * (N - 1))
