"""Randomness expansion: a computational-basis source read in a random product MUB."""

from __future__ import annotations

import math

import numpy as np

from ..bases import mub_triplet
from ..hilbert import HybridDims
from ..state import as_rng
from .qkd import _sample_rows
from .report import ExperimentReport, ProtocolConfig, binomial_sigma


def _factor_bases(n: int) -> list[np.ndarray]:
    """Bases of one factor unbiased to the computational one (the identity if ``n == 1``)."""
    if n == 1:
        return [np.ones((1, 1), dtype=complex)]
    return list(mub_triplet(n).bases[1:])


def measurement_bases(dims: HybridDims) -> list[np.ndarray]:
    return [np.kron(a, b) for a in _factor_bases(dims.d) for b in _factor_bases(dims.D)]


def min_entropy(p_max: float) -> float:
    return -math.log2(p_max)


def randomness_expand(config: ProtocolConfig, bias: float = 0.0, source_label: int = 0) -> ExperimentReport:
    """``bias`` is the probability that the device emits the first vector of the chosen basis."""
    dims, n = config.dims, config.trials
    N = dims.N
    rng = as_rng(config.seed)
    bases = measurement_bases(dims)
    b = rng.integers(0, len(bases), n)
    rigged = rng.random(n) < bias
    probs = np.stack([np.abs(B[source_label, :]) ** 2 for B in bases])[b]
    out = _sample_rows(rng, probs)
    out = np.where(rigged, 0, out)
    freq = np.bincount(out, minlength=N) / n
    p_max = float(freq.max())
    h = min_entropy(p_max)
    sig_p = binomial_sigma(p_max, n)
    sig_h = sig_p / (p_max * math.log(2)) if p_max > 0 else math.inf
    ref = math.log2(N)
    dev = abs(h - ref) / sig_h if sig_h > 0 else (0.0 if h == ref else math.inf)
    flagged = h + 3 * sig_h < ref
    rep = ExperimentReport(
        "randomness-expansion",
        {"d": dims.d, "D": dims.D, "trials": n, "bias": bias, "bases": len(bases)},
        {"basis": b, "outcome": out},
        {"p_max": p_max, "H_min": h, "H_min_sigma": sig_h, "frequencies": freq, "flagged_biased": flagged,
         "bits_per_round": h},
        {"H_min": ref, "eve_guess_bound": 1.0 / N},
        {"H_min": dev})
    rep.passed = (not flagged) and dev <= 3
    return rep
