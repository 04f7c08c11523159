"""Prepare-and-measure QKD over MUBs: six-state, BB84 and B92 variants.

Single-qudit rounds are sampled from exact Born probabilities
``|<b_y|a_x>|^2`` between basis columns.
"""

from __future__ import annotations

import numpy as np

from ..bases import mub_triplet
from ..hilbert import HybridDims
from ..state import as_rng
from .report import ExperimentReport, ProtocolConfig, binomial_sigma, sigma_distance


def _born_tables(bases) -> np.ndarray:
    """``T[a, b, x, y] = |<b_y | a_x>|^2``."""
    k = len(bases)
    N = bases[0].shape[0]
    T = np.zeros((k, k, N, N))
    for a in range(k):
        for b in range(k):
            T[a, b] = (np.abs(bases[b].conj().T @ bases[a]) ** 2).T
    return T


def _sample_rows(rng, probs: np.ndarray) -> np.ndarray:
    """One categorical draw per row of ``probs``."""
    cdf = np.cumsum(probs, axis=1)
    cdf[:, -1] = 1.0
    u = rng.random(len(probs))
    return (u[:, None] > cdf).sum(axis=1)


def run_mub_qkd(dims: HybridDims, n_bases: int, trials: int, seed, eve: bool, name: str) -> ExperimentReport:
    N = dims.N
    bases = mub_triplet(N).bases[:n_bases]
    T = _born_tables(bases)
    rng = as_rng(seed)
    a_basis = rng.integers(0, n_bases, trials)
    x = rng.integers(0, N, trials)
    b_basis = rng.integers(0, n_bases, trials)
    if eve:
        e_basis = rng.integers(0, n_bases, trials)
        e_out = _sample_rows(rng, T[a_basis, e_basis, x])
        y = _sample_rows(rng, T[e_basis, b_basis, e_out])
    else:
        e_basis = np.full(trials, -1)
        e_out = np.full(trials, -1)
        y = _sample_rows(rng, T[a_basis, b_basis, x])
    sifted = a_basis == b_basis
    n_sift = int(sifted.sum())
    qber = float(np.mean(y[sifted] != x[sifted])) if n_sift else float("nan")
    aggregates = {"rounds": trials, "sifted": n_sift, "sift_rate": n_sift / trials, "qber": qber,
                  "agreement": 1 - qber if n_sift else float("nan")}
    reference = {"sift_rate": 1.0 / n_bases}
    dev = {"sift_rate": sigma_distance(n_sift / trials, 1.0 / n_bases, trials)}
    if eve:
        acc = float(np.mean(e_out == x))
        p_eve = 1.0 / n_bases + (n_bases - 1) / (n_bases * N)
        q_ref = (n_bases - 1) / n_bases * (1 - 1.0 / N)
        aggregates.update({"eve_accuracy": acc, "eve_accuracy_sigma": binomial_sigma(p_eve, trials)})
        reference.update({"eve_accuracy": p_eve, "qber": q_ref})
        dev.update({"eve_accuracy": sigma_distance(acc, p_eve, trials), "qber": sigma_distance(qber, q_ref, n_sift)})
    else:
        reference["qber"] = 0.0
    rep = ExperimentReport(
        name,
        {"d": dims.d, "D": dims.D, "trials": trials, "eve": "intercept-resend" if eve else "none", "bases": n_bases},
        {"alice_basis": a_basis, "symbol": x, "bob_basis": b_basis, "bob_outcome": y,
         "eve_basis": e_basis, "eve_outcome": e_out},
        aggregates, reference, dev)
    rep.passed = (dev["eve_accuracy"] <= 3) if eve else (qber == 0.0)
    return rep


def qkd_six_state(config: ProtocolConfig, eve: bool | str | None = None) -> ExperimentReport:
    eve = config.eve if eve is None else eve in (True, "intercept", "intercept-resend")
    return run_mub_qkd(config.dims, 3, config.trials, config.seed, bool(eve), "six-state")


def six_state_eve_reference(N: int) -> float:
    return 1.0 / 3 + 2.0 / (3 * N)


def b92(config: ProtocolConfig, eve: bool = False) -> ExperimentReport:
    """Signals ``|psi_0> = |0>`` (Z basis) and ``|psi_1> = |f_0>`` (Fourier basis).

    Bob measures Z or the Fourier basis at random; a click on any label other
    than the one excluded by the complementary signal is conclusive.
    """
    dims, trials = config.dims, config.trials
    N = dims.N
    Z, F = mub_triplet(N).bases[:2]
    signals = [Z[:, 0], F[:, 0]]
    rng = as_rng(config.seed)
    bits = rng.integers(0, 2, trials)
    meas = rng.integers(0, 2, trials)
    bob_bases = [F, Z]  # measuring F excludes psi_1, measuring Z excludes psi_0
    conclusive = np.zeros(trials, dtype=bool)
    guess = np.full(trials, -1)
    for i in range(trials):
        psi = signals[bits[i]]
        if eve:
            eb = [Z, F][rng.integers(0, 2)]
            p = np.abs(eb.conj().T @ psi) ** 2
            psi = eb[:, rng.choice(N, p=p / p.sum())]
        B = bob_bases[meas[i]]
        p = np.abs(B.conj().T @ psi) ** 2
        y = rng.choice(N, p=p / p.sum())
        if y != 0:
            conclusive[i] = True
            guess[i] = 0 if meas[i] == 0 else 1
    overlap = float(abs(np.vdot(signals[0], signals[1])) ** 2)
    rate = float(conclusive.mean())
    err = float(np.mean(guess[conclusive] != bits[conclusive])) if conclusive.any() else float("nan")
    ref = (1 - overlap) / 2  # Bob picks the excluding basis half the time
    rep = ExperimentReport(
        "b92", {"d": dims.d, "D": dims.D, "trials": trials, "eve": eve},
        {"bit": bits, "bob_basis": meas, "guess": guess},
        {"conclusive_rate": rate, "qber": err, "signal_overlap": overlap},
        {"conclusive_rate": ref, "qber": 0.0},
        {"conclusive_rate": sigma_distance(rate, ref, trials)})
    rep.passed = rep.deviation_sigma["conclusive_rate"] <= 3 and (eve or err == 0.0)
    return rep


def qkd_reduce(variant: str, config: ProtocolConfig, eve: bool | None = None) -> ExperimentReport:
    eve = config.eve if eve is None else eve
    if variant == "bb84":
        return run_mub_qkd(config.dims, 2, config.trials, config.seed, bool(eve), "bb84")
    if variant == "b92":
        return b92(config, bool(eve))
    raise ValueError(f"unknown QKD variant {variant!r}")
