import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridpack.hilbert import ChargeAssignment, make_dims
from hybridpack.protocols import (ProtocolConfig, cglmp_bell, cglmp_coefficients, cglmp_value,
                                  claimed_quantum_value, key_rate, lhv_maximum, optimal_labelling, probability_table,
                                  qkd_reduce, qkd_six_state, qsdc_run, randomness_expand, secret_share,
                                  six_state_eve_reference, superdense, superdense_capacity, superdense_report,
                                  teleport)
from hybridpack.protocols.teleport import bob_uncorrected_expected, teleport_branch
from hybridpack.state import from_amplitudes


def _random_state(dims, seed, charge=None):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
    if charge is not None:
        v = np.concatenate([v, np.zeros(charge.local_dim_ext - dims.N)])
    return from_amplitudes(v / np.linalg.norm(v), dims, 1, charge)


@pytest.mark.parametrize("d,D", [(2, 1), (2, 3)])
def test_teleport_all_branches(d, D):
    dims = make_dims(d, D)
    rep = teleport(_random_state(dims, 1))
    assert rep.aggregates["branches"] == dims.N**2
    assert rep.aggregates["min_fidelity"] >= 1 - 1e-9
    assert abs(rep.aggregates["probability_sum"] - 1) < 1e-9
    assert np.allclose(rep.records["probability"], 1 / dims.N**2)


def test_teleport_uncorrected_branch_form():
    dims = make_dims(3, 1)
    psi = _random_state(dims, 2)
    p, f, _ = teleport_branch(psi, 1, 2)
    assert abs(p - 1 / 9) < 1e-12 and f > 1 - 1e-12
    exp = bob_uncorrected_expected(psi.amplitudes, 1, 2)
    assert abs(np.linalg.norm(exp) - 1) < 1e-12


def test_teleport_sampled_and_gv():
    dims = make_dims(2, 1)
    rep = teleport(_random_state(dims, 0), exhaustive=False, trials=5, seed=3)
    assert rep.passed
    gv = teleport(_random_state(dims, 0, ChargeAssignment(dims)), exhaustive=False, trials=2, seed=3, inject_gv=True)
    assert gv.aggregates["gv_detected"]


@pytest.mark.parametrize("N", [2, 3, 5])
def test_superdense_exact(N):
    dims = make_dims(N, 1)
    assert all(superdense(m, dims, seed=m) == m for m in range(N * N))
    rep = superdense_report(dims)
    assert rep.passed and rep.aggregates["capacity_bits"] == superdense_capacity(N) == 2 * math.log2(N)


def test_six_state_no_eve():
    rep = qkd_six_state(ProtocolConfig(make_dims(2, 3), trials=3000, seed=1))
    assert rep.aggregates["qber"] == 0.0
    assert abs(rep.aggregates["sift_rate"] - 1 / 3) < 0.05


def test_six_state_eve_reference():
    assert six_state_eve_reference(2) == pytest.approx(2 / 3)
    rep = qkd_six_state(ProtocolConfig(make_dims(3, 1), trials=5000, seed=4), eve=True)
    assert rep.deviation_sigma["eve_accuracy"] <= 3
    assert rep.aggregates["qber"] > 0


def test_bb84_and_b92():
    cfg = ProtocolConfig(make_dims(2, 1), trials=2000, seed=0)
    assert qkd_reduce("bb84", cfg).aggregates["qber"] == 0.0
    b = qkd_reduce("b92", cfg)
    assert b.aggregates["qber"] == 0.0 and b.passed
    with pytest.raises(ValueError):
        qkd_reduce("e91", cfg)


def test_cglmp_coefficients_and_lhv():
    assert lhv_maximum(2) == pytest.approx(2.0)
    assert lhv_maximum(3) == pytest.approx(2.0)
    C = cglmp_coefficients(3)
    assert C.shape == (2, 2, 3, 3)


@pytest.mark.parametrize("N", [2, 3])
def test_cglmp_violation(N):
    I, rep = cglmp_bell(make_dims(N, 1))
    assert I > 2
    assert rep.reference["claimed_quantum_value"] == pytest.approx(claimed_quantum_value(N))
    P, _ = probability_table(N)
    best, _ = optimal_labelling(P)
    assert best == pytest.approx(I)
    assert np.allclose(P.sum(axis=(2, 3)), 1)


def test_cglmp_qubit_tsirelson():
    I, _ = cglmp_bell(make_dims(2, 1))
    assert I == pytest.approx(2 * math.sqrt(2), abs=1e-9)


def test_cglmp_sampling_deterministic():
    a = cglmp_bell(make_dims(2, 1), samples=200, seed=3)[1].to_json()
    b = cglmp_bell(make_dims(2, 1), samples=200, seed=3)[1].to_json()
    assert a == b


def test_key_rate_limits():
    assert key_rate(claimed_quantum_value(3), 3) == pytest.approx(math.log2(3))
    assert key_rate(4.0, 2) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [3, 4])
def test_secret_sharing_honest(n):
    rep = secret_share(n, make_dims(3, 1), trials=2000, seed=1)
    assert rep.aggregates["success_rate"] == 1.0


def test_secret_sharing_eve():
    rep = secret_share(3, make_dims(2, 2), trials=20000, seed=2, eve=True)
    assert rep.deviation_sigma["eve_accuracy"] <= 3
    assert rep.aggregates["disturbance"] > 0
    with pytest.raises(ValueError):
        secret_share(3, make_dims(2, 1), M_bases=3)


def test_randomness_uniform_and_biased():
    cfg = ProtocolConfig(make_dims(2, 1), trials=20000, seed=5)
    fair = randomness_expand(cfg)
    assert not fair.aggregates["flagged_biased"]
    assert abs(fair.aggregates["H_min"] - 1) < 0.05
    assert randomness_expand(cfg, bias=0.2).aggregates["flagged_biased"]


def test_qsdc_honest_and_eve():
    dims = make_dims(2, 2)
    cfg = ProtocolConfig(dims, trials=4000, seed=1)
    honest = qsdc_run(cfg)
    assert honest.aggregates["plaintext_exact"] and not honest.aggregates["aborted"]
    attacked = qsdc_run(cfg, eve=True)
    assert attacked.aggregates["aborted"]
    assert attacked.deviation_sigma["eve_accuracy_model"] <= 3
    noisy = qsdc_run(cfg, p_noise=0.05)
    assert not noisy.aggregates["aborted"]


@given(seed=st.integers(0, 2**16))
@settings(max_examples=10, deadline=None)
def test_protocol_reports_deterministic(seed):
    cfg = ProtocolConfig(make_dims(2, 1), trials=300, seed=seed)
    assert qkd_six_state(cfg, eve=True).to_json() == qkd_six_state(cfg, eve=True).to_json()
    assert qsdc_run(cfg).to_json() == qsdc_run(cfg).to_json()
