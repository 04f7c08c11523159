import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridpack.errors import InvalidArgumentError
from hybridpack.gates import library
from hybridpack.hilbert import ChargeAssignment, commutes_with_charge, make_dims
from hybridpack.noise import (UNBOUNDED, NoiseParams, WeylChannel, apply_gv_error, apply_leakage, apply_weyl_error,
                              effective_rate, flag_outcome, gv_event_probability, leaked_fraction_mc, lru_interval_bound,
                              lru_reset, measure_sector, sample_weyl_error, sample_weyl_errors, threshold_bound,
                              total_charge_distribution)
from hybridpack.state import basis_state, from_amplitudes, reduced_probabilities

DIMS = make_dims(2, 3)


def test_identity_channel():
    ch = WeylChannel.identity(4)
    assert all(sample_weyl_error(ch, s) == (0, 0) for s in range(20))


def test_uniform_channel_frequencies():
    N, p, n = 3, 0.2, 100_000
    draws = sample_weyl_errors(WeylChannel.uniform(N, p), n, seed=7)
    q = p / (N * N - 1)
    sigma = math.sqrt(q * (1 - q) / n)
    for s in range(N):
        for t in range(N):
            if (s, t) == (0, 0):
                continue
            f = np.mean((draws[:, 0] == s) & (draws[:, 1] == t))
            assert abs(f - q) < 3.5 * sigma


def test_channel_validation():
    with pytest.raises(InvalidArgumentError):
        WeylChannel(2, np.ones((2, 2)))
    with pytest.raises(InvalidArgumentError):
        NoiseParams(p_gc=1.5)
    with pytest.raises(InvalidArgumentError):
        NoiseParams.from_dict({"bogus": 1})


@given(s=st.integers(0, 5), t=st.integers(0, 5), J=st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_gc_errors_preserve_charge(s, t, J):
    ch = ChargeAssignment(DIMS)
    st0 = basis_state([J, 0], DIMS, ch)
    out = apply_weyl_error(st0, 0, s, t)
    assert total_charge_distribution(out) == {0: pytest.approx(1.0)}


def test_gv_probability_examples():
    assert gv_event_probability(NoiseParams(p_gv0=0.3)) == 0.3
    assert gv_event_probability(NoiseParams(p_gv0=0.3, gap_over_kT=800)) == 0.0
    assert abs(gv_event_probability(NoiseParams(p_gv0=0.1, gap_over_kT=math.log(10))) - 0.01) < 1e-15


def test_gv_event_detected():
    ch = ChargeAssignment(DIMS)
    s = basis_state([0], DIMS, ch)
    same, ev = apply_gv_error(s, 0, NoiseParams(), seed=0)
    assert not ev and np.allclose(same.amplitudes, s.amplitudes)
    hit, ev = apply_gv_error(s, 0, seed=0, force=True)
    assert ev
    Q, _ = measure_sector(hit, seed=1)
    assert Q != 0
    for g in library(DIMS):
        assert commutes_with_charge(g, ch)


def test_gv_needs_charged_labels():
    ch = ChargeAssignment(DIMS, charged=())
    with pytest.raises(InvalidArgumentError):
        apply_gv_error(basis_state([0], DIMS, ch), 0, seed=0, force=True)


def test_leakage_and_reset():
    ch = ChargeAssignment(DIMS)
    s = basis_state([DIMS.merge(1, 2)], DIMS, ch)
    same, leaked = lru_reset(s, 0)
    assert not leaked and np.allclose(same.amplitudes, s.amplitudes)
    assert flag_outcome(s, 0) == 1
    leaked_state, hit = apply_leakage(s, 0, 1.0, seed=3)
    assert hit and flag_outcome(leaked_state, 0) == -1
    fixed, leaked = lru_reset(leaked_state, 0)
    assert leaked
    assert np.argmax(reduced_probabilities(fixed, [0])) == DIMS.merge(1, 0)


def test_leak_preserves_internal_coherence():
    ch = ChargeAssignment(DIMS)
    v = np.zeros(ch.local_dim_ext, dtype=complex)
    v[DIMS.merge(0, 1)] = v[DIMS.merge(1, 1)] = 1 / math.sqrt(2)
    s = from_amplitudes(v, DIMS, 1, ch)
    out, _ = apply_leakage(s, 0, 1.0, seed=0)
    a = out.amplitudes
    assert abs(a[ch.leak_label(0)] - v[DIMS.merge(0, 1)]) < 1e-12
    assert abs(a[ch.leak_label(1)] - v[DIMS.merge(1, 1)]) < 1e-12


def test_budget_examples():
    b = effective_rate(NoiseParams(p_gc=0.001, p_leak=0.0001), 10)
    assert abs(b.p_eff - 0.002) < 1e-12
    assert effective_rate(NoiseParams(p_gc=0.003), 99).p_eff == 0.003
    assert lru_interval_bound(NoiseParams(p_gc=0.001, p_leak=0.0005), 0.01) == 18
    assert lru_interval_bound(NoiseParams(p_gc=0.001), 0.01) is UNBOUNDED


def test_threshold_formula():
    assert threshold_bound(6, math.inf) == pytest.approx(0.1)
    assert threshold_bound(2, 0.0) == 0.0
    assert threshold_bound(2, math.inf) == pytest.approx(0.5)
    with pytest.raises(InvalidArgumentError):
        threshold_bound(1, 1.0)


@pytest.mark.parametrize("p,t_L", [(0.01, 10), (0.05, 5)])
def test_leak_fraction_binomial(p, t_L):
    trials = 20_000
    f = leaked_fraction_mc(p, t_L, trials, seed=11)
    q = 1 - (1 - p) ** t_L
    assert abs(f - q) < 3 * math.sqrt(q * (1 - q) / trials)
