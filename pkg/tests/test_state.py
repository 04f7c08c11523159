import numpy as np
import pytest

from hybridpack.bases import bell_state
from hybridpack.errors import InvalidArgumentError
from hybridpack.gates import hybrid_swap, weyl_x
from hybridpack.hilbert import ChargeAssignment, make_dims
from hybridpack.state import (apply_local, as_rng, basis_state, computational_projectors, expectation, fidelity,
                              from_amplitudes, inner, measure_computational, measure_projective, number_operator,
                              outcome_probabilities, uniform_superposition)

DIMS = make_dims(2, 3)


def test_basis_state_examples():
    s = basis_state([0], DIMS)
    assert s.amplitudes[0] == 1 and abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12
    s5 = basis_state([5], DIMS)
    assert DIMS.split(int(np.argmax(np.abs(s5.amplitudes)))) == (1, 2)
    a, b = basis_state([1, 2], DIMS), basis_state([2, 1], DIMS)
    assert abs(inner(a, b)) == 0


def test_big_endian_ordering():
    s = basis_state([1, 2], DIMS)
    assert np.argmax(np.abs(s.amplitudes)) == 1 * 6 + 2


def test_seed_required():
    with pytest.raises(InvalidArgumentError):
        as_rng(None)


def test_apply_local_examples():
    psi = uniform_superposition(DIMS)
    assert np.allclose(apply_local(psi, np.eye(6), [0]).amplitudes, psi.amplitudes)
    for J in range(6):
        out = apply_local(basis_state([J], DIMS), weyl_x(6), [0])
        assert np.argmax(np.abs(out.amplitudes)) == (J + 1) % 6
    ab = basis_state([1, 4], DIMS)
    twice = apply_local(apply_local(ab, hybrid_swap(DIMS), [0, 1]), hybrid_swap(DIMS), [0, 1])
    assert np.allclose(twice.amplitudes, ab.amplitudes)


def test_apply_local_on_extended_register_keeps_padding():
    ch = ChargeAssignment(DIMS)
    s = basis_state([ch.leak_label(1)], DIMS, ch)
    out = apply_local(s, weyl_x(6), [0])
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_measurement_examples():
    r = measure_computational(basis_state([0], DIMS), 0, seed=1)
    assert r.outcome_label == 0 and r.probability == 1
    plus = from_amplitudes(np.array([1, 1, 0, 0, 0, 0]) / np.sqrt(2), DIMS, 1)
    probs = outcome_probabilities(plus, computational_projectors(6), [0])
    assert np.allclose(probs[:6], [0.5, 0.5, 0, 0, 0, 0])


def test_bell_half_measurement_collapses_partner():
    phi = bell_state((0, 0), DIMS)
    probs = outcome_probabilities(phi, computational_projectors(6), [0])
    assert np.allclose(probs[:6], 1 / 6)
    for seed in range(5):
        out = measure_projective(phi, computational_projectors(6), [0], seed)
        J = out.outcome_label
        partner = measure_computational(out.post_state, 1, seed)
        assert partner.outcome_label == J and abs(partner.probability - 1) < 1e-12


def test_fidelity_examples():
    psi = uniform_superposition(DIMS)
    assert abs(fidelity(psi, psi) - 1) < 1e-12
    assert fidelity(basis_state([0], DIMS), basis_state([1], DIMS)) == 0
    rot = psi.with_amplitudes(np.exp(0.7j) * psi.amplitudes)
    assert abs(fidelity(psi, rot) - 1) < 1e-12


def test_expectation_examples():
    n = number_operator(6)
    for J in range(6):
        assert abs(expectation(basis_state([J], DIMS), n, [0]) - J) < 1e-12
    assert abs(expectation(uniform_superposition(DIMS), n, [0]) - 2.5) < 1e-12
    assert basis_state([3, 1], DIMS).total_charge_expectation() == 0
    with pytest.raises(Exception):
        expectation(basis_state([0], DIMS), weyl_x(6).matrix, [0])


def test_projector_completeness():
    rng = np.random.default_rng(3)
    v = rng.normal(size=36) + 1j * rng.normal(size=36)
    s = from_amplitudes(v, DIMS, 2, normalize=True)
    assert abs(outcome_probabilities(s, computational_projectors(6), [1]).sum() - 1) < 1e-10


def test_overlapping_sites_rejected():
    with pytest.raises(InvalidArgumentError):
        apply_local(basis_state([0, 0], DIMS), hybrid_swap(DIMS), [1, 1])
