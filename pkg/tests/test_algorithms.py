import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridpack.algorithms import (FactoringInstance, GroverPlan, HHLInstance, ballistic_exponent, block_phases,
                                   circuit_unitary, control_distribution, convergents, ctqw_run, cycle_laplacian,
                                   cycle_shifts, dtqw_run, dtqw_step, eigenphase, factors_from_order, grover_search,
                                   grover_coin, hadamard_coin, hhl_solve, internal_reduced, modmul_gate,
                                   momentum_blocks, order_from_sample, phase_scale, position_variance, qft_apply,
                                   qft_circuit, qft_matrix, qpe_estimate, qpe_kernel, rotation_model, shift_matrix,
                                   shor_order_find, time_averaged)
from hybridpack.errors import ContractViolation, InvalidArgumentError
from hybridpack.gates import z_matrix
from hybridpack.hilbert import ChargeAssignment, commutes_with_charge, make_dims
from hybridpack.state import basis_state, uniform_superposition


@pytest.mark.parametrize("N,n", [(2, 3), (3, 2), (6, 1), (4, 2)])
def test_qft_circuit_matches_dense(N, n):
    F = qft_matrix(N, n)
    assert np.allclose(F.conj().T @ F, np.eye(N**n))
    assert np.max(np.abs(circuit_unitary(qft_circuit(N, n), N, n) - F)) < 1e-10
    assert np.max(np.abs(circuit_unitary(qft_circuit(N, n, inverse=True), N, n) - F.conj().T)) < 1e-10


def test_qft_of_zero_is_uniform():
    dims = make_dims(3, 1)
    out = qft_apply(basis_state([0, 0], dims))
    assert np.allclose(out.amplitudes, uniform_superposition(dims, 2).amplitudes)
    back = qft_apply(out, inverse=True, method="circuit")
    assert np.allclose(back.amplitudes, basis_state([0, 0], dims).amplitudes)


@given(theta=st.floats(0, 1, exclude_max=True), N=st.integers(2, 3), n_c=st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_qpe_kernel_normalised(theta, N, n_c):
    p = qpe_kernel(theta, n_c, N)
    assert abs(p.sum() - 1) < 1e-10


def test_qpe_simulation_matches_kernel():
    rng = np.random.default_rng(0)
    th = rng.uniform(size=3)
    U = np.diag(np.exp(2j * np.pi * th))
    psi = np.array([0, 1, 0], dtype=complex)
    assert abs(eigenphase(U, psi) - th[1]) < 1e-12
    assert np.allclose(qpe_estimate(U, psi, 2, 3), qpe_kernel(th[1], 2, 3), atol=1e-12)
    exact = qpe_estimate(z_matrix(3), np.array([0, 1, 0]), 1, 3)
    assert abs(exact[1] - 1) < 1e-12


@pytest.mark.parametrize("N", [4, 16, 64])
def test_grover_closed_form(N):
    plan = GroverPlan.make(N, marked=N - 1)
    p, psi, amps = grover_search(plan, trace=True)
    assert abs(p - plan.closed_form()) < 1e-10
    assert np.allclose(np.abs(amps), np.abs(rotation_model(plan, plan.k)), atol=1e-10)
    assert abs(np.linalg.norm(psi) - 1) < 1e-12


def test_grover_n4_exact_and_dims():
    p, _ = grover_search(GroverPlan.make(4, 2, k=1), dims=make_dims(2, 1))
    assert abs(p - 1) < 1e-12
    with pytest.raises(InvalidArgumentError):
        grover_search(GroverPlan.make(5, 0), dims=make_dims(2, 1))


def test_walk_unitarity_and_momentum():
    dims = make_dims(2, 7)
    V = dtqw_step(hadamard_coin(), cycle_shifts(7), dims).matrix
    assert np.allclose(V.conj().T @ V, np.eye(14))
    G = grover_coin(3)
    assert np.allclose(G @ G, np.eye(3))
    blocks, off = momentum_blocks(V, dims)
    assert off < 1e-10
    assert np.allclose(np.abs(np.exp(1j * block_phases(blocks))), 1)
    with pytest.raises(InvalidArgumentError):
        shift_matrix([np.array([0, 0, 1])], 3)


def test_walk_ballistic_spread():
    D, T = 201, 60
    dims = make_dims(2, D)
    init = np.zeros(2 * D, dtype=complex)
    init[D // 2] = 1 / math.sqrt(2)
    init[D + D // 2] = 1j / math.sqrt(2)
    dists = dtqw_run(T, init, hadamard_coin(), cycle_shifts(D), dims)
    assert np.allclose(dists.sum(axis=1), 1)
    var = np.array([position_variance(p, D // 2) for p in dists])
    assert 1.8 < ballistic_exponent(var) < 2.1


def test_time_average_on_triangle():
    dims = make_dims(2, 3)
    V = dtqw_step(hadamard_coin(), cycle_shifts(3), dims).matrix
    init = np.kron([1, 1j], [1, 0, 0]) / math.sqrt(2)
    M = time_averaged(200, init, V)
    pos = M.reshape(2, 3).sum(axis=0)
    assert abs(M.sum() - 1) < 1e-12
    assert np.max(np.abs(pos - 1 / 3)) < 0.02


def test_ctqw_conserves_probability():
    L = cycle_laplacian(5)
    init = np.kron([1, 0], np.eye(5)[0])
    dist, psi = ctqw_run(L, 1.3, init, d=2)
    assert abs(dist.sum() - 1) < 1e-12
    rho = internal_reduced(psi, 2)
    assert abs(rho[0, 0] - 1) < 1e-12
    with pytest.raises(InvalidArgumentError):
        ctqw_run(np.triu(np.ones((3, 3))), 1.0, np.eye(3)[0])


def test_shor_primitives():
    assert list(convergents(7, 16))[-1] == (7, 16)
    assert order_from_sample(4, 16, 7, 15) == 4
    assert sorted(factors_from_order(7, 4, 15)) == [3, 5]
    inst = FactoringInstance(15, 7)
    probs = control_distribution(inst)
    assert abs(probs.sum() - 1) < 1e-10
    assert commutes_with_charge(modmul_gate(inst), ChargeAssignment(make_dims(2, 1)))
    with pytest.raises(InvalidArgumentError):
        FactoringInstance(13, 2)


def test_shor_factors_fifteen():
    out = shor_order_find(FactoringInstance(15, 7), seed=0, trials=20)
    assert out["successes"] >= 10
    assert sorted(out["factors"]) == [3, 5]


def test_hhl_instances():
    x, res, info = hhl_solve(HHLInstance(np.diag([1.0, 2.0]), np.array([1.0, 1.0]), 1.0, 2))
    assert info["fidelity"] > 1 - 1e-9 and res < 1e-9
    rng = np.random.default_rng(1)
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    A = Q @ np.diag([1.0, 2.0, 3.0, 5.0]) @ Q.T
    b = rng.normal(size=4)
    x, res, info = hhl_solve(HHLInstance(A, b, 1.0, 3))
    direct = np.linalg.solve(A, b)
    assert abs(np.vdot(direct / np.linalg.norm(direct), x)) ** 2 > 1 - 1e-9
    assert 0 < info["success_probability"] <= 1


def test_hhl_contracts():
    with pytest.raises(ContractViolation):
        HHLInstance(np.diag([1.0, 2.0]), np.ones(2), 1.5, 2)
    with pytest.raises(InvalidArgumentError):
        HHLInstance(np.diag([-1.0, 2.0]), np.ones(2), 0.5, 2)
    with pytest.raises(InvalidArgumentError):
        phase_scale([1.0, 2.0, 9.0], 3)
    assert phase_scale([2.0, 4.0], 2) == pytest.approx(2.0)
