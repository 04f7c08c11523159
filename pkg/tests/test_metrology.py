import numpy as np
import pytest

from hybridpack.errors import ContractViolation, InvalidArgumentError
from hybridpack.hilbert import make_dims
from hybridpack.metrology import (MetrologyProbe, collective_su2, dephased_ghz_rho, dephased_ghz_trajectories,
                                  fidelity_curvature_qfi, ghz_probe, ghz_reference, noon_probe, noon_reference,
                                  qfi_dephased_ghz, qfi_mixed, qfi_pure, qfim_pure, site_sum, spin_matrices)
from hybridpack.state import basis_state


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_ghz_variance_formula(d, n):
    probe = ghz_probe(n, make_dims(d, 1))
    assert abs(qfi_pure(probe) - ghz_reference(n, d)) < 1e-9


def test_ghz_with_external_factor():
    probe = ghz_probe(2, make_dims(3, 2))
    assert abs(qfi_pure(probe) - ghz_reference(2, 3)) < 1e-9
    assert abs(fidelity_curvature_qfi(probe) - qfi_pure(probe)) < 1e-4


def test_basis_state_has_zero_qfi():
    dims = make_dims(3, 1)
    probe = MetrologyProbe(basis_state([1, 2], dims), np.diag([0.0, 1.0, 2.0]))
    assert qfi_pure(probe) < 1e-12


def test_noon_variance_is_n_squared():
    # the probe spends half its weight on each branch: 4 * n^2 / 4
    for n in (1, 2, 3):
        assert abs(qfi_pure(noon_probe(n, make_dims(2, 2))) - n**2) < 1e-9
    assert noon_reference(3) == 36
    with pytest.raises(InvalidArgumentError):
        noon_probe(2, make_dims(2, 1))


def test_mixed_qfi_reduces_to_pure():
    probe = ghz_probe(2, make_dims(3, 1))
    psi = probe.state.amplitudes
    rho = np.outer(psi, psi.conj())
    assert abs(qfi_mixed(rho, probe.G) - qfi_pure(probe)) < 1e-9


def test_qfim_diagonal_and_psd():
    dims = make_dims(3, 2)
    probe = ghz_probe(3, dims)
    F = qfim_pure(probe.state, collective_su2(3, dims))
    assert np.allclose(F, F.T)
    assert np.min(np.linalg.eigvalsh(F)) > -1e-9
    assert np.allclose(F, np.diag([8, 8, 24]), atol=1e-9)


def test_spin_matrices_commutator():
    jx, jy, jz = spin_matrices(4)
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz)


def test_dephasing():
    assert qfi_dephased_ghz(2, 2, 0.0, 1.0) == pytest.approx(8.0)
    rho = dephased_ghz_rho(2, 3, 0.0, 0.0)
    assert abs(np.trace(rho) - 1) < 1e-12
    out = dephased_ghz_trajectories(3, 2, 0.5, 1.0, 20000, seed=2)
    assert out["mc_vs_exact_rel"] < 0.05
    assert out["exact_dephased"] < ghz_reference(3, 2)
    with pytest.raises(InvalidArgumentError):
        qfi_dephased_ghz(2, 2, -1.0, 1.0)


def test_probe_contracts():
    dims = make_dims(2, 1)
    with pytest.raises(ContractViolation):
        MetrologyProbe(basis_state([0], dims), np.array([[0, 1], [0, 0]]))
    G = site_sum(np.diag([0.0, 1.0]), 3)
    assert G.shape == (8, 8) and G.toarray()[7, 7] == 3
