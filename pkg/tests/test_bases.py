import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridpack.bases import (bell_basis_matrix, bell_inverse_product, bell_two_index_inverse, bell_two_index_matrix,
                              bell_vector, ghz_vector, mub_triplet, overlap_table, product_mubs, product_vs_canonical,
                              two_index_family_coincides, unbiased, xz_basis, xz_eigenvalues)
from hybridpack.errors import InvalidArgumentError
from hybridpack.gates import omega, x_matrix, z_matrix
from hybridpack.hilbert import make_dims


@pytest.mark.parametrize("N", range(2, 7))
def test_bell_orthonormal_and_complete(N):
    B = bell_basis_matrix(N)
    assert np.max(np.abs(B.conj().T @ B - np.eye(N * N))) <= 1e-10
    assert np.max(np.abs(B @ B.conj().T - np.eye(N * N))) <= 1e-9


def test_bell_inverse_expansion():
    N = 4
    for J, n in itertools.product(range(N), range(N)):
        target = np.zeros(N * N)
        target[J * N + (J + n) % N] = 1
        assert np.allclose(bell_inverse_product(N, J, n), target)


def test_bell_examples():
    v = bell_vector(2, 0, 0)
    assert np.allclose(v, np.array([1, 0, 0, 1]) / np.sqrt(2))
    with pytest.raises(InvalidArgumentError):
        bell_vector(3, 3, 0)


def test_two_index_family():
    dims = make_dims(2, 3)
    B = bell_two_index_matrix(dims)
    assert B.shape == (36, 36)
    assert np.max(np.abs(B.conj().T @ B - np.eye(36))) <= 1e-10
    target = np.zeros(36)
    target[(1 * 3 + 2) * 6 + (0 * 3 + 1)] = 1
    assert np.allclose(bell_two_index_inverse(1, 2, 1, 2, dims), target)
    assert isinstance(two_index_family_coincides(dims), bool)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_mub_triplet_unbiased(N):
    fam = mub_triplet(N)
    for a, b in itertools.combinations(fam.bases, 2):
        assert np.max(np.abs(overlap_table(a, b) - 1 / N)) <= 1e-9
    for B in fam.bases:
        assert np.max(np.abs(B.conj().T @ B - np.eye(N))) <= 1e-10


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_xz_basis_diagonalises_xz(N):
    B = xz_basis(N)
    XZ = x_matrix(N) @ z_matrix(N)
    vals = xz_eigenvalues(N)
    assert np.allclose(XZ @ B, B * vals[None, :])
    assert np.allclose(np.abs(vals), 1)


def test_product_mubs_partial():
    fam = product_mubs(mub_triplet(2), mub_triplet(3))
    assert len(fam) == 9
    assert unbiased(fam.bases[0], fam.bases[4])  # ZxZ vs XxX
    rows = product_vs_canonical(2, 3)
    assert any(r["unbiased"] for r in rows) and not all(r["unbiased"] for r in rows)


def test_mub_rejects_n1():
    with pytest.raises(InvalidArgumentError):
        mub_triplet(1)


@given(n=st.integers(2, 4), N=st.integers(2, 5))
@settings(max_examples=20, deadline=None)
def test_ghz_normalised_and_symmetric(n, N):
    v = ghz_vector(n, N)
    assert abs(np.linalg.norm(v) - 1) < 1e-12
    assert np.count_nonzero(np.abs(v) > 1e-12) == N


def test_omega_phase():
    assert abs(omega(4) - 1j) < 1e-12
