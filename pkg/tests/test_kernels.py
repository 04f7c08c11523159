import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridpack import kernels
from hybridpack.kernels import numba_backend, numpy_backend

needs_numba = pytest.mark.skipif(numba_backend is None, reason="numba backend unavailable")


def _rand_state(rng, ld, n):
    v = rng.normal(size=ld**n) + 1j * rng.normal(size=ld**n)
    return v / np.linalg.norm(v)


@needs_numba
@given(ld=st.integers(2, 4), n=st.integers(1, 4), seed=st.integers(0, 10_000), k=st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_apply_matrix_backends_agree(ld, n, seed, k):
    if k > n:
        k = n
    rng = np.random.default_rng(seed)
    amps = _rand_state(rng, ld, n)
    sites = tuple(int(s) for s in rng.permutation(n)[:k])
    m = rng.normal(size=(ld**k, ld**k)) + 1j * rng.normal(size=(ld**k, ld**k))
    a = numpy_backend.apply_matrix(amps, ld, n, m, sites)
    b = numba_backend.apply_matrix(amps, ld, n, m, sites)
    assert np.allclose(a, b, atol=1e-12)


@needs_numba
@given(ld=st.integers(2, 5), n=st.integers(1, 4), seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_monomial_and_marginal_backends_agree(ld, n, seed):
    rng = np.random.default_rng(seed)
    amps = _rand_state(rng, ld, n)
    site = int(rng.integers(n))
    perm = rng.permutation(ld)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, ld))
    a = numpy_backend.apply_monomial(amps, ld, n, site, perm, phases)
    b = numba_backend.apply_monomial(amps, ld, n, site, perm, phases)
    assert np.allclose(a, b, atol=1e-12)
    p = np.abs(amps) ** 2
    assert np.allclose(numpy_backend.site_marginal(p, ld, n, site), numba_backend.site_marginal(p, ld, n, site))


@needs_numba
def test_syndromes_backends_agree():
    rng = np.random.default_rng(0)
    checks = rng.integers(0, 5, size=(8, 18))
    errors = rng.integers(0, 5, size=(100, 18))
    a = numpy_backend.weyl_syndromes(checks, errors, 5)
    b = numba_backend.weyl_syndromes(checks, errors, 5)
    assert np.array_equal(a, b)


def test_apply_matrix_matches_kron():
    rng = np.random.default_rng(1)
    amps = _rand_state(rng, 3, 3)
    m = rng.normal(size=(3, 3))
    full = np.kron(np.kron(np.eye(3), m), np.eye(3))
    assert np.allclose(kernels.apply_matrix(amps, 3, 3, m, (1,)), full @ amps)


def test_env_flag_forces_numpy():
    env = dict(os.environ, HYBRIDPACK_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import hybridpack.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
