"""Package-wide tolerances and backend selection."""

import os

#: Tolerance for exact linear-algebra identities on library gates.
TOL_EXACT = 1e-12
#: Tolerance for composed circuits and normalisation checks.
TOL_CIRCUIT = 1e-9
#: Normalisation tolerance enforced after public state operations.
TOL_NORM = 1e-10

#: Set ``HYBRIDPACK_DISABLE_NUMBA=1`` to force the pure-numpy kernels.
DISABLE_NUMBA_ENV = "HYBRIDPACK_DISABLE_NUMBA"


def numba_requested() -> bool:
    return os.environ.get(DISABLE_NUMBA_ENV, "").strip().lower() not in {"1", "true", "yes", "on"}
