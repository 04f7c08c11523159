"""Compare the numba kernels with the numpy reference path.

Run with ``python benchmarks/bench_kernels.py``. First calls are excluded so
JIT compilation does not count. Results are checked for agreement before timing.
"""

import argparse
import time

import numpy as np

from hybridpack.kernels import _numpy as npk

try:
    from hybridpack.kernels import _numba as nbk
except ImportError:  # numba unavailable
    nbk = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(rng):
    ld, n = 6, 6
    amps = rng.normal(size=ld**n) + 1j * rng.normal(size=ld**n)
    amps /= np.linalg.norm(amps)
    m2 = np.linalg.qr(rng.normal(size=(ld * ld, ld * ld)) + 1j * rng.normal(size=(ld * ld, ld * ld)))[0]
    perm = rng.permutation(ld)
    phases = np.exp(2j * np.pi * rng.random(ld))
    checks = rng.integers(0, 3, size=(40, 50)).astype(np.int64)
    errors = rng.integers(0, 3, size=(20000, 50)).astype(np.int64)
    probs = np.abs(amps) ** 2
    return {
        "apply_matrix 2-site (6^6)": lambda k: k.apply_matrix(amps, ld, n, m2, [1, 4]),
        "apply_monomial (6^6)": lambda k: k.apply_monomial(amps, ld, n, 2, perm, phases),
        "weyl_syndromes 20000x50": lambda k: k.weyl_syndromes(checks, errors, 3),
        "site_marginal (6^6)": lambda k: k.site_marginal(probs, ld, n, 3),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for name, call in cases(rng).items():
        ref = call(npk)
        t_np = best_of(lambda: call(npk), args.repeat)
        if nbk is None:
            print(f"{name:32s} {t_np * 1e3:12.3f} {'n/a':>12s} {'':>8s}")
            continue
        out = call(nbk)  # compiles
        assert np.allclose(out, ref), name
        t_nb = best_of(lambda: call(nbk), args.repeat)
        print(f"{name:32s} {t_np * 1e3:12.3f} {t_nb * 1e3:12.3f} {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
