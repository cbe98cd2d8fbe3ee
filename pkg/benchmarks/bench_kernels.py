"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

The fallback is selected per call through ADETORELLI_DISABLE_NUMBA, so both
paths run in one process.  The first numba call is excluded (compilation).
"""

import argparse
import os
import time

import numpy as np

from adetorelli import _kernels, linalg
from adetorelli.families import fermat
from adetorelli.jacobian import HypersurfaceInstance, jacobian_piece

P = _kernels.PRIMES[0]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    A = rng.integers(0, P, size=(400, 600), dtype=np.int64)
    B = rng.integers(0, P, size=(600, 300), dtype=np.int64)
    yield "eliminate_mod_p 400x600", lambda: _kernels.eliminate_mod_p(A.copy(), P, True)
    yield "matmul_mod 400x600 @ 600x300", lambda: _kernels.matmul_mod(A, B, P)
    H = HypersurfaceInstance.build(fermat(4, 6), 4)
    J = jacobian_piece(H, 10).subspace
    yield "rank of J_10, sextic in P^5", lambda: linalg.rank(J, prepass=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy path is available")
    print(f"{'case':36s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fn in cases():
        os.environ["ADETORELLI_DISABLE_NUMBA"] = "0"
        fn()  # warm-up / jit
        t_nb = best_of(fn, args.repeat)
        os.environ["ADETORELLI_DISABLE_NUMBA"] = "1"
        t_np = best_of(fn, args.repeat)
        print(f"{name:36s} {t_nb:10.3f} {t_np:10.3f} {t_np / t_nb:8.1f}x")
    os.environ.pop("ADETORELLI_DISABLE_NUMBA", None)


if __name__ == "__main__":
    main()
