"""Benchmark the compiled Jacobi kernel against the pure NumPy kernel.

Both backends run the identical operation sequence, so beyond timing this
also asserts bit-identical output on every matrix in the batch.

Run:  python3 benchmarks/bench_eigen.py [--sizes 8 16 32 64] [--repeat 5]
"""

import argparse
import time

import numpy as np

from bidisk import _jacobi_py
from bidisk.psd import OFF_TOL

try:
    from bidisk import _jacobi_cy
except ImportError:
    _jacobi_cy = None


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2.0


def run_backend(kernel, h: np.ndarray):
    n = h.shape[0]
    a_re = np.ascontiguousarray(h.real.copy())
    a_im = np.ascontiguousarray(h.imag.copy())
    v_re = np.eye(n)
    v_im = np.zeros((n, n))
    scale = float(np.sqrt(a_re * a_re + a_im * a_im).max())
    tau = OFF_TOL * scale / n
    sweeps = kernel.jacobi_cycle(a_re, a_im, v_re, v_im, tau * tau, 60)
    return a_re, a_im, v_re, v_im, sweeps


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _jacobi_cy is None:
        print("compiled backend not available; build it with "
              "`python3 setup.py build_ext --inplace`")
        return 1

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>5} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}  identical")
    all_identical = True
    for n in args.sizes:
        mats = [random_hermitian(n, rng) for _ in range(args.repeat)]

        t0 = time.perf_counter()
        outs_py = [run_backend(_jacobi_py, h) for h in mats]
        t_py = (time.perf_counter() - t0) / args.repeat

        t0 = time.perf_counter()
        outs_cy = [run_backend(_jacobi_cy, h) for h in mats]
        t_cy = (time.perf_counter() - t0) / args.repeat

        identical = all(
            a[4] == b[4] and all(np.array_equal(x, y) for x, y in zip(a[:4], b[:4]))
            for a, b in zip(outs_py, outs_cy))
        all_identical &= identical
        print(f"{n:>5} {1e3 * t_py:>12.3f} {1e3 * t_cy:>14.3f} "
              f"{t_py / t_cy:>8.1f}x  {identical}")

    if not all_identical:
        print("BACKENDS DIVERGED: the kernels are out of sync")
        return 1
    print("backends produced bit-identical eigensystems on every input")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
