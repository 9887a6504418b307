"""Timing comparison of the jitted and pure-numpy matrix kernels.

Two measurements:

* in-process: ``numba_rref``/``numba_matmul`` against their numpy twins on
  identical random GF(q) workloads (same tables, same inputs);
* end-to-end: a full submodule enumeration in a subprocess, once per
  ``BRZETA_BACKEND`` setting, since the backend is fixed at import time.

Usage: python benchmarks/bench_backends.py [--sizes 32,64,128] [--repeats 5]
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from brzeta import _kernels, gfq  # noqa: E402

WORKLOAD = (
    "import time; import brzeta.oracle as orc; import brzeta._kernels as k; "
    "m = orc.local2d_module(2, 4); t0 = time.perf_counter(); "
    "n = len(orc.submodule_bfs(m, 3)); "
    "z = orc.empirical_zeta(orc.chain_module(3, 4, rank=2), 3); "
    "dt = time.perf_counter() - t0; "
    "print(f'{k.BACKEND} nodes={n} seconds={dt:.3f}')"
)


def time_call(fn, repeats):
    best = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return min(best), statistics.median(best)


def bench_kernels(sizes, repeats, rng):
    field = gfq.GF(4)
    t = gfq.tables(field)
    add, mul, neg, inv = t.add, t.mul, t.neg, t.inv
    rows = []
    for n in sizes:
        a = rng.integers(0, 4, size=(n, n)).astype(np.int64)
        b = rng.integers(0, 4, size=(n, n)).astype(np.int64)
        pivots = np.zeros(n, dtype=np.int64)

        def rref_with(kernel, mat=a, piv=pivots):
            kernel(mat.copy(), add, mul, neg, inv, piv.copy())

        def matmul_with(kernel, x=a, y=b):
            kernel(x, y, add, mul)

        impls = [("numpy", _kernels.numpy_rref, _kernels.numpy_matmul)]
        if _kernels.HAS_NUMBA:
            # trigger compilation outside the timed region
            _kernels.numba_rref(a.copy(), add, mul, neg, inv, pivots.copy())
            _kernels.numba_matmul(a, b, add, mul)
            impls.append(("numba", _kernels.numba_rref, _kernels.numba_matmul))
        for name, rref_k, matmul_k in impls:
            r_best, r_med = time_call(lambda: rref_with(rref_k), repeats)
            m_best, m_med = time_call(lambda: matmul_with(matmul_k), repeats)
            rows.append((n, name, r_best, r_med, m_best, m_med))
    return rows


def bench_end_to_end():
    lines = []
    for backend in ("numpy", "numba"):
        env = dict(os.environ, BRZETA_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True
        )
        lines.append(proc.stdout.strip() if proc.returncode == 0 else proc.stderr.strip())
    return lines


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="32,64,128", help="square matrix sizes")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-subprocess", action="store_true")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    print(f"active backend: {_kernels.BACKEND} (numba available: {_kernels.HAS_NUMBA})")
    print(f"{'n':>5} {'impl':>6} {'rref best':>10} {'rref med':>10} {'matmul best':>12} {'matmul med':>11}")
    for n, name, rb, rm, mb, mm in bench_kernels(sizes, args.repeats, rng):
        print(f"{n:>5} {name:>6} {rb * 1e3:>9.2f}m {rm * 1e3:>9.2f}m {mb * 1e3:>11.2f}m {mm * 1e3:>10.2f}m")

    if not args.skip_subprocess:
        print("\nend-to-end submodule enumeration (fresh interpreter per backend):")
        for line in bench_end_to_end():
            print("  " + line)


if __name__ == "__main__":
    main()
