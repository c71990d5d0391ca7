"""Compare the numba and numpy implementations of the two hot kernels.

    python3 benchmarks/bench_kernels.py [--n 512] [--nz 2000] [--repeat 3]

The Gram kernel is timed on the real folded torus data used by det7; the
Jacobi kernel on a random symmetric matrix. Each numba kernel is warmed up
once so compilation is excluded.
"""

import argparse
import time

import numpy as np

from boundstate_atlas import kernels
from boundstate_atlas.lattice import Quasimomentum
from boundstate_atlas.quadrature import _node_data


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=512, help="torus grid size")
    ap.add_argument("--nz", type=int, default=2000, help="number of z values per Gram batch")
    ap.add_argument("--jacobi-size", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    b1, b2 = Quasimomentum(0.7, 0.0).hopping
    F, _, wt, E = _node_data(args.n, b1, b2, "full")
    cases = {
        f"gram   n={args.n} nz={args.nz}": (np.concatenate([-np.geomspace(1e-3, 1e3, args.nz // 2),
                                                          8 + np.geomspace(1e-3, 1e3, args.nz - args.nz // 2)]),),
        f"gram   n={args.n} nz=1": (np.array([-0.25]),),
    }
    rng = np.random.default_rng(0)
    a = rng.normal(size=(args.jacobi_size, args.jacobi_size))
    a = a + a.T

    kernels.weighted_gram_numba(F, wt, E, np.array([-1.0]))
    kernels.jacobi_eigenvalues_numba(a[:4, :4])

    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'ratio':>7s}")
    for label, (zs,) in cases.items():
        tn = best_of(lambda: kernels.weighted_gram_numba(F, wt, E, zs), args.repeat)
        tp = best_of(lambda: kernels.weighted_gram_numpy(F, wt, E, zs), args.repeat)
        print(f"{label:34s} {tn:10.4f} {tp:10.4f} {tp / tn:7.2f}")
    tn = best_of(lambda: kernels.jacobi_eigenvalues_numba(a), args.repeat)
    tp = best_of(lambda: kernels.jacobi_eigenvalues_numpy(a), args.repeat)
    print(f"{'jacobi m=' + str(args.jacobi_size):34s} {tn:10.4f} {tp:10.4f} {tp / tn:7.2f}")
    a, b = kernels.weighted_gram_numba(F, wt, E, zs), kernels.weighted_gram_numpy(F, wt, E, zs)
    rel = (np.abs(a - b).max(axis=(1, 2)) / np.abs(b).max(axis=(1, 2))).max()
    print(f"max relative numba/numpy difference on the last Gram batch: {rel:.2e}")


if __name__ == "__main__":
    main()
