"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 101,401,1001]

The first numba call of each kernel (compilation or cache load) is excluded.
"""
import argparse
import time

import numpy as np

from anticore import _accel
from anticore.chain import ChainSpec, build_hamiltonian
from anticore.itc import itc_matrix
from anticore.kernels import abs_overlap, four_point_scan, transfer_probabilities, tridiagonal_eigh
from anticore.spectral import spectrum


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(sizes):
    for n in sizes:
        h = build_hamiltonian(ChainSpec(n, 10.0))
        yield f"tridiagonal QL, N={n}", lambda nb, h=h: tridiagonal_eigh(h.diag, h.offdiag, use_numba=nb)
        v = spectrum(ChainSpec(n)).eigenvectors
        yield f"|V||V|^T overlap, N={n}", lambda nb, v=v: abs_overlap(v, use_numba=nb)
    dec = spectrum(ChainSpec(31))
    t = np.arange(2001) * 0.05
    yield "p_t grid, N=31, 2001 times", lambda nb: transfer_probabilities(dec.eigenvalues, dec.eigenvectors, t, use_numba=nb)
    d = itc_matrix(ChainSpec(31)).distance
    yield "four-point exhaustive, N=31", lambda nb: four_point_scan(d, use_numba=nb)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="101,401,1001")
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'kernel':34s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s}")
    for name, fn in cases(sizes):
        fn(True)  # warm up / compile
        t_np = best_of(lambda: fn(False), args.repeat)
        t_nb = best_of(lambda: fn(True), args.repeat)
        print(f"{name:34s} {t_np:11.5f} {t_nb:11.5f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
