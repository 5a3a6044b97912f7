"""Benchmark the numba kernels against the pure-numpy fallback.

Imports both backend modules directly (bypassing STRUCTPROBE_BACKEND) and
times each kernel on representative problem sizes. Numba compilation is
triggered by an untimed warmup call.

Usage: python3 benchmarks/bench_kernels.py [--repeats N] [--sizes n1,n2,...]
"""

import argparse
import time

import numpy as np

from structprobe.kernels import backend_numpy

try:
    from structprobe.kernels import backend_numba
except ImportError:
    backend_numba = None


def _time(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n, d, k, rng):
    h = rng.standard_normal((n, d))
    b = rng.standard_normal((k, d)) * 0.1
    gold_d = rng.uniform(1.0, 8.0, size=(n, n))
    gold_d = (gold_d + gold_d.T) / 2.0
    np.fill_diagonal(gold_d, 0.0)
    gold_n = rng.uniform(0.0, 6.0, size=n)
    w = rng.uniform(0.0, 1.0, size=(n, n))
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    sym = rng.standard_normal((n, n))
    sym = (sym + sym.T) / 2.0
    return {
        "pairwise_sq_dists": (h,),
        "sq_norms": (h,),
        "distance_loss_grad": (b, h, gold_d),
        "depth_loss_grad": (b, h, gold_n),
        "prim_mst": (w,),
        "jacobi_eigh": (sym,),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--sizes", default="10,30,50")
    parser.add_argument("--dim", type=int, default=128)
    parser.add_argument("--rank", type=int, default=64)
    args = parser.parse_args()

    if backend_numba is None:
        print("numba backend unavailable; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'n':>4} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        cases = _cases(n, args.dim, args.rank, rng)
        for name, call_args in cases.items():
            np_fn = getattr(backend_numpy, name)
            nb_fn = getattr(backend_numba, name)
            nb_fn(*call_args)  # warmup / jit compile
            t_np = _time(np_fn, call_args, args.repeats)
            t_nb = _time(nb_fn, call_args, args.repeats)
            print(
                f"{name:<20} {n:>4} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} "
                f"{t_np / t_nb:>7.2f}x"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
