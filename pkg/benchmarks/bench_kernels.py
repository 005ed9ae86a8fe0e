"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--atoms 14] [--repeat 5]

Both paths are called directly, so the environment flag does not matter here.
Compilation happens once before timing.
"""
import argparse
import time

import numpy as np

from probalg import kernels as K
from probalg._accel import HAS_NUMBA


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAS_NUMBA:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")

    rng = np.random.default_rng(0)
    k = args.atoms
    w = rng.integers(1, 1000, size=k).astype(np.int64)
    sums = K._subset_sums_np(w)
    full = (1 << k) - 1
    small = (1 << min(k, 10)) - 1  # finest_split is cubic-ish in 2**k
    deltas = rng.integers(-500, 500, size=k).astype(np.int64)
    mass = rng.random(64)
    cond = rng.random((32, 64))

    cases = [
        ("subset_sums", lambda: K._subset_sums_nb(w), lambda: K._subset_sums_np(w)),
        ("balanced_split", lambda: K._balanced_split_nb(sums, np.int64(full)), lambda: K._balanced_split_np(sums, full)),
        ("finest_split", lambda: K._finest_split_nb(sums, np.int64(small)), lambda: K._finest_split_np(sums, small)),
        ("max_abs_union", lambda: K._max_abs_union_nb(deltas), lambda: K._max_abs_union_np(deltas)),
        ("weighted_entropy", lambda: K._weighted_entropy_nb(mass, cond), lambda: K._weighted_entropy_np(mass, cond)),
    ]
    print(f"{'kernel':<18}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, nb, npf in cases:
        nb()  # compile
        t_nb, t_np = best_of(nb, args.repeat), best_of(npf, args.repeat)
        print(f"{name:<18}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
