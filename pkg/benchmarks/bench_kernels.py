"""Time the numba kernels against the numpy fallback on representative inputs.

Run with ``python benchmarks/bench_kernels.py``.  Each kernel is called once to
trigger compilation, then timed as the best of several repeats.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from coarse_criteria._accel import NUMBA_AVAILABLE, numba_kernels, numpy_kernels


def _inputs(n_labels: int, n_max: int, seed: int):
    rng = np.random.default_rng(seed)
    ranks = rng.integers(0, 5, size=n_labels).astype(np.int64)
    table = numpy_kernels.choice_from_ranks(ranks)
    beats = np.zeros(n_labels, dtype=np.int64)
    for x in range(n_labels):
        for y in range(n_labels):
            if ranks[x] >= ranks[y]:
                beats[x] |= 1 << y
    maximal = numpy_kernels.maximal_sets(beats)
    units = np.arange(2, 21, dtype=np.int64) ** 2
    return {
        "choice_from_ranks": (ranks,),
        "maximal_sets": (beats,),
        "interchange_matrix": (table, n_labels),
        "first_violation": (table, maximal),
        "radix_sweep": (units, n_max, np.int64(0)),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--labels", type=int, default=14, help="domain size for subset-lattice kernels")
    ap.add_argument("--nmax", type=int, default=200_000, help="range for the radix sweep")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    inputs = _inputs(args.labels, args.nmax, seed=0)
    print(f"{'kernel':<20}{'numpy (ms)':>14}{'numba (ms)':>14}{'speedup':>10}")
    for name, call_args in inputs.items():
        fn_np, fn_nb = getattr(numpy_kernels, name), getattr(numba_kernels, name)
        fn_nb(*call_args)  # compile
        t_np = min(timeit.repeat(lambda: fn_np(*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: fn_nb(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<20}{t_np * 1e3:>14.2f}{t_nb * 1e3:>14.2f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
