"""Compare the numba kernels with the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--size 120] [--bound 8]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from clustercat import _kernels
from clustercat.quiver import Quiver


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=120, help="side of the random matrix for rank_mod_p")
    ap.add_argument("--bound", type=int, default=8, help="entry bound for the Tits-form scan")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    mat = rng.integers(-3, 4, size=(args.size, args.size + 7), dtype=np.int64)
    euler = np.array(Quiver(4, ((1, 2), (2, 3), (3, 4), (1, 4))).euler_matrix(), dtype=np.int64)

    cases = {
        "rank_mod_p": lambda nb: _kernels.rank_mod_p(mat, use_numba=nb),
        "tits_unit_vectors": lambda nb: _kernels.tits_unit_vectors(euler, args.bound, use_numba=nb),
    }
    print(f"numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'kernel':<20}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, fn in cases.items():
        ref = fn(False)
        t_np = _best(lambda: fn(False), args.repeat)
        if _kernels.HAVE_NUMBA:
            got = fn(True)  # also triggers compilation outside the timed runs
            same = np.array_equal(np.asarray(ref), np.asarray(got))
            if not same:
                raise SystemExit(f"{name}: numba and numpy results differ")
            t_nb = _best(lambda: fn(True), args.repeat)
            print(f"{name:<20}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<20}{t_np:>12.4f}{'n/a':>12}{'':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
