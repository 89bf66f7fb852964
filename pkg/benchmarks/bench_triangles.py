"""Times the compiled triangle-separation kernel against the numpy
fallback on random fractional matrices.

Usage: python3 benchmarks/bench_triangles.py [n ...]
"""

import sys
import time

import numpy as np

from mutclust import _tricheck_py

try:
    from mutclust import _tricheck
except ImportError:
    _tricheck = None


def random_symmetric(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    x[iu] = rng.uniform(0.0, 1.0, size=iu[0].size)
    return x + x.T


def time_backend(module, x: np.ndarray, repeats: int) -> tuple[float, int]:
    best = float("inf")
    found = 0
    for _ in range(repeats):
        start = time.perf_counter()
        us, vs, zs, viols = module.scan(x, 1e-6)
        best = min(best, time.perf_counter() - start)
        found = len(us)
    return best, found


def main() -> int:
    sizes = [int(a) for a in sys.argv[1:]] or [50, 100, 200, 400]
    if _tricheck is None:
        print("compiled backend unavailable; timing the fallback only")
    print(f"{'n':>6} {'triples':>12} {'numpy (s)':>12} "
          f"{'compiled (s)':>13} {'speedup':>8}")
    for n in sizes:
        x = random_symmetric(n, seed=n)
        repeats = 3 if n <= 200 else 1
        py_time, py_found = time_backend(_tricheck_py, x, repeats)
        if _tricheck is None:
            print(f"{n:>6} {py_found:>12} {py_time:>12.4f} {'-':>13} {'-':>8}")
            continue
        c_time, c_found = time_backend(_tricheck, x, repeats)
        if py_found != c_found:
            print(f"backend disagreement at n={n}: {py_found} vs {c_found}")
            return 1
        print(f"{n:>6} {py_found:>12} {py_time:>12.4f} "
              f"{c_time:>13.4f} {py_time / c_time:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
