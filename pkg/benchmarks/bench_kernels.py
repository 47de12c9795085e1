"""Time the multivariate normal cdf kernels: numba against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--n 200000]

Each case is run once to trigger compilation before timing, and the two
backends' results are compared so a speedup never hides a wrong answer.
"""

import argparse
import time

import numpy as np

from skewmix import _accel
from skewmix.numerics import mvn_cdf


def _cov(k, seed):
    a = np.random.default_rng(seed).normal(size=(k, k))
    return a @ a.T / k + 0.3 * np.eye(k)


def _best(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=200_000, help="points for the bivariate batch")
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    cases = [
        ("K=2 batch", rng.normal(size=(args.n, 2)), _cov(2, 1), 1e-8),
        ("K=3 batch", rng.normal(size=(max(args.n // 1000, 20), 3)), _cov(3, 2), 1e-8),
        ("K=5 lattice", rng.normal(size=(4, 5)), _cov(5, 3), 1e-5),
    ]
    print(f"{'case':<12} {'points':>8} {'numba s':>10} {'numpy s':>10} {'speedup':>8} {'max |diff|':>11}")
    for name, pts, cov, tol in cases:
        mvn_cdf(pts[:2], cov, tol, use_numba=True)  # compile
        t_nb, fast = _best(lambda: mvn_cdf(pts, cov, tol, use_numba=True), args.repeat)
        t_np, slow = _best(lambda: mvn_cdf(pts, cov, tol, use_numba=False), args.repeat)
        diff = float(np.max(np.abs(np.asarray(fast) - np.asarray(slow))))
        print(f"{name:<12} {len(pts):>8} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
