"""Time the 80 cubed theta constants with the numba and numpy kernels.

    python3 benchmarks/bench_theta.py [--tol 1e-12] [--repeat 3]

The numba timing excludes compilation (one warm-up call first).  The two
backends must agree; the largest difference is printed.
"""
import argparse
import time

import numpy as np

from cobletheta import _kernels, gf3, periods, theta


def sweep(tau, spec, use_numba):
    return np.array([theta.theta(theta.char_of_v(v), tau, None, spec, use_numba=use_numba)
                     for v in gf3.enumerate_S()])


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--a", type=float, nargs=5, default=[1, 2, 3, 4, 5])
    args = ap.parse_args()

    pd = periods.compute_periods(args.a)
    tau = (pd.tau + pd.tau.T) / 2
    spec = theta.TruncationSpec(tol=args.tol)
    _, count = theta.theta(theta.HALF_CHAR, tau, spec=spec, with_count=True)
    print(f"a={tuple(args.a)} tol={args.tol:g} terms per constant ~{count}")

    t_np, v_np = best_of(lambda: sweep(tau, spec, False), args.repeat)
    print(f"numpy : {t_np:8.4f} s for 80 constants")
    if not _kernels.HAVE_NUMBA:
        print("numba : unavailable (or disabled by COBLETHETA_DISABLE_NUMBA)")
        return
    t0 = time.perf_counter()
    theta.theta(theta.HALF_CHAR, tau, spec=spec, use_numba=True)
    print(f"numba : first call {time.perf_counter() - t0:.3f} s (compile or cache load)")
    t_nb, v_nb = best_of(lambda: sweep(tau, spec, True), args.repeat)
    print(f"numba : {t_nb:8.4f} s for 80 constants, speedup x{t_np / t_nb:.1f}")
    print(f"max |numba - numpy| = {np.abs(v_nb - v_np).max():.2e}")


if __name__ == "__main__":
    main()
