#!/usr/bin/env python3
"""Compare the numba and numpy kernel flavours.

Two parts:

* kernel timings, calling ``kernels.numba_impl`` and ``kernels.numpy_impl``
  side by side on identical inputs (first call excluded, so JIT compile time
  is not counted);
* end-to-end timings of a few library workloads, each run in a fresh
  interpreter with ``BLASCHKE_DYN_NUMBA=1`` and ``=0``.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 10 --skip-e2e
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from blaschke_dyn import kernels


def _median_time(fn, repeat):
    fn()  # warm up / compile
    timings = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - start)
    return statistics.median(timings)


def kernel_cases(rng):
    zeros = 0.9 * np.sqrt(rng.random(16)) * np.exp(2j * np.pi * rng.random(16))
    z = np.exp(2j * np.pi * rng.random(20000)) * rng.random(20000)
    u = np.linspace(-30.0, 30.0, 20000)
    wz = 0.45 * (rng.random(2000) - 0.5) + 0.45j * (rng.random(2000) - 0.5)
    path = 0.5 * np.exp(2j * np.pi * np.linspace(0.0, 1.0, 400))
    fz = zeros[:6]
    z0 = np.sort_complex(fz)  # the fibre over 0 is the zero set
    return {
        "blaschke_eval (deg 16, 20k pts)":
            lambda impl: impl.blaschke_eval(0.6 + 0.8j, zeros, z),
        "blaschke_eval_deriv (deg 16, 20k pts)":
            lambda impl: impl.blaschke_eval_deriv(0.6 + 0.8j, zeros, z),
        "landen_sncndn (k=0.9, 20k pts)":
            lambda impl: impl.landen_sncndn(u, 0.9, float(np.sqrt(1 - 0.81))),
        "wp_rowsum (12 rows, 2k pts)":
            lambda impl: impl.wp_rowsum(wz, 0.1 + 1.1j, 12),
        "track_path (deg 6, 400 nodes)":
            lambda impl: impl.track_path(1.0 + 0j, fz, path - path[0], z0, 40, 1e-6),
    }


E2E = {
    "compose deg 8 o deg 8 (x20)": (
        "import numpy as np; from blaschke_dyn import blaschke as B\n"
        "r = np.random.default_rng(0)\n"
        "for _ in range(20): B.compose(B.random_fbp(r, 8), B.random_fbp(r, 8))"),
    "monodromy of T_6 and z^8": (
        "from blaschke_dyn import blaschke as B, cheby\n"
        "from blaschke_dyn.monodromy import numerical_monodromy\n"
        "numerical_monodromy(cheby.cheby_blaschke(6, 0.5).product)\n"
        "numerical_monodromy(B.power_map(8))"),
    "wp on 5k points": (
        "import numpy as np; from blaschke_dyn.elliptic import weierstrass_p\n"
        "z = np.linspace(0.05, 0.95, 5000) + 0.37j\n"
        "weierstrass_p(z, 0.3 + 1.2j)"),
}


def run_e2e(snippet, flag, repeat):
    # the workload is timed inside the child so interpreter start-up is excluded
    code = (
        "import time\n"
        + "exec(" + repr(snippet) + ")\n"
        + "ts = []\n"
        + f"for _ in range({repeat}):\n"
        + "    s = time.perf_counter(); exec(" + repr(snippet) + "); ts.append(time.perf_counter() - s)\n"
        + "ts.sort(); print(ts[len(ts) // 2])\n")
    env = dict(os.environ, BLASCHKE_DYN_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timed repetitions per case")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-e2e", action="store_true", help="only time the raw kernels")
    args = ap.parse_args(argv)

    if kernels.numba_impl is None:
        print("numba is not importable; nothing to compare", file=sys.stderr)
        return 1

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<40} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for name, fn in kernel_cases(rng).items():
        t_np = _median_time(lambda: fn(kernels.numpy_impl), args.repeat)
        t_nb = _median_time(lambda: fn(kernels.numba_impl), args.repeat)
        print(f"{name:<40} {1e3 * t_np:>11.2f} {1e3 * t_nb:>11.2f} {t_np / t_nb:>7.1f}x")

    if not args.skip_e2e:
        print()
        print(f"{'workload (BLASCHKE_DYN_NUMBA=0 / =1)':<40} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
        for name, snippet in E2E.items():
            t_np = run_e2e(snippet, "0", args.repeat)
            t_nb = run_e2e(snippet, "1", args.repeat)
            print(f"{name:<40} {1e3 * t_np:>11.2f} {1e3 * t_nb:>11.2f} {t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
