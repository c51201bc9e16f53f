"""Compare the numba and pure-numpy sampling kernels.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]

Times each fill kernel on both backends (after a warm-up call so numba's JIT
compile is excluded) plus a full two-release project simulation.
"""
import argparse
import math
import time

import numpy as np

from xpforecast import kernels
from xpforecast.config import load_fixture
from xpforecast.project import simulate_project

KERNELS = {
    "uniform U(1,10)": lambda k, out: k.uniform_fill(1, 0, 1.0, 10.0, out),
    "normal N(-32,42)": lambda k, out: k.normal_fill(2, 0, -32.0, 42.0, out),
    "truncnorm N(40,20)>1": lambda k, out: k.truncnorm_fill(3, 0, 40.0, 20.0, 1.0, math.inf,
                                                           10_000, out),
    "truncnorm N(0,1) in [1,2]": lambda k, out: k.truncnorm_fill(4, 0, 0.0, 1.0, 1.0, 2.0,
                                                                10_000, out),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    names = ["numpy"] + (["numba"] if kernels.numba_backend is not None else [])
    print(f"n = {args.n:,}, best of {args.repeat}")
    print(f"{'kernel':<28}" + "".join(f"{b:>12}" for b in names) + f"{'speedup':>10}")
    out = np.empty(args.n)
    for label, call in KERNELS.items():
        row = []
        for name in names:
            backend = kernels.get_backend(name)
            call(backend, out[:1000])  # warm-up / JIT
            row.append(best_of(lambda: call(backend, out), args.repeat))
        speed = f"{row[0] / row[-1]:>9.1f}x" if len(row) > 1 else ""
        print(f"{label:<28}" + "".join(f"{t * 1e3:>10.1f}ms" for t in row) + speed)

    plan = load_fixture("repo")
    row = []
    for name in names:
        simulate_project(plan, 1000, 0, backend=name)
        row.append(best_of(lambda: simulate_project(plan, args.n // 10, 42, backend=name),
                           args.repeat))
    speed = f"{row[0] / row[-1]:>9.1f}x" if len(row) > 1 else ""
    print(f"{'project, n/10 draws':<28}" + "".join(f"{t * 1e3:>10.1f}ms" for t in row) + speed)


if __name__ == "__main__":
    main()
