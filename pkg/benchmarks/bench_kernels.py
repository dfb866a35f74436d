#!/usr/bin/env python3
"""Time the compiled kernels against the same source run by the interpreter.

    python benchmarks/bench_kernels.py [--repeat N]

Both paths get identical inputs.  The compiled path is warmed up first, so
JIT time is not counted.  The end-to-end row runs the public evaluator in
subprocesses with and without ``PQSERIES_DISABLE_NUMBA=1``.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from pqseries import _kernels as k
from pqseries._accel import NUMBA_AVAILABLE

CFG = (1e-15, 1e-300, 5000, 3, 5)


def arr(*xs):
    return np.array(xs, dtype=np.complex128)


CASES = {
    # slowly converging 2phi1 with rho close to one
    "sum_pq rho=0.98": ("sum_pq", (arr(0.4, 1.1 + 0.2j), arr(0.3, 0.5), arr(0.9), arr(0.2),
                                   1.2 + 0.1j, (1.2 + 0.1j) * 0.98, 0.9, 0, 0, -1) + CFG),
    "sum_q q=0.97": ("sum_q", (arr(0.3, 0.6j), arr(0.8), 0.97 + 0j, 0.9 + 0j, 0, -1) + CFG),
    "ratio_product rho=0.99": ("ratio_product", (0.3 + 0.1j, 0.6 + 0j, 0.99 + 0j, 1e-17, 1e-300, 20000, 3)),
    "shifted_product n=2000": ("shifted_product", (0.5 + 0j, 0.3 + 0j, 1.0 + 0j, 0.999 + 0j, 2000)),
}

END_TO_END = (
    "import time, pqseries; from pqseries import suites; suites.run_suite('reductions', 0, 2); "
    "t = time.perf_counter(); suites.run_suite('all', 7, 100); print(time.perf_counter() - t)"
)


def best_of(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def end_to_end(disable):
    env = dict(os.environ, PQSERIES_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END], capture_output=True, text=True, env=env, check=True)
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args()
    if not NUMBA_AVAILABLE:
        sys.exit("numba is not installed; nothing to compare")

    print(f"{'case':<26}{'python':>12}{'numba':>12}{'speedup':>10}")
    for label, (name, inputs) in CASES.items():
        fast, slow = k.KERNELS[name], k.PY_KERNELS[name]
        fast(*inputs)
        a, b = fast(*inputs), slow(*inputs)
        if name.startswith("sum"):
            assert a[1] == b[1] and abs(a[0] - b[0]) <= 1e-12 * abs(b[0]), label
        t_py = best_of(slow, inputs, args.repeat)
        t_nb = best_of(fast, inputs, args.repeat)
        print(f"{label:<26}{t_py * 1e3:>10.3f}ms{t_nb * 1e3:>10.3f}ms{t_py / t_nb:>9.1f}x")

    if not args.skip_end_to_end:
        t_py, t_nb = end_to_end(True), end_to_end(False)
        print(f"{'suite all, 100 draws':<26}{t_py:>11.2f}s{t_nb:>11.2f}s{t_py / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
