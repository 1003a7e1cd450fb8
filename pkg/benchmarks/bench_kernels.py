"""Timing of the numba kernels against their pure-numpy twins.

Run from the repository root::

    python3 benchmarks/bench_kernels.py [--repeat 20]

Kernel timings call both flavours directly. The end-to-end steady-state run is
timed in fresh interpreters with TRAPPED_NLCS_NUMBA set to 1 and 0, so it
includes whatever the backend flag switches and nothing else.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from trapped_nlcs import _kernels
from trapped_nlcs.lindblad import DriveParams, VibronicGenerator

STEADY_SNIPPET = """
import time
from trapped_nlcs.lindblad import DriveParams, evolve_to_steady_state, ground_state_start
p = DriveParams(eta=0.1, omega0=0.01, gamma=0.1, dim={dim})
evolve_to_steady_state(ground_state_start('odd', p.dim), p, t_max=50)  # compile / warm caches
t0 = time.perf_counter()
_, d = evolve_to_steady_state(ground_state_start('even', p.dim), p)
print(time.perf_counter() - t0, d.steps)
"""


def best_of(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def kernel_cases(dim):
    gen = VibronicGenerator(DriveParams(eta=0.1, omega0=0.01, gamma=0.1, recoil="dipole", dim=dim))
    rng = np.random.default_rng(0)
    rho = rng.normal(size=(2, 2, dim, dim)) + 1j * rng.normal(size=(2, 2, dim, dim))
    out = np.empty_like(rho)
    args = (gen.fmat, gen.coupling, gen.gamma, gen.unitaries, gen.weights)
    return {
        "laguerre_table(400)": (lambda f: f(400, 2.0, 0.04), "laguerre_table"),
        f"f_hat_bands({dim})": (lambda f: f(dim, 0.1, 0.01), "f_hat_bands"),
        f"vibronic_rhs({dim}, dipole)": (lambda f: f(rho, *args, out), "vibronic_rhs"),
    }


def steady_state(flag, dim):
    env = dict(os.environ, TRAPPED_NLCS_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", STEADY_SNIPPET.format(dim=dim)],
                         env=env, capture_output=True, text=True, check=True)
    seconds, steps = res.stdout.split()
    return float(seconds), int(steps)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=10)
    ap.add_argument("--dim", type=int, default=20)
    ap.add_argument("--skip-steady", action="store_true")
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    print(f"{'kernel':32s} {'numpy':>12s} {'numba':>12s} {'speedup':>8s}")
    for label, (call, name) in kernel_cases(args.dim).items():
        fast = getattr(_kernels, name + "_numba")
        slow = getattr(_kernels, name + "_numpy")
        call(fast)  # compile outside the timed region
        t_np = best_of(lambda: call(slow), args.repeat)
        t_nb = best_of(lambda: call(fast), args.repeat)
        print(f"{label:32s} {t_np * 1e6:10.1f}us {t_nb * 1e6:10.1f}us {t_np / t_nb:7.1f}x")

    if not args.skip_steady:
        t_np, steps = steady_state("0", args.dim)
        t_nb, _ = steady_state("1", args.dim)
        label = f"steady state (dim {args.dim}, {steps} steps)"
        print(f"{label:32s} {t_np:11.3f}s {t_nb:11.3f}s {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
