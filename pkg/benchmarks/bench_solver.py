"""Benchmark the simplex kernel: numba backend vs plain-numpy fallback.

Times the raw two-phase kernel on the standardized forms of the
programs this package actually solves: the worked six-unit example
(plain and scale-constrained) and a batch of random assessment
programs.  Run:

    python benchmarks/bench_solver.py [--repeats 300]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from vga.dataset import load_csv
from vga.models import ProgramKind, build_tsp
from vga.simplex import _kernel
from vga.simplex.core import _DEGEN_SWITCH, PIVOT_TOL, _standardize

DATA = Path(__file__).resolve().parent.parent / "tests" / "data" / "table1.csv"


def kernel_args(lp):
    std = _standardize(lp)
    return (std.A, std.b, std.c, std.n_real, std.basis0, 1e-9, PIVOT_TOL, _DEGEN_SWITCH, 10_000)


def build_workload():
    table1 = load_csv(DATA)
    lps = []
    for o in table1.ids:
        lps.append(kernel_args(build_tsp(table1, o, ProgramKind.pte())))
        lps.append(kernel_args(build_tsp(table1, o, ProgramKind.stea(1.0))))
    rng = np.random.default_rng(0)
    from vga.dataset import Dataset, DmuRecord

    for _ in range(20):
        m = int(rng.integers(1, 4))
        s = int(rng.integers(1, 4))
        n = int(rng.integers(max(7, m + s + 1), 13))
        recs = tuple(
            DmuRecord(f"d{j}", rng.uniform(0.1, 100.0, m), rng.uniform(0.1, 100.0, s))
            for j in range(n)
        )
        ds = Dataset(recs, tuple(f"x{i}[u]" for i in range(m)), tuple(f"y{r}[u]" for r in range(s)))
        lps.append(kernel_args(build_tsp(ds, "d0", ProgramKind.pte())))
    return lps


def run_backend(fn, lps, repeats):
    # warm-up (JIT compile + cache touch)
    for args in lps[:4]:
        fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeats):
        for args in lps:
            fn(*args)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=300)
    args = parser.parse_args()

    lps = build_workload()
    n_solves = len(lps) * args.repeats

    backends = [("numpy", _kernel.two_phase_numpy)]
    try:
        from numba import njit

        backends.append(("numba", njit(cache=True)(_kernel._two_phase_impl)))
    except ImportError:
        print("numba not installed; benchmarking the numpy fallback only")

    results = {}
    for name, fn in backends:
        elapsed = run_backend(fn, lps, args.repeats)
        results[name] = elapsed
        print(f"{name:>6}: {elapsed:8.3f} s total, {1e6 * elapsed / n_solves:9.1f} us/solve "
              f"({n_solves} solves)")

    if len(results) == 2:
        print(f"speedup: {results['numpy'] / results['numba']:.1f}x (numba over numpy)")
        # both backends must agree exactly
        for a in lps:
            r_np = _kernel.two_phase_numpy(*a)
            r_nb = backends[1][1](*a)
            assert r_np[0] == r_nb[0]
            assert np.array_equal(r_np[1], r_nb[1])
            assert np.array_equal(r_np[2], r_nb[2])
        print("backend parity: identical statuses, solutions, and bases")


if __name__ == "__main__":
    main()
