#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernel backends.

Times the two hot loops — cyclic Jacobi sweeps to convergence and the
card-shuffle trajectory kernel — on the same inputs for every backend that
is importable, and prints a table with speedups.  Because both backends
execute the same floating-point operations in the same order, the outputs
are checked bitwise equal along the way; a mismatch aborts the run.

Usage:
    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from treespectra import (F_identity, build_tree, edge_list, walk_matrix,
                         wilson_witness)
from treespectra.kernels import implementations

_EARLY_SWEEPS = 4  # mirrors the eigensolver driver's threshold schedule


def jacobi_to_convergence(mod, matrix):
    a = matrix.copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    for sweep in range(1, 51):
        if sweep <= _EARLY_SWEEPS:
            off_abs = float(np.sum(np.abs(a)) - np.sum(np.abs(np.diag(a))))
            thresh = 0.2 * off_abs / (n * n)
        else:
            thresh = 0.0
        rotations = mod.jacobi_sweep(a, v, thresh, sweep > _EARLY_SWEEPS)
        off = a - np.diag(np.diag(a))
        if np.linalg.norm(off) <= 1e-14 * norm or rotations == 0:
            break
    return a, v


def bench_jacobi(mods, d, h, repeats):
    g = build_tree(d, h)
    m = walk_matrix(g).entries
    rows = {}
    reference = None
    for name, mod in mods.items():
        best = float("inf")
        for _ in range(repeats):
            start = time.perf_counter()
            a, v = jacobi_to_convergence(mod, m)
            best = min(best, time.perf_counter() - start)
        key = (a.tobytes(), v.tobytes())
        if reference is None:
            reference = key
        elif key != reference:
            raise SystemExit(f"backend outputs differ on jacobi (d={d} h={h})")
        rows[name] = best
    return f"jacobi d={d} h={h} (n={g.n})", rows


def bench_interchange(mods, d, h, steps, repeats):
    g = build_tree(d, h)
    f = wilson_witness(g).f
    eu, ev = edge_list(g).as_arrays()
    rng = np.random.default_rng(12345)
    edges = rng.integers(0, g.n - 1, size=steps, dtype=np.int64)
    coins = rng.integers(0, 2, size=steps, dtype=np.int8)
    f0 = F_identity(f)
    trace = np.empty(steps + 1)
    rows = {}
    reference = None
    for name, mod in mods.items():
        best = float("inf")
        for _ in range(repeats):
            mapping = np.arange(g.n, dtype=np.int64)
            start = time.perf_counter()
            stat = mod.interchange_run(mapping, eu, ev, edges, coins,
                                       f, f0, trace, True)
            best = min(best, time.perf_counter() - start)
        key = (stat, mapping.tobytes(), trace.tobytes())
        if reference is None:
            reference = key
        elif key != reference:
            raise SystemExit(
                f"backend outputs differ on interchange (d={d} h={h})")
        rows[name] = best
    return f"interchange d={d} h={h}, {steps} steps", rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats per case (best is reported)")
    args = parser.parse_args()

    mods = implementations()
    print(f"backends available: {', '.join(mods)}")
    cases = [bench_jacobi(mods, 2, 4, args.repeats),
             bench_jacobi(mods, 3, 4, args.repeats),
             bench_jacobi(mods, 3, 5, args.repeats),
             bench_interchange(mods, 2, 5, 200_000, args.repeats),
             bench_interchange(mods, 3, 4, 200_000, args.repeats)]

    width = max(len(label) for label, _ in cases)
    header = f"{'case':<{width}}  " + "".join(f"{m:>12}" for m in mods)
    if len(mods) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, rows in cases:
        line = f"{label:<{width}}  "
        line += "".join(f"{rows[m] * 1e3:>10.2f}ms" for m in mods)
        if len(rows) == 2:
            pure, fast = rows["pure"], rows.get("cython", rows["pure"])
            line += f"{pure / fast:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
