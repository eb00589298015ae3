#!/usr/bin/env python3
"""Time the numpy kernel lane against the numba lane and check agreement.

Each kernel runs on representative inputs (lattice-order matrices, table
arrays) in every available lane; the report shows the best-of-N wall time
per lane and flags any disagreement in results.  The HOFIX_KERNELS
environment variable is honored the same way the library honors it -- it
selects which lane the `hofix` package itself uses -- but this script
always measures every lane it can import.

Usage: python3 scripts/benchmark_kernels.py [--repeats N] [--size N]
"""

import argparse
import sys
import time

import numpy as np

from hofix.kernels import ACTIVE_LANE, LANES, warmup
from hofix.lattice import flat, powerset


def _random_cover(n, rng):
    """A random covering relation: strictly lower-triangular, sparse."""
    cover = np.zeros((n, n), dtype=bool)
    for j in range(1, n):
        for i in rng.choice(j, size=min(3, j), replace=False):
            cover[i, j] = True
    return cover


def build_inputs(size, rng):
    """One input tuple per kernel, shared across lanes."""
    lat = powerset([str(i) for i in range(7)])  # 128-element order
    small = flat(4)  # 6 elements: assignment enumeration stays feasible
    cover = _random_cover(size, rng)
    leq = LANES["numpy"]["transitive_closure"](cover)

    m = small.size
    assignments = np.array(
        [[(k // m**i) % m for i in range(m)] for k in range(m**m)], dtype=np.int64
    )
    pairs = np.argwhere(small.leq_matrix).astype(np.int64)

    f = rng.integers(0, size, size=size * 64).astype(np.int64)
    g = rng.integers(0, size, size=size * 64).astype(np.int64)
    rel_n = size
    rel_f = rng.integers(0, 2, size=(rel_n, rel_n)).astype(np.int64)
    rel_g = rng.integers(0, 2, size=(rel_n, rel_n)).astype(np.int64)
    mids = np.arange(rel_n, dtype=np.int64)
    xs = rng.integers(0, lat.size, size=size * 64).astype(np.int64)
    ys = np.minimum(xs + 1, lat.size - 1)

    return {
        "transitive_closure": (cover,),
        "antisymmetry_witness": (leq,),
        "bounds_table": (lat.leq_matrix, True),
        "monotone_mask": (assignments, pairs, small.leq_matrix),
        "compose_gather": (f, g),
        "cat_tables": (rel_f, rel_g, mids, 1, 0),
        "leq_pointwise": (xs, ys, lat.leq_matrix),
    }


def _normalize(result):
    if isinstance(result, tuple):
        return tuple(_normalize(r) for r in result)
    if isinstance(result, np.ndarray):
        return result.tolist()
    return result


def run(repeats, size):
    rng = np.random.default_rng(20240601)
    inputs = build_inputs(size, rng)
    lanes = sorted(LANES)
    for lane in lanes:
        warmup(lane)

    rows = []
    disagreements = 0
    for kernel, args in inputs.items():
        timings = {}
        results = {}
        for lane in lanes:
            fn = LANES[lane][kernel]
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                out = fn(*args)
                best = min(best, time.perf_counter() - t0)
            timings[lane] = best * 1000.0
            results[lane] = _normalize(out)
        agree = len({repr(results[lane]) for lane in lanes}) == 1
        disagreements += not agree
        rows.append((kernel, timings, agree))

    both = "numba" in lanes and "numpy" in lanes
    header = ["kernel"] + ["%s ms" % l for l in lanes] + ["agree"]
    if both:
        header.append("numpy/numba")
    table = [header]
    for kernel, timings, agree in rows:
        row = [kernel] + ["%.3f" % timings[l] for l in lanes] + ["yes" if agree else "NO"]
        if both:
            ratio = timings["numpy"] / timings["numba"] if timings["numba"] else float("inf")
            row.append("%.1fx" % ratio)
        table.append(row)
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for row in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())

    print()
    print("active lane: %s (set HOFIX_KERNELS to override)" % ACTIVE_LANE)
    if len(lanes) == 1:
        print("only one lane available; install numba to compare")
    return 1 if disagreements else 0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repetitions per kernel (best is kept)")
    parser.add_argument("--size", type=int, default=256,
                        help="base problem size for the generated inputs")
    args = parser.parse_args(argv)
    return run(args.repeats, args.size)


if __name__ == "__main__":
    sys.exit(main())
