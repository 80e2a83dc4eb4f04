#!/usr/bin/env python3
"""Benchmark the compiled replicate kernel against the pure-python path.

The two backends consume the same random stream and must produce identical
realizations, so this doubles as a cross-check.  Typical speedups are two
to three orders of magnitude.

    python benchmarks/compare_backends.py --n 10000 --c 0 --reps 20
"""

import argparse
import time

from cagraph import CommunityLaw, DensityLaw, GraphConfig, SizeLaw, load_law_file, m_for_c
from cagraph._kernels import HAVE_NUMBA
from cagraph.sampler import _sample_graph_kernel, _sample_graph_python


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--m", type=int, default=None, help="community count (overrides --c)")
    parser.add_argument("--c", type=float, default=0.0, help="threshold coordinate used to pick m")
    parser.add_argument("--law", default=None, help="law JSON file (default: X=3, Q=0.5)")
    parser.add_argument("--reps", type=int, default=20, help="replicates per timed backend")
    parser.add_argument("--python-reps", type=int, default=None,
                        help="replicates for the python path (default: min(reps, 3))")
    parser.add_argument("--seed", type=int, default=20240801)
    return parser.parse_args()


def timed(fn, config, reps):
    start = time.perf_counter()
    connected = 0
    for r in range(reps):
        connected += fn(config, r).is_connected
    elapsed = time.perf_counter() - start
    return elapsed, connected


def main():
    args = parse_args()
    law = load_law_file(args.law) if args.law else CommunityLaw.iid(
        SizeLaw.point(3), DensityLaw.point(0.5)
    )
    m = args.m if args.m is not None else m_for_c(args.n, args.c, law)
    config = GraphConfig(n=args.n, m=m, law=law, seed=args.seed)
    print(f"n={args.n} m={m} reps={args.reps} seed={args.seed}")

    if not HAVE_NUMBA:
        print("numba not importable; timing the python path only")
    else:
        _sample_graph_kernel(config, 0)  # JIT warm-up outside the timer
        kern_time, kern_conn = timed(_sample_graph_kernel, config, args.reps)
        print(f"numba kernel : {kern_time / args.reps * 1e3:8.2f} ms/replicate "
              f"({args.reps / kern_time:8.1f} reps/s)")

    py_reps = args.python_reps or min(args.reps, 3)
    py_time, _ = timed(_sample_graph_python, config, py_reps)
    per_rep = py_time / py_reps
    print(f"python path  : {per_rep * 1e3:8.2f} ms/replicate "
          f"({1.0 / per_rep:8.1f} reps/s, measured over {py_reps})")

    if HAVE_NUMBA:
        print(f"speedup      : {per_rep / (kern_time / args.reps):8.1f}x")
        mismatch = _sample_graph_kernel(config, 0) != _sample_graph_python(config, 0)
        print(f"cross-check  : replicate 0 censuses {'DIFFER' if mismatch else 'identical'}")


if __name__ == "__main__":
    main()
