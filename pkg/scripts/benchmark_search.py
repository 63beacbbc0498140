#!/usr/bin/env python3
"""Benchmark the search engines on infeasibility proofs.

The infeasible call at L = h is where all the time goes, so that is what
gets timed, per engine, after one untimed warmup for JIT compilation.
"""

import argparse
import sys
import time

from jacobsthal import (
    ProblemKind,
    SearchStats,
    compute_h,
    feasible,
    prime_context,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", choices=("classic", "paired"), default="paired")
    ap.add_argument("--n-min", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument(
        "--engines", default="python,numba", help="comma-separated engine list"
    )
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    kind = ProblemKind(args.kind)
    engines = args.engines.split(",")
    feasible(2, prime_context(2), kind, engine=engines[-1])  # warmup

    print(f"{'n':>3} {'h':>6} {'engine':>8} {'nodes':>12} {'seconds':>9} {'ns/node':>8}")
    for n in range(args.n_min, args.n_max + 1):
        h = compute_h(prime_context(n), kind, workers=args.workers).h
        for engine in engines:
            stats = SearchStats()
            t0 = time.perf_counter()
            out = feasible(
                h, prime_context(n), kind,
                engine=engine, workers=args.workers, stats=stats,
            )
            dt = time.perf_counter() - t0
            assert out is None
            rate = 1e9 * dt / max(stats.nodes, 1)
            print(
                f"{n:>3} {h:>6} {engine:>8} {stats.nodes:>12} {dt:>9.2f} {rate:>8.0f}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
