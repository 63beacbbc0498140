#!/usr/bin/env python3
"""Recompute the value table and compare it against a reference CSV.

Typical use:

    python scripts/reproduce_table.py --n-max 8
    python scripts/reproduce_table.py --n-max 12 --workers 8 --output /tmp/t.csv

Exits 0 when every recomputed row matches the reference, 1 otherwise.
"""

import argparse
import os
import sys
import time

from jacobsthal import ProblemKind, compute_h, default_workers, prime_context
from jacobsthal.cli import CSV_HEADER

DEFAULT_REFERENCE = os.path.join(
    os.path.dirname(__file__), "..", "tests", "data", "reference_paired.csv"
)


def load_reference(path):
    rows = {}
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            cells = line.strip().split(",")
            rows[int(cells[0])] = line.strip()
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", choices=("classic", "paired"), default="paired")
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--workers", type=int, default=default_workers())
    ap.add_argument("--engine", choices=("auto", "python", "numba"), default="auto")
    ap.add_argument("--output", help="also write the computed CSV here")
    ap.add_argument(
        "--reference",
        default=DEFAULT_REFERENCE,
        help="reference CSV to compare against (paired kind only)",
    )
    args = ap.parse_args()

    kind = ProblemKind(args.kind)
    reference = {}
    if kind is ProblemKind.PAIRED and os.path.exists(args.reference):
        reference = load_reference(args.reference)

    lines = [CSV_HEADER]
    mismatches = 0
    for n in range(1, args.n_max + 1):
        t0 = time.perf_counter()
        r = compute_h(
            prime_context(n),
            kind,
            workers=args.workers,
            engine=args.engine,
            progress=lambda s: print("  " + s, file=sys.stderr, flush=True),
        )
        row = f"{r.n},{r.p_n},{r.h},{r.bound},{'true' if r.bound_ok else 'false'}"
        lines.append(row)
        status = ""
        if n in reference:
            status = "ok" if reference[n] == row else f"MISMATCH (expected {reference[n]})"
            mismatches += reference[n] != row
        print(
            f"n={n}: h={r.h} nodes={r.stats.nodes} "
            f"{time.perf_counter() - t0:.1f}s {status}",
            file=sys.stderr,
            flush=True,
        )

    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if mismatches:
        print(f"{mismatches} row(s) differ from the reference", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
