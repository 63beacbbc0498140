"""Command line front end.

Standard output carries only structured results (JSON or CSV); progress
goes to standard error.  Exit codes are a stable contract:

    0  success
    1  witness verification failure
    2  usage or input error
    3  internal invariant breach (a bug: a result failed its own check)
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any

from .covering import load_witness, surviving_position, witness_to_json_dict
from .domain import (
    MAX_PRIMES,
    ComputationResult,
    ProblemKind,
    prime_context,
)
from .search import (
    SearchStats,
    assignment_oracle,
    compute_h,
    default_workers,
    definition_oracle,
)

CSV_HEADER = "n,p_n,h,bound,bound_ok"


def result_to_json_dict(result: ComputationResult) -> dict[str, Any]:
    return {
        "schema": 1,
        "kind": str(result.kind),
        "n": result.n,
        "p_n": result.p_n,
        "h": result.h,
        "bound": result.bound,
        "bound_ok": result.bound_ok,
        "witness": witness_to_json_dict(result.witness, result.n),
        "stats": result.stats.to_json_dict(),
    }


@dataclass(frozen=True)
class ResultFile:
    """A JSON document holding computed results, as cmd_table emits it."""

    schema: int
    results: tuple[dict[str, Any], ...]

    @classmethod
    def from_results(cls, results: list[ComputationResult]) -> "ResultFile":
        return cls(schema=1, results=tuple(result_to_json_dict(r) for r in results))

    @classmethod
    def from_json_text(cls, text: str) -> "ResultFile":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"not valid JSON: {exc}") from exc
        if not isinstance(obj, list):
            raise ValueError("result file must be a JSON array")
        seen: set[int] = set()
        for rec in obj:
            if not isinstance(rec, dict) or "n" not in rec or "h" not in rec:
                raise ValueError("result records need at least n and h")
            if rec["n"] in seen:
                raise ValueError(f"duplicate n={rec['n']} in result file")
            seen.add(rec["n"])
        return cls(schema=1, results=tuple(obj))

    def to_json_text(self) -> str:
        return json.dumps(list(self.results), indent=2) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _progress(line: str) -> None:
    print(line, file=sys.stderr, flush=True)


def cmd_compute(args: argparse.Namespace) -> int:
    kind = ProblemKind(args.kind)
    ctx = prime_context(args.n)
    result = compute_h(
        ctx,
        kind,
        workers=args.workers,
        engine=args.engine,
        canonical=args.canonical,
        progress=_progress,
    )
    _emit(json.dumps(result_to_json_dict(result), indent=2) + "\n", args.output)
    return 0


def _csv_text(results: list[ComputationResult]) -> str:
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            f"{r.n},{r.p_n},{r.h},{r.bound},{'true' if r.bound_ok else 'false'}"
        )
    return "\n".join(lines) + "\n"


def cmd_table(args: argparse.Namespace) -> int:
    kind = ProblemKind(args.kind)
    results: list[ComputationResult] = []
    for n in range(1, args.n_max + 1):
        result = compute_h(
            prime_context(n),
            kind,
            workers=args.workers,
            engine=args.engine,
            canonical=args.canonical,
            progress=_progress,
        )
        results.append(result)
    if args.format == "csv":
        _emit(_csv_text(results), args.output)
    else:
        _emit(ResultFile.from_results(results).to_json_text(), args.output)
    if kind is ProblemKind.PAIRED:
        checked = [r for r in results if r.n >= 3]
        if checked:
            bad = [r.n for r in checked if not r.bound_ok]
            if bad:
                _progress(
                    "bound check: h2(n) < p_n^2 - p_n REFUTED at n = "
                    + ", ".join(map(str, bad))
                )
            else:
                _progress(
                    f"bound check: h2(n) < p_n^2 - p_n holds for all computed "
                    f"n in 3..{args.n_max}"
                )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    witness, n = load_witness(args.witness)
    if args.n is not None and args.n != n:
        raise ValueError(f"witness file has n={n}, expected n={args.n}")
    if args.kind is not None and ProblemKind(args.kind) is not witness.kind:
        raise ValueError(
            f"witness file has kind={witness.kind}, expected {args.kind}"
        )
    ctx = prime_context(n)
    q = surviving_position(witness, ctx)
    if q is None:
        print(
            f"witness ok: kind={witness.kind} n={n} length={witness.length}"
        )
        return 0
    print(f"witness fails at position q={q}: both members coprime to all primes")
    return 1


def cmd_oracle(args: argparse.Namespace) -> int:
    kind = ProblemKind(args.kind)
    ctx = prime_context(args.n)
    if args.which == "assignment":
        h = assignment_oracle(ctx, kind)
    else:
        h = definition_oracle(ctx, kind)
    print(h)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobsthal",
        description="Exact Jacobsthal-type covering computations at primorials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--workers",
            type=int,
            default=default_workers(),
            help="worker threads for the search (default: logical CPU count)",
        )
        p.add_argument(
            "--engine",
            choices=("auto", "python", "numba"),
            default="auto",
            help="search engine (default: compiled kernel when available)",
        )
        p.add_argument(
            "--canonical",
            action="store_true",
            help="recompute the witness single-threaded so it is reproducible",
        )
        p.add_argument("--output", help="write to this path instead of stdout")

    p = sub.add_parser("compute", help="compute one value with its witness")
    p.add_argument("--kind", choices=("classic", "paired"), required=True)
    p.add_argument("--n", type=int, required=True, metavar="N",
                   help=f"number of primes, 1..{MAX_PRIMES}")
    add_common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("table", help="compute a range of values as CSV or JSON")
    p.add_argument("--kind", choices=("classic", "paired"), required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="check a witness file by trial division")
    p.add_argument("witness", help="path to a witness JSON file")
    p.add_argument("--n", type=int, help="expected n (must match the file)")
    p.add_argument("--kind", choices=("classic", "paired"),
                   help="expected kind (must match the file)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="run a brute-force oracle (small n only)")
    p.add_argument("--kind", choices=("classic", "paired"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=("assignment", "definition"), required=True)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
