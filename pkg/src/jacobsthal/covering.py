"""Coverage evaluation, CRT witness reconstruction, and the verifier.

The verifier is the trust anchor of the whole artifact: it checks a
witness against the divisibility definition by trial division alone, one
window position at a time, sharing no code with the search or with the
mask arithmetic that produced the witness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .domain import (
    PrimeContext,
    ProblemKind,
    ResidueAssignment,
    Witness,
    validate_assignment,
)


@dataclass(frozen=True)
class CoverageMask:
    """Killed positions of a window {1..length}; bit q-1 stands for q."""

    length: int
    bits: int

    @property
    def covered_count(self) -> int:
        return self.bits.bit_count()

    @property
    def is_full(self) -> bool:
        return self.bits == (1 << self.length) - 1

    def covers(self, q: int) -> bool:
        if not 1 <= q <= self.length:
            raise ValueError(f"position {q} outside window 1..{self.length}")
        return bool(self.bits >> (q - 1) & 1)

    def uncovered_positions(self) -> list[int]:
        gaps = ~self.bits & (1 << self.length) - 1
        return [q + 1 for q in range(self.length) if gaps >> q & 1]


def class_cover_bits(p: int, r: int, length: int) -> int:
    """Bitmask of positions q in {1..length} with q = r (mod p)."""
    if not 0 <= r < p:
        raise ValueError(f"residue {r} out of range mod {p}")
    bits = 0
    first = r if r >= 1 else p
    for q in range(first, length + 1, p):
        bits |= 1 << (q - 1)
    return bits


def cover(asg: ResidueAssignment, ctx: PrimeContext) -> CoverageMask:
    """Union of the assignment's class masks over its window."""
    validate_assignment(asg, ctx)
    bits = 0
    for p, cls in zip(ctx.primes, asg.classes):
        for r in cls:
            bits |= class_cover_bits(p, r, asg.length)
    return CoverageMask(asg.length, bits)


def is_full_cover(asg: ResidueAssignment, ctx: PrimeContext) -> bool:
    return cover(asg, ctx).is_full


def crt_solve(residues: list[int], moduli: list[int]) -> int:
    """Smallest nonnegative x with x = residues[i] (mod moduli[i]).

    Moduli must be pairwise coprime (here: distinct primes).
    """
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        # lift x to also satisfy x = r (mod p)
        t = (r - x) * pow(m, -1, p) % p
        x += m * t
        m *= p
    return x % m


def crt_reconstruct(asg: ResidueAssignment, ctx: PrimeContext) -> Witness:
    """Turn a full cover into witness integers via the CRT.

    A class r mod p in the cover means p kills the positions q = r: set
    a = -r (mod p) so that p | a+q there.  Primes with two classes send
    the second one through b; primes with one (or none, padded with 0)
    constrain a and b equally, which also forces a = b (mod 2) for the
    paired kind and a == b for the classic kind.
    """
    if not is_full_cover(asg, ctx):
        raise ValueError("assignment does not cover its window fully")
    a_res: list[int] = []
    b_res: list[int] = []
    for p, cls in zip(ctx.primes, asg.classes):
        if not cls:
            ra = rb = 0
        elif len(cls) == 1:
            ra = rb = cls[0]
        else:
            ra, rb = cls
        a_res.append(-ra % p)
        b_res.append(-rb % p)
    a = crt_solve(a_res, list(ctx.primes))
    b = crt_solve(b_res, list(ctx.primes))
    return Witness(kind=asg.kind, a=a, b=b, length=asg.length)


def _check_witness_shape(w: Witness, ctx: PrimeContext) -> None:
    if w.length < 1:
        raise ValueError(f"witness window length must be positive, got {w.length}")
    if w.kind is ProblemKind.CLASSIC:
        if w.a != w.b:
            raise ValueError("classic witness requires b == a")
    else:
        if (w.b - w.a) % 2 != 0:
            raise ValueError("paired witness requires an even difference b - a")


def surviving_position(w: Witness, ctx: PrimeContext) -> int | None:
    """First window position q where a+q and b+q are both coprime to all
    context primes, or None when every position is killed.

    Raises ValueError for structurally invalid witnesses (nonpositive
    length, odd pair difference, classic with b != a).
    """
    _check_witness_shape(w, ctx)
    for q in range(1, w.length + 1):
        aq = w.a + q
        bq = w.b + q
        for p in ctx.primes:
            if aq % p == 0 or bq % p == 0:
                break
        else:
            return q
    return None


def verify_witness(w: Witness, ctx: PrimeContext) -> bool:
    """True when the witness kills its entire window.  Trial division
    only; deliberately independent of the search machinery."""
    return surviving_position(w, ctx) is None


def witness_to_json_dict(w: Witness, n: int) -> dict[str, Any]:
    # a and b are primorial-sized, so keep them as decimal strings: JSON
    # numbers lose precision past 2**53 in many readers.
    return {
        "kind": str(w.kind),
        "n": n,
        "a": str(w.a),
        "b": str(w.b),
        "length": w.length,
    }


def witness_from_json_dict(obj: Any) -> tuple[Witness, int]:
    """Parse and structurally validate a witness document.

    Returns (witness, n).  Raises ValueError for anything malformed.
    """
    if not isinstance(obj, dict):
        raise ValueError("witness document must be a JSON object")
    try:
        kind = ProblemKind(obj["kind"])
        n = int(obj["n"])
        a = int(str(obj["a"]))
        b = int(str(obj["b"]))
        length = int(obj["length"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed witness document: {exc}") from exc
    if n < 1:
        raise ValueError(f"witness n must be positive, got {n}")
    w = Witness(kind=kind, a=a, b=b, length=length)
    if length < 1:
        raise ValueError(f"witness window length must be positive, got {length}")
    if kind is ProblemKind.CLASSIC and a != b:
        raise ValueError("classic witness requires b == a")
    if kind is ProblemKind.PAIRED and (b - a) % 2 != 0:
        raise ValueError("paired witness requires an even difference b - a")
    return w, n


def load_witness(path: str) -> tuple[Witness, int]:
    """Load a witness document, unwrapping a full result document if given one."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"not valid JSON: {exc}") from exc
    if isinstance(obj, dict) and "witness" in obj and "a" not in obj:
        obj = obj["witness"]
    return witness_from_json_dict(obj)


def save_witness(path: str, w: Witness, n: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(witness_to_json_dict(w, n), fh, indent=2)
        fh.write("\n")
