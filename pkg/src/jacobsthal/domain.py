"""Core value types: primes, slot budgets, and coverage capacity.

Everything downstream is phrased over a window of positions {1..L} and
residue classes of the first n primes.  A class r mod p "covers" the
positions q = r (mod p) inside the window; a prime contributes at most a
fixed number of classes (its slot budget), and a full cover of the window
certifies that a progression window of the same length can be wiped out.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .search import SearchStats

# Per-prime slot state is packed into machine words downstream, and p_64
# = 311 keeps every residue index below 2**9; 64 primes is far beyond the
# reach of the search anyway.
MAX_PRIMES = 64

_SIEVE_LIMIT = 2048


class ProblemKind(enum.Enum):
    """Which avoidance problem a window cover certifies."""

    CLASSIC = "classic"
    PAIRED = "paired"

    def __str__(self) -> str:
        return self.value


def slots_for_prime(kind: ProblemKind, p: int) -> int:
    """Number of residue classes mod p a cover may use.

    A single progression loses one class per prime.  A pair (a, b) with
    even difference shares one parity class (a+q and b+q are both even or
    both odd), so p = 2 still gets one slot, while every odd prime can
    kill positions through either member: two slots.
    """
    if kind is ProblemKind.CLASSIC:
        return 1
    return 1 if p == 2 else 2


def nth_primes(n: int) -> tuple[int, ...]:
    """First n primes, ascending."""
    if not 1 <= n <= MAX_PRIMES:
        raise ValueError(f"n must be in 1..{MAX_PRIMES}, got {n}")
    composite = bytearray(_SIEVE_LIMIT)
    primes: list[int] = []
    for x in range(2, _SIEVE_LIMIT):
        if composite[x]:
            continue
        primes.append(x)
        if len(primes) == n:
            return tuple(primes)
        for m in range(x * x, _SIEVE_LIMIT, x):
            composite[m] = 1
    raise AssertionError("sieve limit too small")


def capacity(p: int, k: int, length: int) -> int:
    """Exact maximum number of positions in {1..length} coverable by k
    distinct residue classes mod p.

    Write length = q*p + s.  Classes 1..s (as residues) hold q+1 window
    positions each, the remaining p-s classes hold q.  Distinct classes
    are disjoint, so the best k of them reach k*q + min(k, s).
    """
    if k >= p:
        return length
    q, s = divmod(length, p)
    return k * q + min(k, s)


@dataclass(frozen=True)
class PrimeContext:
    """First n primes plus the derived constants used everywhere."""

    n: int
    primes: tuple[int, ...]
    primorial: int
    bound: int

    def __post_init__(self) -> None:
        if len(self.primes) != self.n:
            raise ValueError("prime tuple length disagrees with n")


def bound_value(ctx: PrimeContext) -> int:
    """p_n**2 - p_n, the conjectured strict upper bound for the paired
    function from n = 3 on (it is attained exactly at n = 1 and 2)."""
    p = ctx.primes[-1]
    return p * p - p


def prime_context(n: int) -> PrimeContext:
    primes = nth_primes(n)
    p = primes[-1]
    return PrimeContext(n=n, primes=primes, primorial=math.prod(primes), bound=p * p - p)


def slot_vector(kind: ProblemKind, primes: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(slots_for_prime(kind, p) for p in primes)


@dataclass(frozen=True)
class ResidueAssignment:
    """Residue classes chosen per prime: the covering-side certificate.

    classes[i] lists the residues taken from primes[i] of the ambient
    context, each in 0..p-1, at most the slot budget, no repeats.
    """

    kind: ProblemKind
    length: int
    classes: tuple[tuple[int, ...], ...]


def validate_assignment(asg: ResidueAssignment, ctx: PrimeContext) -> None:
    """Raise ValueError unless asg is structurally valid for ctx."""
    if asg.length < 1:
        raise ValueError(f"window length must be positive, got {asg.length}")
    if len(asg.classes) != ctx.n:
        raise ValueError(
            f"expected {ctx.n} class tuples, got {len(asg.classes)}"
        )
    for p, cls in zip(ctx.primes, asg.classes):
        limit = slots_for_prime(asg.kind, p)
        if len(cls) > limit:
            raise ValueError(f"{len(cls)} classes mod {p} exceeds slot budget {limit}")
        if len(set(cls)) != len(cls):
            raise ValueError(f"repeated residue class mod {p}")
        for r in cls:
            if not 0 <= r < p:
                raise ValueError(f"residue {r} out of range mod {p}")


@dataclass(frozen=True)
class Witness:
    """Integers whose shifted progression pair misses coprimality on a
    whole window: the definition-side certificate.

    For every position q in 1..length some context prime divides a+q or
    b+q.  Classic witnesses degenerate to b == a.  Verification lives in
    covering.verify_witness and uses trial division only.
    """

    kind: ProblemKind
    a: int
    b: int
    length: int


@dataclass(frozen=True)
class ComputationResult:
    """One computed function value with its certificate and run counters.

    Invariants: witness.length == h - 1, bound == p_n**2 - p_n, and
    bound_ok == (h < bound).
    """

    kind: ProblemKind
    n: int
    p_n: int
    h: int
    bound: int
    bound_ok: bool
    witness: Witness
    stats: "SearchStats"
