"""Exact computation of the covering numbers h(n) and h2(n).

feasible() decides whether {1..L} admits a full cover within the
per-prime slot budgets.  The search branches on the leftmost uncovered
position u: any full cover must kill u, and the only class of prime p
through u is u mod p, so there are at most n children per node.  Three
devices keep negative answers (the expensive part: they visit the whole
tree) tractable:

* capacity prune: sum over primes of capacity(p, remaining slots, w)
  for the window w spanned by the uncovered positions; if that is less
  than the number of uncovered positions, no extension can finish.
* class-count prune: same idea but exact, using the per-class counts of
  currently uncovered positions (top-k per prime, k = remaining slots).
* set-dedup exclusions: once the branch taking class c of prime p at a
  node has been fully explored (or soundly pruned), c is forbidden for
  p in the node's remaining branches.  Cover sets are thereby
  partitioned by their first branching choice, and each candidate set
  is examined exactly once instead of once per permutation.

Two engines implement the identical branch order and prune conditions:
a pure Python reference (this module) and a compiled kernel
(jacobsthal._kernel).  On infeasible inputs they expand the same nodes
in the same order, so their statistics must agree exactly; the test
suite holds them to that.
"""

from __future__ import annotations

import itertools
import os
import threading
import time
from collections import deque
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .covering import class_cover_bits, crt_reconstruct, is_full_cover, verify_witness
from .domain import (
    ComputationResult,
    PrimeContext,
    ProblemKind,
    ResidueAssignment,
    Witness,
    bound_value,
    capacity,
    slot_vector,
)

# Frontier width per worker when splitting the tree for parallel runs.
FRONTIER_PER_WORKER = 64


@dataclass
class SearchStats:
    """Counters for one computation; all nondecreasing while running."""

    nodes: int = 0
    feasibility_calls: int = 0
    pruned_capacity: int = 0
    pruned_classcount: int = 0
    ms: float = 0.0

    def add(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.feasibility_calls += other.feasibility_calls
        self.pruned_capacity += other.pruned_capacity
        self.pruned_classcount += other.pruned_classcount

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "nodes": self.nodes,
            "feasibility_calls": self.feasibility_calls,
            "pruned_capacity": self.pruned_capacity,
            "pruned_classcount": self.pruned_classcount,
            "ms": round(self.ms, 3),
        }


@dataclass(frozen=True)
class SearchNode:
    """A live branch point: partial assignment plus derived cover state.

    mask is always the exact cover of the trail's classes, uncovered its
    zero count, uncovered_from the leftmost gap; forbidden carries the
    dedup exclusions inherited on the path here.
    """

    mask: int
    uncovered_from: int
    uncovered: int
    rem: tuple[int, ...]
    forbidden: tuple[frozenset[int], ...]
    trail: tuple[tuple[int, int], ...]


def class_mask_table(primes: tuple[int, ...], length: int) -> list[list[int]]:
    """cm[i][r] = positions of {1..length} killed by class r mod primes[i]."""
    return [
        [class_cover_bits(p, r, length) for r in range(p)] for p in primes
    ]


def _root_node(length: int, kind: ProblemKind, primes: tuple[int, ...]) -> SearchNode:
    return SearchNode(
        mask=0,
        uncovered_from=1,
        uncovered=length,
        rem=slot_vector(kind, primes),
        forbidden=tuple(frozenset() for _ in primes),
        trail=(),
    )


def _assignment_from_trail(
    kind: ProblemKind,
    length: int,
    primes: tuple[int, ...],
    trail: tuple[tuple[int, int], ...],
) -> ResidueAssignment:
    classes: list[list[int]] = [[] for _ in primes]
    for i, r in trail:
        classes[i].append(r)
    return ResidueAssignment(
        kind=kind,
        length=length,
        classes=tuple(tuple(sorted(c)) for c in classes),
    )


# ---------------------------------------------------------------------------
# pure Python engine


def _explore_python(
    length: int,
    primes: tuple[int, ...],
    cm: list[list[int]],
    start: SearchNode,
    stats: SearchStats,
    stop: threading.Event | None = None,
) -> tuple[str, tuple[tuple[int, int], ...] | None]:
    """Depth-first exhaust of one subtree.

    Returns ("found", full trail), ("exhausted", None), or
    ("aborted", None) when the shared stop event fired.
    """
    n = len(primes)
    full = (1 << length) - 1
    if start.uncovered == 0:
        return "found", start.trail
    rem = list(start.rem)
    forbidden = [set(f) for f in start.forbidden]
    trail: list[tuple[int, int]] = []
    # frame: [mask, u, uncovered, next branch index, exclusions added here]
    frames: list[list[Any]] = [
        [start.mask, start.uncovered_from, start.uncovered, 0, []]
    ]
    while frames:
        f = frames[-1]
        mask, u, unc, i = f[0], f[1], f[2], f[3]
        chosen = -1
        while i < n:
            if rem[i] > 0 and (u % primes[i]) not in forbidden[i]:
                chosen = i
                break
            i += 1
        if chosen < 0:
            # node exhausted: drop its exclusions, then exclude its own
            # entering choice from the parent's remaining branches
            for j, r in f[4]:
                forbidden[j].discard(r)
            frames.pop()
            if frames:
                pi, pr = trail.pop()
                rem[pi] += 1
                forbidden[pi].add(pr)
                frames[-1][4].append((pi, pr))
            continue
        f[3] = chosen + 1
        if stop is not None and stop.is_set():
            return "aborted", None
        p = primes[chosen]
        r = u % p
        child = mask | cm[chosen][r]
        stats.nodes += 1
        cunc = length - child.bit_count()
        if cunc == 0:
            trail.append((chosen, r))
            return "found", start.trail + tuple(trail)
        gaps = ~child & full
        cu = (gaps & -gaps).bit_length()
        wlen = gaps.bit_length() - cu + 1
        capsum = 0
        for j in range(n):
            k = rem[j] - 1 if j == chosen else rem[j]
            if k:
                q, s = divmod(wlen, primes[j])
                capsum += k * q + (k if s > k else s)
        if capsum < cunc:
            stats.pruned_capacity += 1
            forbidden[chosen].add(r)
            f[4].append((chosen, r))
            continue
        ecap = 0
        for j in range(n):
            k = rem[j] - 1 if j == chosen else rem[j]
            if not k:
                continue
            cmj = cm[j]
            fj = forbidden[j]
            b1 = b2 = 0
            for rr in range(primes[j]):
                if rr in fj:
                    continue
                c = (gaps & cmj[rr]).bit_count()
                if c > b1:
                    b1, b2 = c, b1
                elif c > b2:
                    b2 = c
            ecap += b1 if k == 1 else b1 + b2
            if ecap >= cunc:
                break
        if ecap < cunc:
            stats.pruned_classcount += 1
            forbidden[chosen].add(r)
            f[4].append((chosen, r))
            continue
        rem[chosen] -= 1
        trail.append((chosen, r))
        frames.append([child, cu, cunc, 0, []])
    return "exhausted", None


# ---------------------------------------------------------------------------
# frontier splitting for parallel runs


def _split_frontier(
    length: int,
    primes: tuple[int, ...],
    cm: list[list[int]],
    root: SearchNode,
    target: int,
    stats: SearchStats,
) -> tuple[str, tuple[tuple[int, int], ...] | None, list[SearchNode]]:
    """Expand the root breadth-first into independent subtree states.

    Applies the same branch rule, prunes, and sibling exclusions as the
    depth-first engines, so the union of the returned subtrees still
    partitions the cover sets.  Stops once target states are pending.
    Returns ("found", trail, []) if a full cover appears while
    splitting, else ("pending", None, states).
    """
    n = len(primes)
    full = (1 << length) - 1
    states = deque([root])
    while states and len(states) < target:
        node = states.popleft()
        u = node.uncovered_from
        forb = list(node.forbidden)
        for i in range(n):
            if node.rem[i] == 0:
                continue
            p = primes[i]
            r = u % p
            if r in forb[i]:
                continue
            child = node.mask | cm[i][r]
            stats.nodes += 1
            cunc = length - child.bit_count()
            trail = node.trail + ((i, r),)
            if cunc == 0:
                return "found", trail, []
            gaps = ~child & full
            cu = (gaps & -gaps).bit_length()
            wlen = gaps.bit_length() - cu + 1
            capsum = 0
            for j in range(n):
                k = node.rem[j] - 1 if j == i else node.rem[j]
                if k:
                    q, s = divmod(wlen, primes[j])
                    capsum += k * q + (k if s > k else s)
            if capsum < cunc:
                stats.pruned_capacity += 1
                forb[i] = forb[i] | {r}
                continue
            ecap = 0
            for j in range(n):
                k = node.rem[j] - 1 if j == i else node.rem[j]
                if not k:
                    continue
                cmj = cm[j]
                fj = forb[j]
                b1 = b2 = 0
                for rr in range(primes[j]):
                    if rr in fj:
                        continue
                    c = (gaps & cmj[rr]).bit_count()
                    if c > b1:
                        b1, b2 = c, b1
                    elif c > b2:
                        b2 = c
                ecap += b1 if k == 1 else b1 + b2
                if ecap >= cunc:
                    break
            if ecap < cunc:
                stats.pruned_classcount += 1
                forb[i] = forb[i] | {r}
                continue
            rem = list(node.rem)
            rem[i] -= 1
            states.append(
                SearchNode(
                    mask=child,
                    uncovered_from=cu,
                    uncovered=cunc,
                    rem=tuple(rem),
                    forbidden=tuple(forb),
                    trail=trail,
                )
            )
            forb[i] = forb[i] | {r}
    return "pending", None, list(states)


# ---------------------------------------------------------------------------
# engine dispatch


def _resolve_engine(engine: str) -> str:
    if engine == "auto":
        try:
            from . import _kernel  # noqa: F401

            return "numba"
        except ImportError:
            return "python"
    if engine not in ("python", "numba"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "numba":
        from . import _kernel  # noqa: F401  (raises if unavailable)
    return engine


def _explore(
    engine: str,
    length: int,
    primes: tuple[int, ...],
    cm: list[list[int]],
    start: SearchNode,
    stats: SearchStats,
    stop: threading.Event | None,
    stop_word: Any,
) -> tuple[str, tuple[tuple[int, int], ...] | None]:
    if engine == "python":
        return _explore_python(length, primes, cm, start, stats, stop)
    from . import _kernel

    return _kernel.explore(length, primes, start, stats, stop_word)


def feasible(
    length: int,
    ctx: PrimeContext,
    kind: ProblemKind,
    *,
    workers: int = 1,
    engine: str = "auto",
    stats: SearchStats | None = None,
) -> ResidueAssignment | None:
    """Search for a full cover of {1..length}; None proves there is none.

    workers > 1 splits the tree into about 64 subtrees per worker and
    runs them on a thread pool (the compiled kernel releases the GIL).
    The returned assignment can then depend on thread timing, but
    whether one exists cannot.  workers == 1 is fully deterministic.
    """
    if length < 1:
        raise ValueError(f"window length must be positive, got {length}")
    if stats is None:
        stats = SearchStats()
    engine = _resolve_engine(engine)
    stats.feasibility_calls += 1
    primes = ctx.primes
    cm = class_mask_table(primes, length)
    root = _root_node(length, kind, primes)
    stop_word = None
    if engine == "numba":
        from . import _kernel

        _kernel.prepare(primes, cm, length)
        stop_word = _kernel.new_stop_word()

    if workers <= 1:
        status, trail = _explore(engine, length, primes, cm, root, stats, None, stop_word)
        if status == "found":
            return _assignment_from_trail(kind, length, primes, trail)
        return None

    status, trail, states = _split_frontier(
        length, primes, cm, root, workers * FRONTIER_PER_WORKER, stats
    )
    if status == "found":
        return _assignment_from_trail(kind, length, primes, trail)
    if not states:
        return None

    stop = threading.Event()
    found_trail: list[tuple[tuple[int, int], ...]] = []
    lock = threading.Lock()

    def run(state: SearchNode) -> SearchStats:
        local = SearchStats()
        st, tr = _explore(engine, length, primes, cm, state, local, stop, stop_word)
        if st == "found":
            with lock:
                found_trail.append(tr)
            stop.set()
            if stop_word is not None:
                stop_word[0] = 1
        return local

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for local in pool.map(run, states):
            stats.add(local)

    if found_trail:
        return _assignment_from_trail(kind, length, primes, found_trail[0])
    return None


# ---------------------------------------------------------------------------
# greedy warm start


def greedy_lower_bound(
    ctx: PrimeContext, kind: ProblemKind
) -> tuple[int, ResidueAssignment]:
    """Largest L a greedy cover reaches, with its assignment.

    For each L from 1 upward, repeatedly give a free slot the residue
    class covering the most still-uncovered positions (ties: smallest
    prime index, then smallest residue); stop at the first L the greedy
    fails to cover.  The result lower-bounds h-1, so the exact search
    can start its ascent there.
    """
    primes = ctx.primes
    n = ctx.n
    best: tuple[int, ResidueAssignment] | None = None
    length = 1
    cm = [[0] * p for p in primes]
    while True:
        # extend the class masks by position `length`
        for i, p in enumerate(primes):
            cm[i][length % p] |= 1 << (length - 1)
        full = (1 << length) - 1
        rem = list(slot_vector(kind, primes))
        chosen: list[list[int]] = [[] for _ in primes]
        mask = 0
        while mask != full:
            bi = br = -1
            bg = 0
            gaps = ~mask & full
            for i in range(n):
                if rem[i] == 0:
                    continue
                cmi = cm[i]
                for r in range(primes[i]):
                    if r in chosen[i]:
                        continue
                    g = (gaps & cmi[r]).bit_count()
                    if g > bg:
                        bg, bi, br = g, i, r
            if bi < 0:
                break
            mask |= cm[bi][br]
            chosen[bi].append(br)
            rem[bi] -= 1
        if mask != full:
            break
        asg = ResidueAssignment(
            kind=kind,
            length=length,
            classes=tuple(tuple(sorted(c)) for c in chosen),
        )
        best = (length, asg)
        length += 1
    assert best is not None  # L = 1 always succeeds
    return best


# ---------------------------------------------------------------------------
# top-level driver


def compute_h(
    ctx: PrimeContext,
    kind: ProblemKind,
    *,
    workers: int = 1,
    engine: str = "auto",
    canonical: bool = False,
    progress: Callable[[str], None] | None = None,
) -> ComputationResult:
    """Compute h (classic) or h2 (paired) for ctx.n primes, with witness.

    Climbs L from the greedy lower bound while feasible; the first
    infeasible L equals the answer (h = L), making exactly one
    infeasible call, by far the dominant cost.  Most ascent steps skip
    the search entirely: when the current cover's classes happen to
    cover the extended window too, that is already a constructive
    feasibility proof for L + 1.  The witness is rebuilt from the last
    feasible cover via the CRT and re-verified by trial division;
    failure there is a bug, reported as RuntimeError.

    canonical=True recomputes the witness from a final single-threaded
    search, so the emitted certificate is reproducible across runs and
    worker counts.
    """
    t0 = time.perf_counter()
    stats = SearchStats()
    length, best = greedy_lower_bound(ctx, kind)
    if progress is not None:
        progress(f"n={ctx.n} {kind}: greedy cover reaches L={length}")
    while True:
        extended = ResidueAssignment(
            kind=kind, length=length + 1, classes=best.classes
        )
        if is_full_cover(extended, ctx):
            length += 1
            best = extended
            continue
        asg = feasible(
            length + 1, ctx, kind, workers=workers, engine=engine, stats=stats
        )
        if asg is None:
            break
        length += 1
        best = asg
        if progress is not None:
            progress(
                f"n={ctx.n} {kind}: cover found at L={length}"
                f" ({stats.nodes} nodes so far)"
            )
    h = length + 1
    if progress is not None:
        progress(
            f"n={ctx.n} {kind}: no cover of length {h} exists"
            f" ({stats.nodes} nodes total)"
        )
    if canonical:
        best = feasible(h - 1, ctx, kind, workers=1, engine=engine, stats=stats)
        assert best is not None
    witness = crt_reconstruct(best, ctx)
    if witness.length != h - 1 or not verify_witness(witness, ctx):
        raise RuntimeError(
            f"internal error: witness for n={ctx.n} {kind} failed verification"
        )
    stats.ms = (time.perf_counter() - t0) * 1000.0
    return ComputationResult(
        kind=kind,
        n=ctx.n,
        p_n=ctx.primes[-1],
        h=h,
        bound=bound_value(ctx),
        bound_ok=h < bound_value(ctx),
        witness=witness,
        stats=stats,
    )


def default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# brute-force oracles (deliberately dumb, for cross-validation only)


def assignment_oracle(ctx: PrimeContext, kind: ProblemKind) -> int:
    """h by exhaustive enumeration of slot-respecting class assignments.

    For every choice of nonempty residue subsets (at most the slot
    budget per prime) measure the longest fully covered prefix 1..L;
    the answer is the best L plus one.  Exponential: n <= 5 only.
    """
    if ctx.n > 5:
        raise ValueError(f"assignment oracle is limited to n <= 5, got {ctx.n}")
    primes = ctx.primes
    slots = slot_vector(kind, primes)
    per_prime: list[list[tuple[int, ...]]] = []
    for p, k in zip(primes, slots):
        subsets: list[tuple[int, ...]] = []
        for size in range(1, k + 1):
            subsets.extend(itertools.combinations(range(p), size))
        per_prime.append(subsets)
    best = 0
    for combo in itertools.product(*per_prime):
        q = 1
        while True:
            for p, cls in zip(primes, combo):
                if q % p in cls:
                    break
            else:
                break
            q += 1
        if q - 1 > best:
            best = q - 1
    return best + 1


def definition_oracle(ctx: PrimeContext, kind: ProblemKind) -> int:
    """h straight from the definition, sweeping residues mod the primorial.

    For every admissible pair (a, b) mod P (all a, with b = a for the
    classic kind, b of equal parity for the paired kind) take the
    longest run of positions killed by divisibility; h is the longest
    run plus one.  Runs are read inside a window of two periods, which
    is safe because every period contains a surviving position (by CRT
    each prime leaves at least one class untouched), so no run wraps.
    Exponential in P: n <= 4 only.
    """
    if ctx.n > 4:
        raise ValueError(f"definition oracle is limited to n <= 4, got {ctx.n}")
    primes = ctx.primes
    P = ctx.primorial
    span = 2 * P

    def killed_bits(x: int) -> int:
        # positions q in 0..span-1 with some p | x + q
        bits = 0
        for p in primes:
            for q in range(-x % p, span, p):
                bits |= 1 << q
        return bits

    def longest_run(bits: int) -> int:
        run = 0
        while bits:
            bits &= bits >> 1
            run += 1
        return run

    best = 0
    if kind is ProblemKind.CLASSIC:
        for a in range(P):
            best = max(best, longest_run(killed_bits(a)))
    else:
        kill = [killed_bits(a) for a in range(P)]
        for a in range(P):
            for b in range(a % 2, P, 2):
                best = max(best, longest_run(kill[a] | kill[b]))
    return best + 1
