"""Compiled depth-first kernel mirroring search._explore_python exactly.

Same branch order, same prune conditions, same exclusion bookkeeping:
on infeasible runs the node and prune counters must agree with the pure
Python engine one for one (the test suite enforces this).  The speed
comes from packed uint64 cover words and incrementally maintained
per-(prime, class) counts of uncovered positions, which turn the exact
class-count bound into table lookups.

The kernel releases the GIL, so independent subtrees scale across a
thread pool.  All mutable state is allocated per call; the only shared
write target is the one-byte stop flag, which is monotonic (0 -> 1) and
therefore safe to race on.
"""

from __future__ import annotations

from typing import Any

import numpy as np
from numba import njit

_MASK64 = (1 << 64) - 1

_1 = np.uint64(1)
_2 = np.uint64(2)
_4 = np.uint64(4)
_56 = np.uint64(56)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, nogil=True, inline="always")
def _popcnt(x):
    x = x - ((x >> _1) & _M1)
    x = (x & _M2) + ((x >> _2) & _M2)
    x = (x + (x >> _4)) & _M4
    return np.int64((x * _H01) >> _56)


@njit(cache=True, nogil=True, inline="always")
def _ctz(x):
    # index of lowest set bit; x must be nonzero
    return _popcnt((x & (np.uint64(0) - x)) - _1)


@njit(cache=True, nogil=True, inline="always")
def _msb(x):
    # index of highest set bit; x must be nonzero
    r = np.int64(0)
    if x >> np.uint64(32):
        r += 32
        x >>= np.uint64(32)
    if x >> np.uint64(16):
        r += 16
        x >>= np.uint64(16)
    if x >> np.uint64(8):
        r += 8
        x >>= np.uint64(8)
    if x >> np.uint64(4):
        r += 4
        x >>= np.uint64(4)
    if x >> np.uint64(2):
        r += 2
        x >>= np.uint64(2)
    if x >> np.uint64(1):
        r += 1
    return r


@njit(cache=True, nogil=True)
def _explore_kernel(
    p_arr, offs, cmask, qmod, rem, forb, mask0, u0, unc0, stop, trail_i, trail_r, counters
):
    """Exhaust one subtree.  Returns 0 exhausted, 1 found, 2 aborted.

    counters: [0] nodes, [1] capacity prunes, [2] class-count prunes,
    [3] found trail depth.
    """
    n = p_arr.shape[0]
    W = mask0.shape[0]
    pmax = forb.shape[1]
    maxd = trail_i.shape[0]

    # uncovered-position count per (prime, class), kept exact at the
    # current node; bits above the window are pre-covered in mask0
    cnt = np.zeros((n, pmax), dtype=np.int32)
    for w in range(W):
        x = ~mask0[w]
        while x:
            b = _ctz(x)
            x &= x - _1
            q1 = 64 * w + b  # q - 1
            for j in range(n):
                cnt[j, qmod[q1, j]] += 1

    masks = np.zeros((maxd + 1, W), dtype=np.uint64)
    diffs = np.zeros((maxd + 1, W), dtype=np.uint64)
    tmp = np.zeros(W, dtype=np.uint64)
    u_st = np.zeros(maxd + 1, dtype=np.int64)
    unc_st = np.zeros(maxd + 1, dtype=np.int64)
    nexti = np.zeros(maxd + 1, dtype=np.int64)
    excl_i = np.zeros((maxd + 1, n), dtype=np.int64)
    excl_r = np.zeros((maxd + 1, n), dtype=np.int64)
    excl_n = np.zeros(maxd + 1, dtype=np.int64)
    for w in range(W):
        masks[0, w] = mask0[w]
    u_st[0] = u0
    unc_st[0] = unc0
    d = 0

    while True:
        if stop[0] != 0:
            return 2
        u = u_st[d]
        i = nexti[d]
        chosen = -1
        while i < n:
            if rem[i] > 0 and forb[i, qmod[u - 1, i]] == 0:
                chosen = i
                break
            i += 1
        if chosen < 0:
            # node exhausted: drop its exclusions, then exclude its own
            # entering choice from the parent's remaining branches
            for t in range(excl_n[d]):
                forb[excl_i[d, t], excl_r[d, t]] = 0
            excl_n[d] = 0
            if d == 0:
                return 0
            for w in range(W):
                x = diffs[d, w]
                while x:
                    b = _ctz(x)
                    x &= x - _1
                    q1 = 64 * w + b
                    for j in range(n):
                        cnt[j, qmod[q1, j]] += 1
            d -= 1
            pi = trail_i[d]
            pr = trail_r[d]
            rem[pi] += 1
            forb[pi, pr] = 1
            excl_i[d, excl_n[d]] = pi
            excl_r[d, excl_n[d]] = pr
            excl_n[d] += 1
            continue
        nexti[d] = chosen + 1
        r = qmod[u - 1, chosen]
        row = offs[chosen] + r
        counters[0] += 1
        newcov = 0
        for w in range(W):
            dw = cmask[row, w] & ~masks[d, w]
            tmp[w] = dw
            newcov += _popcnt(dw)
        cunc = unc_st[d] - newcov
        if cunc == 0:
            trail_i[d] = chosen
            trail_r[d] = r
            counters[3] = d + 1
            return 1
        cu = np.int64(0)
        for w in range((u - 1) >> 6, W):
            x = ~(masks[d, w] | tmp[w])
            if x:
                cu = 64 * w + _ctz(x) + 1
                break
        cv = np.int64(0)
        for w in range(W - 1, -1, -1):
            x = ~(masks[d, w] | tmp[w])
            if x:
                cv = 64 * w + _msb(x) + 1
                break
        wlen = cv - cu + 1
        capsum = 0
        for j in range(n):
            k = rem[j] - 1 if j == chosen else rem[j]
            if k > 0:
                pq = wlen // p_arr[j]
                ps = wlen % p_arr[j]
                capsum += k * pq + (k if ps > k else ps)
        if capsum < cunc:
            counters[1] += 1
            forb[chosen, r] = 1
            excl_i[d, excl_n[d]] = chosen
            excl_r[d, excl_n[d]] = r
            excl_n[d] += 1
            continue
        for w in range(W):
            x = tmp[w]
            while x:
                b = _ctz(x)
                x &= x - _1
                q1 = 64 * w + b
                for j in range(n):
                    cnt[j, qmod[q1, j]] -= 1
        ecap = 0
        for j in range(n):
            k = rem[j] - 1 if j == chosen else rem[j]
            if k <= 0:
                continue
            b1 = np.int64(0)
            b2 = np.int64(0)
            for rr in range(p_arr[j]):
                if forb[j, rr] != 0:
                    continue
                c = np.int64(cnt[j, rr])
                if c > b1:
                    b2 = b1
                    b1 = c
                elif c > b2:
                    b2 = c
            ecap += b1 if k == 1 else b1 + b2
            if ecap >= cunc:
                break
        if ecap < cunc:
            counters[2] += 1
            for w in range(W):
                x = tmp[w]
                while x:
                    b = _ctz(x)
                    x &= x - _1
                    q1 = 64 * w + b
                    for j in range(n):
                        cnt[j, qmod[q1, j]] += 1
            forb[chosen, r] = 1
            excl_i[d, excl_n[d]] = chosen
            excl_r[d, excl_n[d]] = r
            excl_n[d] += 1
            continue
        rem[chosen] -= 1
        trail_i[d] = chosen
        trail_r[d] = r
        for w in range(W):
            diffs[d + 1, w] = tmp[w]
            masks[d + 1, w] = masks[d, w] | tmp[w]
        u_st[d + 1] = cu
        unc_st[d + 1] = cunc
        nexti[d + 1] = 0
        excl_n[d + 1] = 0
        d += 1


# ---------------------------------------------------------------------------
# packing and dispatch

_CACHE: dict[tuple[tuple[int, ...], int], tuple] = {}


def prepare(primes: tuple[int, ...], cm: list[list[int]], length: int) -> tuple:
    """Pack the class masks for (primes, length) into kernel arrays.

    Called once per feasibility run, before any worker threads start;
    explore() only reads the cached entry.
    """
    key = (primes, length)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    n = len(primes)
    W = (length + 63) // 64
    p_arr = np.array(primes, dtype=np.int64)
    offs = np.zeros(n, dtype=np.int64)
    cmask = np.zeros((sum(primes), W), dtype=np.uint64)
    o = 0
    for i, p in enumerate(primes):
        offs[i] = o
        for r in range(p):
            v = cm[i][r]
            for w in range(W):
                cmask[o + r, w] = (v >> (64 * w)) & _MASK64
        o += p
    qq = np.arange(1, 64 * W + 1, dtype=np.int64)
    qmod = (qq[:, None] % p_arr[None, :]).astype(np.int16)
    # positions beyond the window read as covered
    pad = ((1 << (64 * W)) - 1) ^ ((1 << length) - 1)
    entry = (p_arr, offs, cmask, qmod, W, pad)
    if len(_CACHE) > 16:
        _CACHE.clear()
    _CACHE[key] = entry
    return entry


def new_stop_word() -> np.ndarray:
    return np.zeros(1, dtype=np.uint8)


def explore(
    length: int,
    primes: tuple[int, ...],
    start: Any,
    stats: Any,
    stop_word: np.ndarray | None,
) -> tuple[str, tuple[tuple[int, int], ...] | None]:
    """Kernel-backed counterpart of search._explore_python."""
    p_arr, offs, cmask, qmod, W, pad = _CACHE[(primes, length)]
    if start.uncovered == 0:
        return "found", start.trail
    n = len(primes)
    m = start.mask | pad
    mask0 = np.array(
        [(m >> (64 * w)) & _MASK64 for w in range(W)], dtype=np.uint64
    )
    rem = np.array(start.rem, dtype=np.int64)
    forb = np.zeros((n, int(p_arr.max())), dtype=np.uint8)
    for i, banned in enumerate(start.forbidden):
        for r in banned:
            forb[i, r] = 1
    maxd = int(rem.sum()) + 1
    trail_i = np.zeros(maxd, dtype=np.int64)
    trail_r = np.zeros(maxd, dtype=np.int64)
    counters = np.zeros(4, dtype=np.int64)
    if stop_word is None:
        stop_word = new_stop_word()
    status = _explore_kernel(
        p_arr,
        offs,
        cmask,
        qmod,
        rem,
        forb,
        mask0,
        np.int64(start.uncovered_from),
        np.int64(start.uncovered),
        stop_word,
        trail_i,
        trail_r,
        counters,
    )
    stats.nodes += int(counters[0])
    stats.pruned_capacity += int(counters[1])
    stats.pruned_classcount += int(counters[2])
    if status == 1:
        depth = int(counters[3])
        suffix = tuple((int(trail_i[t]), int(trail_r[t])) for t in range(depth))
        return "found", start.trail + suffix
    if status == 2:
        return "aborted", None
    return "exhausted", None
