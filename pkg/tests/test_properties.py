"""Property-based checks with hypothesis."""

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from jacobsthal import (
    ProblemKind,
    ResidueAssignment,
    Witness,
    capacity,
    cover,
    crt_reconstruct,
    feasible,
    is_full_cover,
    prime_context,
    slot_vector,
    verify_witness,
    witness_from_json_dict,
    witness_to_json_dict,
)

PAIRED = ProblemKind.PAIRED
CLASSIC = ProblemKind.CLASSIC

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def enumerated_capacity(p, k, length):
    best = 0
    for cls in itertools.combinations(range(p), min(k, p)):
        best = max(best, sum(1 for q in range(1, length + 1) if q % p in cls))
    return best


@given(
    p=st.sampled_from(SMALL_PRIMES),
    k=st.integers(1, 3),
    length=st.integers(1, 80),
)
def test_capacity_equals_enumeration(p, k, length):
    assert capacity(p, k, length) == enumerated_capacity(p, k, length)


@given(
    p=st.sampled_from(SMALL_PRIMES),
    k=st.integers(1, 3),
    length=st.integers(1, 200),
)
def test_capacity_monotone_and_bounded(p, k, length):
    assert capacity(p, k, length) <= length
    assert capacity(p, k, length) <= capacity(p, k, length + 1)
    assert capacity(p, k, length) <= capacity(p, k + 1, length)


@st.composite
def assignments(draw, kind=PAIRED):
    n = draw(st.integers(1, 4))
    ctx = prime_context(n)
    length = draw(st.integers(1, 60))
    budgets = slot_vector(kind, ctx.primes)
    classes = []
    for p, budget in zip(ctx.primes, budgets):
        size = draw(st.integers(0, budget))
        cls = draw(
            st.lists(
                st.integers(0, p - 1), min_size=size, max_size=size, unique=True
            )
        )
        classes.append(tuple(sorted(cls)))
    return ctx, ResidueAssignment(kind=kind, length=length, classes=tuple(classes))


@given(data=assignments())
def test_cover_matches_position_scan(data):
    ctx, asg = data
    mask = cover(asg, ctx)
    for q in range(1, asg.length + 1):
        hit = any(q % p in cls for p, cls in zip(ctx.primes, asg.classes))
        assert mask.covers(q) == hit


@given(data=assignments(), extra=st.integers(0, 100))
def test_cover_grows_with_added_class(data, extra):
    ctx, asg = data
    before = cover(asg, ctx).bits
    classes = list(asg.classes)
    budgets = slot_vector(asg.kind, ctx.primes)
    for i, (p, budget) in enumerate(zip(ctx.primes, budgets)):
        if len(classes[i]) < budget:
            r = next(x for x in range(extra, extra + p) if x % p not in classes[i])
            classes[i] = tuple(sorted(classes[i] + (r % p,)))
            grown = ResidueAssignment(
                kind=asg.kind, length=asg.length, classes=tuple(classes)
            )
            after = cover(grown, ctx).bits
            assert before & after == before  # coverage only grows
            return


@given(data=assignments())
def test_truncation_keeps_cover_full(data):
    ctx, asg = data
    if asg.length < 2 or not is_full_cover(asg, ctx):
        return
    shorter = ResidueAssignment(
        kind=asg.kind, length=asg.length - 1, classes=asg.classes
    )
    assert is_full_cover(shorter, ctx)


@given(data=assignments())
def test_reflection_preserves_full_covers(data):
    ctx, asg = data
    L = asg.length
    reflected = ResidueAssignment(
        kind=asg.kind,
        length=L,
        classes=tuple(
            tuple(sorted({(L + 1 - r) % p for r in cls}))
            for p, cls in zip(ctx.primes, asg.classes)
        ),
    )
    assert is_full_cover(asg, ctx) == is_full_cover(reflected, ctx)


@given(data=assignments())
def test_crt_round_trip(data):
    ctx, asg = data
    if not is_full_cover(asg, ctx):
        return
    w = crt_reconstruct(asg, ctx)
    assert w.length == asg.length
    assert verify_witness(w, ctx)


@given(
    n=st.integers(1, 4),
    t=st.integers(-3, 3),
    stretch=st.integers(0, 1),
)
@settings(max_examples=40)
def test_translation_by_the_primorial_is_invariant(n, t, stretch):
    ctx = prime_context(n)
    asg = feasible_cover(ctx)
    w = crt_reconstruct(asg, ctx)
    probe = Witness(PAIRED, w.a + t * ctx.primorial, w.b + t * ctx.primorial,
                    w.length + stretch)
    base = Witness(PAIRED, w.a, w.b, w.length + stretch)
    assert verify_witness(probe, ctx) == verify_witness(base, ctx)


_COVER_CACHE = {}


def feasible_cover(ctx):
    if ctx.n not in _COVER_CACHE:
        h2 = {1: 2, 2: 6, 3: 18, 4: 30}[ctx.n]
        _COVER_CACHE[ctx.n] = feasible(h2 - 1, ctx, PAIRED)
    return _COVER_CACHE[ctx.n]


@given(n=st.integers(1, 4), mutation=st.sampled_from(
    ["length+1", "a+1", "a-1", "b+1", "b-1", "both+1", "both-1"]
))
@settings(max_examples=60)
def test_mutated_optimal_witness_never_verifies(n, mutation):
    ctx = prime_context(n)
    w = crt_reconstruct(feasible_cover(ctx), ctx)
    assert verify_witness(w, ctx)
    da, db, dl = {
        "length+1": (0, 0, 1),
        "a+1": (1, 0, 0),
        "a-1": (-1, 0, 0),
        "b+1": (0, 1, 0),
        "b-1": (0, -1, 0),
        "both+1": (1, 1, 0),
        "both-1": (-1, -1, 0),
    }[mutation]
    mutated = Witness(PAIRED, w.a + da, w.b + db, w.length + dl)
    try:
        assert not verify_witness(mutated, ctx)
    except ValueError:
        assert (da + db) % 2 == 1  # only parity breaks may raise


@given(
    a=st.integers(0, 10**45),
    diff=st.integers(-(10**6), 10**6),
    length=st.integers(1, 10**6),
    n=st.integers(1, 64),
)
def test_witness_json_round_trip(a, diff, length, n):
    w = Witness(PAIRED, a, a + 2 * diff, length)
    w2, n2 = witness_from_json_dict(witness_to_json_dict(w, n))
    assert w2 == w and n2 == n
