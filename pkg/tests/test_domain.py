import itertools

import pytest

from jacobsthal import (
    MAX_PRIMES,
    ProblemKind,
    ResidueAssignment,
    bound_value,
    capacity,
    nth_primes,
    prime_context,
    slot_vector,
    slots_for_prime,
    validate_assignment,
)


def test_nth_primes_small():
    assert nth_primes(1) == (2,)
    assert nth_primes(5) == (2, 3, 5, 7, 11)


def test_nth_primes_21st_is_73():
    assert nth_primes(21)[-1] == 73


def test_nth_primes_are_prime_and_gapless():
    primes = nth_primes(MAX_PRIMES)

    def is_prime(x):
        return x >= 2 and all(x % d for d in range(2, int(x**0.5) + 1))

    assert all(is_prime(p) for p in primes)
    # no prime skipped between consecutive entries
    for a, b in zip(primes, primes[1:]):
        assert not any(is_prime(x) for x in range(a + 1, b))


@pytest.mark.parametrize("bad", [0, -3, MAX_PRIMES + 1])
def test_nth_primes_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        nth_primes(bad)


def test_capacity_examples():
    assert capacity(3, 2, 5) == 4
    assert capacity(2, 1, 7) == 4
    assert capacity(5, 1, 5) == 1


def test_capacity_matches_enumeration_small():
    # brute force: best union of k distinct classes mod p over {1..L}
    for p in (2, 3, 5, 7):
        for k in (1, 2):
            if k > p:
                continue
            for length in range(1, 40):
                best = 0
                for cls in itertools.combinations(range(p), k):
                    cov = sum(1 for q in range(1, length + 1) if q % p in cls)
                    best = max(best, cov)
                assert capacity(p, k, length) == best, (p, k, length)


def test_capacity_saturates_at_window():
    assert capacity(3, 3, 17) == 17
    assert capacity(2, 5, 9) == 9


def test_slots_for_prime():
    for p in (2, 3, 5, 31):
        assert slots_for_prime(ProblemKind.CLASSIC, p) == 1
    assert slots_for_prime(ProblemKind.PAIRED, 2) == 1
    for p in (3, 5, 7, 31):
        assert slots_for_prime(ProblemKind.PAIRED, p) == 2


def test_slot_vector():
    primes = nth_primes(4)
    assert slot_vector(ProblemKind.CLASSIC, primes) == (1, 1, 1, 1)
    assert slot_vector(ProblemKind.PAIRED, primes) == (1, 2, 2, 2)


def test_bound_value():
    assert bound_value(prime_context(1)) == 2
    assert bound_value(prime_context(3)) == 20
    assert bound_value(prime_context(21)) == 5256


def test_prime_context():
    ctx = prime_context(4)
    assert ctx.primes == (2, 3, 5, 7)
    assert ctx.primorial == 210
    assert ctx.bound == 42


def test_validate_assignment_accepts_valid():
    ctx = prime_context(2)
    asg = ResidueAssignment(
        kind=ProblemKind.PAIRED, length=5, classes=((1,), (1, 2))
    )
    validate_assignment(asg, ctx)  # no raise


@pytest.mark.parametrize(
    "length,classes",
    [
        (0, ((1,), (1, 2))),  # nonpositive window
        (5, ((1,),)),  # wrong arity
        (5, ((0, 1), (1,))),  # slot budget exceeded at p = 2
        (5, ((1,), (2, 2))),  # repeated residue
        (5, ((1,), (1, 3))),  # residue out of range mod 3
    ],
)
def test_validate_assignment_rejects(length, classes):
    ctx = prime_context(2)
    asg = ResidueAssignment(kind=ProblemKind.PAIRED, length=length, classes=classes)
    with pytest.raises(ValueError):
        validate_assignment(asg, ctx)


def test_validate_assignment_classic_single_slot():
    ctx = prime_context(2)
    asg = ResidueAssignment(
        kind=ProblemKind.CLASSIC, length=3, classes=((1,), (1, 2))
    )
    with pytest.raises(ValueError):
        validate_assignment(asg, ctx)
