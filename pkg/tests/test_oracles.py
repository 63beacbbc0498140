"""The two brute-force oracles, pinned first and against each other.

These anchor everything: the search engines are validated against the
oracles, never the other way around.
"""

import pytest

from jacobsthal import (
    ProblemKind,
    assignment_oracle,
    compute_h,
    definition_oracle,
    prime_context,
)

PAIRED = ProblemKind.PAIRED
CLASSIC = ProblemKind.CLASSIC


def test_definition_oracle_paired():
    assert [definition_oracle(prime_context(n), PAIRED) for n in (1, 2, 3, 4)] == [
        2,
        6,
        18,
        30,
    ]


def test_definition_oracle_classic():
    assert [definition_oracle(prime_context(n), CLASSIC) for n in (1, 2, 3, 4)] == [
        2,
        4,
        6,
        10,
    ]


def test_assignment_oracle_paired():
    assert [assignment_oracle(prime_context(n), PAIRED) for n in (1, 2, 3, 4)] == [
        2,
        6,
        18,
        30,
    ]


def test_assignment_oracle_classic():
    assert [assignment_oracle(prime_context(n), CLASSIC) for n in (1, 2, 3, 4, 5)] == [
        2,
        4,
        6,
        10,
        14,
    ]


def test_oracles_agree_with_each_other_and_the_search():
    for kind in (PAIRED, CLASSIC):
        for n in (1, 2, 3, 4):
            ctx = prime_context(n)
            a = definition_oracle(ctx, kind)
            b = assignment_oracle(ctx, kind)
            c = compute_h(ctx, kind).h
            assert a == b == c, (kind, n, a, b, c)


def test_oracle_ceilings():
    with pytest.raises(ValueError):
        definition_oracle(prime_context(5), PAIRED)
    with pytest.raises(ValueError):
        assignment_oracle(prime_context(6), PAIRED)
