"""Exact Jacobsthal-type covering computations at primorials.

h(n) is the classic value: the largest window length m such that some m
consecutive integers all share a factor with the product of the first n
primes, plus one.  h2(n) is the paired variant, where windows of two
progressions with even offset difference are wiped out jointly.  Both
are computed exactly by a covering search and certified by independently
verifiable witnesses.
"""

from .covering import (
    CoverageMask,
    cover,
    crt_reconstruct,
    crt_solve,
    is_full_cover,
    load_witness,
    save_witness,
    surviving_position,
    verify_witness,
    witness_from_json_dict,
    witness_to_json_dict,
)
from .domain import (
    MAX_PRIMES,
    ComputationResult,
    PrimeContext,
    ProblemKind,
    ResidueAssignment,
    Witness,
    bound_value,
    capacity,
    nth_primes,
    prime_context,
    slot_vector,
    slots_for_prime,
    validate_assignment,
)
from .search import (
    SearchNode,
    SearchStats,
    assignment_oracle,
    class_mask_table,
    compute_h,
    default_workers,
    definition_oracle,
    feasible,
    greedy_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_PRIMES",
    "ComputationResult",
    "CoverageMask",
    "PrimeContext",
    "ProblemKind",
    "ResidueAssignment",
    "SearchNode",
    "SearchStats",
    "Witness",
    "assignment_oracle",
    "bound_value",
    "capacity",
    "class_mask_table",
    "compute_h",
    "cover",
    "crt_reconstruct",
    "crt_solve",
    "default_workers",
    "definition_oracle",
    "feasible",
    "greedy_lower_bound",
    "is_full_cover",
    "load_witness",
    "nth_primes",
    "prime_context",
    "save_witness",
    "slot_vector",
    "slots_for_prime",
    "surviving_position",
    "validate_assignment",
    "verify_witness",
    "witness_from_json_dict",
    "witness_to_json_dict",
    "__version__",
]
