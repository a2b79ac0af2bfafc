"""Cost-redundancy proof systems for MaxSAT instances with blocking variables."""

from ._core import (
    FormatError,
    Instance,
    ResourceLimit,
    blockify_wcnf,
    brute_cost,
    certify,
    check_cost_condition,
    check_msr_proof,
    check_proof,
    classify_witness,
    export_veripb,
    flip_degree,
    gen_bphp,
    gen_bphp_proof,
    gen_hamming,
    optimal_assignments,
    parse_instance,
    print_instance,
)

__all__ = [
    "FormatError",
    "Instance",
    "ResourceLimit",
    "blockify_wcnf",
    "brute_cost",
    "certify",
    "check_cost_condition",
    "check_msr_proof",
    "check_proof",
    "classify_witness",
    "export_veripb",
    "flip_degree",
    "gen_bphp",
    "gen_bphp_proof",
    "gen_hamming",
    "optimal_assignments",
    "parse_instance",
    "print_instance",
]

__version__ = "0.1.0"
