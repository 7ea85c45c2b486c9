"""Turing machine generic-case halting laboratory (C++ core)."""

from ._tmlab import (
    DomainError,
    IncompatibleModel,
    ParseError,
    TooManyPrograms,
    Program,
    classify,
    conservative_halting,
    count_programs,
    decide_halting_on_b,
    derive_trial_seed,
    estimate_density,
    exact_density,
    falloff_cdf_exact,
    finite_domain_witness,
    first_passage,
    has_halt_transition,
    in_b,
    nohalt_exact_fraction,
    parse_program,
    run,
    run_cli,
    sample_program,
)

__all__ = [
    "DomainError",
    "IncompatibleModel",
    "ParseError",
    "TooManyPrograms",
    "Program",
    "classify",
    "conservative_halting",
    "count_programs",
    "decide_halting_on_b",
    "derive_trial_seed",
    "estimate_density",
    "exact_density",
    "falloff_cdf_exact",
    "finite_domain_witness",
    "first_passage",
    "has_halt_transition",
    "in_b",
    "nohalt_exact_fraction",
    "parse_program",
    "run",
    "run_cli",
    "sample_program",
]
