"""Constant arithmetic subsequences and rational spectra of substitution subshifts.

The library answers, with exact integer arithmetic, whether the fixed point of
a primitive substitution (or its image under a letter-to-letter coding) has a
constant subsequence along an arithmetic progression of a given common
difference, computes the set of all admissible differences as a finite
descriptor, and, for constant-length substitutions, describes every admissible
difference through a digit automaton.
"""

from .apdecide import APWitness, ap_exponent, constant_ap_witnesses
from .errors import (
    ArithsubError,
    BudgetError,
    DomainError,
    InputSyntaxError,
    InvariantError,
    NotCodingError,
    PeriodicInputError,
    PrimitivityError,
    ProperRequiredError,
)
from .heightgraph import (
    AutoClassification,
    DifferenceWitnesses,
    GraphClassification,
    HeightData,
    LevelReport,
    PeriodGraph,
    alphabet_at,
    all_long_walks_singleton,
    branching_number,
    classify,
    constant_difference_witnesses,
    difference_witnesses,
    graph_to_dot,
    height,
    level_reports,
    period_graph,
    phi_image,
)
from .intmat import IntMatrix, RecurrenceData, incidence, is_primitive, minimal_recurrence, row_power
from .oracle import ResidueStatus, default_scan_length, factor_intersection, prefix_ap_scan
from .periodicity import (
    PeriodicityKind,
    PeriodicityVerdict,
    complexity,
    essential_period_scan,
    periodicity_test,
)
from .spectrum import (
    SpectrumDescriptor,
    StepThreeTrace,
    bounded_exponents,
    constant_length_spectrum,
    infinite_primes,
    periodic_spectrum,
    prime_periods,
    step_three_trace,
    two_letter_spectrum,
)
from .words import (
    Alphabet,
    Morphism,
    SeedPair,
    SubstitutionProfile,
    Word,
    admissible_seeds,
    coding_from_rules,
    factors_of_length,
    fixed_point_prefix,
    identity_coding,
    language_two_factors,
    substitution,
    two_factor_closure,
)

__version__ = "0.1.0"
