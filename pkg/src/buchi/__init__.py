"""Exact arithmetic for Buchi sequences and the orbit structure of x1^2 - 2 x2^2 + x3^2 = a."""

from .core import (
    B,
    B_INV,
    I,
    J,
    Triple,
    apply_left,
    apply_right,
    gamma_form,
    is_perfect_square,
    is_trivial_sequence,
    omega_form,
    parse_sequence,
    parse_triple,
    second_differences,
)
from .decompose import (
    DELTA2,
    Decomposition,
    Parity,
    classify_orbit_mod8,
    decompose,
    mod8_exhaustive_check,
    parity,
    theta2_to_delta2,
)
from .estimators import OrbitClassifier, ThetaReducer, check_triples
from .lab import (
    SearchRecord,
    analyze5,
    compute_mx,
    extend_sequence,
    find_canonical_subseq,
    gamma_box_scan,
    gap_check,
    hensley_generate,
    is_canonical,
    orbit_bfs,
    problem_a_scan,
    problem_b_scan,
    search_buchi,
    sign_normalize_5,
)
from .reduction import (
    InfiniteThetaError,
    NotInGammaError,
    Region,
    ReductionTrace,
    classify_region,
    enumerate_theta,
    phi_step,
    reduce_to_theta,
)
from .words import (
    IDENTITY,
    WORD_J,
    Word,
    b_power,
    format_word,
    parse_word,
    word_apply,
    word_eval,
    word_inv,
    word_length,
    word_mul,
    word_normalize,
)

__version__ = "0.1.0"

__all__ = [
    "B",
    "B_INV",
    "I",
    "J",
    "Triple",
    "apply_left",
    "apply_right",
    "gamma_form",
    "is_perfect_square",
    "is_trivial_sequence",
    "omega_form",
    "parse_sequence",
    "parse_triple",
    "second_differences",
    "DELTA2",
    "Decomposition",
    "Parity",
    "classify_orbit_mod8",
    "decompose",
    "mod8_exhaustive_check",
    "parity",
    "theta2_to_delta2",
    "OrbitClassifier",
    "ThetaReducer",
    "check_triples",
    "SearchRecord",
    "analyze5",
    "compute_mx",
    "extend_sequence",
    "find_canonical_subseq",
    "gamma_box_scan",
    "gap_check",
    "hensley_generate",
    "is_canonical",
    "orbit_bfs",
    "problem_a_scan",
    "problem_b_scan",
    "search_buchi",
    "sign_normalize_5",
    "InfiniteThetaError",
    "NotInGammaError",
    "Region",
    "ReductionTrace",
    "classify_region",
    "enumerate_theta",
    "phi_step",
    "reduce_to_theta",
    "IDENTITY",
    "WORD_J",
    "Word",
    "b_power",
    "format_word",
    "parse_word",
    "word_apply",
    "word_eval",
    "word_inv",
    "word_length",
    "word_mul",
    "word_normalize",
]
