"""Exact computations for unique expansions in non-integer bases."""

from .words import (
    EventuallyPeriodicSequence,
    Ordering,
    closure_U_condition,
    is_admissible_alpha,
    lambda_sequence,
    lex_compare,
    reflect,
    thue_morse,
    word_minus,
    word_plus,
)
from .algebraic import AlgebraicReal, Enclosure, compare, isolate_roots, refine

__version__ = "0.1.0"
