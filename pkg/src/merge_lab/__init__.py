"""Minimum-comparison merging laboratory.

Computes restricted-adversary lower-bound tables for two-list merging, solves
the exact merge game at small scale, runs instrumented merge algorithms under
an exhaustive worst-case harness, and machine-checks the accompanying lemma
and theorem catalog over the computed tables.
"""

from .adversary import AdversaryTable, SplitStrategy, compute_tables
from .combinatorics import (
    Constraint,
    ProblemKey,
    binomial,
    extension_count,
    hwang_lin_formula,
    info_bound,
    is_consistent,
    is_terminal,
    tape_merge_worst,
)
from .game import GameSolver, SolveOutcome
from .harness import MeasureResult, fuzz, measure, replay
from .knowledge import KnowledgeState, apply_outcome, canonicalize, completions, initial_state
from .verification import Report, alpha_bracket, audit_upper_recurrences, run_suite

__version__ = "0.1.0"
