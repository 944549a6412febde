"""Shared domain types and exact combinatorics for two-list merge problems.

Conventions used throughout the lab:
  A = a_1 < ... < a_m and B = b_1 < ... < b_n are the two sorted inputs.
  A problem may carry a boundary constraint on each side:
    left  A_LESS_B    : a_1 < b_1        left  A_GREATER_B : a_1 > b_1
    right A_LESS_B    : a_m < b_n        right A_GREATER_B : a_m > b_n
  Serialization tokens (files, CLI): "dot" = no constraint, "bs" = A_LESS_B,
  "fs" = A_GREATER_B.

All arithmetic is exact integer arithmetic; base-2 logarithms are taken as
ceil_lg over exact integers via bit length.  No floating point anywhere, so
every table entry is bit-for-bit reproducible.
"""

from __future__ import annotations

import math
from enum import IntEnum
from typing import NamedTuple

from .errors import MergeLabError


class Constraint(IntEnum):
    NONE = 0
    A_LESS_B = 1
    A_GREATER_B = 2

    @property
    def token(self) -> str:
        return _TOKENS[self]


_TOKENS = {Constraint.NONE: "dot", Constraint.A_LESS_B: "bs", Constraint.A_GREATER_B: "fs"}
_FROM_TOKEN = {v: k for k, v in _TOKENS.items()}

DOT = Constraint.NONE
BS = Constraint.A_LESS_B
FS = Constraint.A_GREATER_B


def constraint_from_token(token: str) -> Constraint:
    try:
        return _FROM_TOKEN[token]
    except KeyError:
        raise MergeLabError(f"unknown constraint token {token!r}; expected dot, bs, or fs") from None


class ProblemKey(NamedTuple):
    """A constrained (m, n) merge problem.

    Keys with extension_count 0 (no consistent interleaving) may be built and
    probed, but tables refuse to store values for them.
    """

    m: int
    n: int
    left: Constraint = Constraint.NONE
    right: Constraint = Constraint.NONE


def binomial(a: int, b: int) -> int:
    """Exact C(a, b); zero when b > a or b < 0."""
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def ceil_lg(x: int) -> int:
    """Ceiling of the base-2 log of a positive integer, exactly."""
    if x <= 0:
        raise ValueError(f"ceil_lg needs a positive integer, got {x}")
    return (x - 1).bit_length()


def info_bound(m: int, n: int) -> int:
    """Information-theoretic lower bound: ceil(lg C(m+n, m))."""
    return ceil_lg(binomial(m + n, m))


def extension_count(key: ProblemKey) -> int:
    """Number of interleavings of the two chains consistent with the boundary
    constraints.

    A left a_1<b_1 constraint forces the merged order to start with a_1, a left
    a_1>b_1 constraint forces it to start with b_1, and symmetrically on the
    right; stripping each forced boundary element leaves a free interleaving,
    so the count is C(m'+n', m') for the reduced sizes (0 if either goes
    negative, i.e. the constraints contradict).
    """
    m, n, left, right = key
    mr = m - (left == Constraint.A_LESS_B) - (right == Constraint.A_GREATER_B)
    nr = n - (left == Constraint.A_GREATER_B) - (right == Constraint.A_LESS_B)
    if mr < 0 or nr < 0:
        return 0
    return binomial(mr + nr, mr)


def is_consistent(key: ProblemKey) -> bool:
    return extension_count(key) >= 1


def is_terminal(key: ProblemKey) -> bool:
    """True when the merged order is fully determined (0 comparisons left)."""
    return extension_count(key) == 1


def tape_merge_worst(m: int, n: int) -> int:
    """Worst-case comparisons of head-to-head (tape) merging: m+n-1."""
    if m <= 0 or n <= 0:
        return 0
    return m + n - 1


def floor_lg_ratio(m: int, n: int) -> int:
    """Largest t with m * 2^t <= n, for 1 <= m <= n. Integer arithmetic only."""
    t = 0
    while m << (t + 1) <= n:
        t += 1
    return t


def hwang_lin_formula(m: int, n: int) -> int:
    """Closed-form worst case of Hwang-Lin binary merge, m(1+t) + floor(n/2^t) - 1
    with t = floor(lg(n/m)).  Requires 1 <= m <= n."""
    if m < 1 or m > n:
        raise MergeLabError(f"hwang_lin_formula requires 1 <= m <= n, got ({m}, {n})")
    t = floor_lg_ratio(m, n)
    return m * (1 + t) + (n >> t) - 1
