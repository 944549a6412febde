"""Restricted-adversary game values for all nine constrained merge problems.

The adversary model: after the algorithm queries a_i vs b_j, the adversary
must commit to a split of the current problem into a LOW block and a HIGH
block that decides the queried comparison.  Everything in the low block is
pledged smaller than everything in the high block, except that the two blocks
may share a single element of one list; the shared element is then pinned
between the two lists' cut points by a pair of boundary pledges.  Three reply
families:

  simple(p, q)    disjoint: low = (a_1..a_p, b_1..b_q), high = the rest.
  shared_a(k, q)  a_k in both blocks: low = (a_1..a_k, b_1..b_q) pledging
                  a_k > b_q, high = (a_k..a_m, b_{q+1}..b_n) pledging
                  a_k < b_{q+1}.
  shared_b(p, l)  b_l in both blocks: low = (a_1..a_p, b_1..b_l) pledging
                  a_p < b_l, high = (a_{p+1}..a_m, b_l..b_n) pledging
                  a_{p+1} > b_l.

Each block becomes an independent constrained subproblem: the original left
constraint follows a_1 into the low block (or is implied by the cut and
dropped), the right constraint follows a_m/b_n into the high block, and the
pledges become the blocks' inner right/left constraints.

A reply answers the query only when a_i and b_j land in different blocks and
neither is the shared element:

  simple    (i <= p and j > q) or (i > p and j <= q)
  shared_a  (i < k  and j > q) or (i > k and j <= q)
  shared_b  (i <= p and j > l) or (i > p and j < l)

and the reply must not contradict the problem's own boundary constraints,
and both blocks must admit a consistent interleaving.

Game value:
  V(block) = 0 once either list of the block is EMPTY, else
  V = min over queries (i, j) of max over valid replies of 1 + V(low) + V(high).

A block whose lists are both nonempty still costs comparisons even when its
boundary constraints pin its order completely (for example a single a against
a single b with a_1 < b_1 pledged costs exactly 1): the algorithm cannot
retire a block except by driving it, split by split, down to empty lists.
That residual cost is precisely what lets the adversary bank a unit per
boundary constraint and certify tape-merge optimality all the way out to
n/m = 38/25, while the same bookkeeping keeps the whole-problem value an
honest lower bound for merging.

Both blocks of every reply have strictly smaller total size, so the table is
filled layer by layer in m+n.  Within a key, the best reply against (i, j) is
a corner-anchored rectangle maximum in each family's cut plane, so 2-D running
maxima give every query in O(1) and the whole key in O(m*n) instead of the
naive O(m^2 * n^2).  `naive_value` keeps the direct enumeration as a testing
oracle.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator

import numpy as np

from .combinatorics import (
    BS,
    DOT,
    FS,
    Constraint,
    ProblemKey,
    is_consistent,
)
from .errors import (
    CoverageError,
    InconsistentKeyError,
    NoValidReplyError,
    TerminalStateError,
)

INVALID = 32767  # int16 sentinel for inconsistent keys
_NEG = -(1 << 28)  # "no reply" in max-accumulators; dominates any real sum


def is_settled(key: ProblemKey) -> bool:
    """True when the game value is 0: one of the lists is empty."""
    return key.m == 0 or key.n == 0


class ReplyKind(IntEnum):
    SIMPLE = 0
    SHARED_A = 1
    SHARED_B = 2


@dataclass(frozen=True, order=True)
class SplitStrategy:
    """One adversary reply; the ordering gives the documented tie-break
    (simple before shared_a before shared_b, then smallest cut indices)."""

    kind: ReplyKind
    x: int  # p for simple/shared_b, k for shared_a
    y: int  # q for simple/shared_a, l for shared_b

    @staticmethod
    def simple(p: int, q: int) -> "SplitStrategy":
        return SplitStrategy(ReplyKind.SIMPLE, p, q)

    @staticmethod
    def shared_a(k: int, q: int) -> "SplitStrategy":
        return SplitStrategy(ReplyKind.SHARED_A, k, q)

    @staticmethod
    def shared_b(p: int, l: int) -> "SplitStrategy":
        return SplitStrategy(ReplyKind.SHARED_B, p, l)


def reply_subproblems(key: ProblemKey, reply: SplitStrategy) -> tuple[ProblemKey, ProblemKey]:
    m, n, left, right = key
    if reply.kind == ReplyKind.SIMPLE:
        p, q = reply.x, reply.y
        left1 = left if (p >= 1 and q >= 1) else DOT
        right2 = right if (m - p >= 1 and n - q >= 1) else DOT
        return ProblemKey(p, q, left1, DOT), ProblemKey(m - p, n - q, DOT, right2)
    if reply.kind == ReplyKind.SHARED_A:
        k, q = reply.x, reply.y
        return ProblemKey(k, q, left, FS), ProblemKey(m - k + 1, n - q, BS, right)
    p, l = reply.x, reply.y
    return ProblemKey(p, l, left, BS), ProblemKey(m - p, n - l + 1, FS, right)


def reply_in_range(key: ProblemKey, reply: SplitStrategy) -> bool:
    """Cut ranges plus consistency of the cut with the problem's own boundary
    constraints (block consistency is checked separately)."""
    m, n, left, right = key
    if reply.kind == ReplyKind.SIMPLE:
        p, q = reply.x, reply.y
        if not (0 <= p <= m and 0 <= q <= n):
            return False
        if (p, q) == (0, 0) or (p, q) == (m, n):
            return False
        if left == BS and p == 0 and q >= 1:
            return False  # would place b_1 below a_1
        if left == FS and q == 0 and p >= 1:
            return False  # would place a_1 below b_1
        if right == BS and q == n and p < m:
            return False  # would place a_m above b_n
        if right == FS and p == m and q < n:
            return False  # would place b_n above a_m
        return True
    if reply.kind == ReplyKind.SHARED_A:
        return 1 <= reply.x <= m and 1 <= reply.y <= n - 1
    return 1 <= reply.x <= m - 1 and 1 <= reply.y <= n


def reply_resolves(reply: SplitStrategy, i: int, j: int) -> bool:
    """True when the reply decides a_i vs b_j: different blocks, neither
    being the shared element."""
    x, y = reply.x, reply.y
    if reply.kind == ReplyKind.SIMPLE:
        return (i <= x and j > y) or (i > x and j <= y)
    if reply.kind == ReplyKind.SHARED_A:
        return (i < x and j > y) or (i > x and j <= y)
    return (i <= x and j > y) or (i > x and j < y)


def iter_replies(key: ProblemKey) -> Iterator[SplitStrategy]:
    """All in-range replies of a key, in tie-break order."""
    m, n = key.m, key.n
    for p in range(m + 1):
        for q in range(n + 1):
            r = SplitStrategy.simple(p, q)
            if reply_in_range(key, r):
                yield r
    for k in range(1, m + 1):
        for q in range(1, n):
            yield SplitStrategy.shared_a(k, q)
    for p in range(1, m):
        for l in range(1, n + 1):
            yield SplitStrategy.shared_b(p, l)


def valid_replies(key: ProblemKey, i: int, j: int) -> Iterator[SplitStrategy]:
    for reply in iter_replies(key):
        if not reply_resolves(reply, i, j):
            continue
        sub1, sub2 = reply_subproblems(key, reply)
        if is_consistent(sub1) and is_consistent(sub2):
            yield reply


# ---------------------------------------------------------------------------
# naive oracle: direct enumeration, no acceleration
# ---------------------------------------------------------------------------


def naive_value(key: ProblemKey, memo: dict | None = None) -> int:
    """Game value by plain recursion over all queries and all replies."""
    if memo is None:
        memo = {}
    if key in memo:
        return memo[key]
    if not is_consistent(key):
        raise InconsistentKeyError(f"no consistent interleaving for {key}")
    if is_settled(key):
        memo[key] = 0
        return 0
    m, n = key.m, key.n
    candidates = []
    for reply in iter_replies(key):
        sub1, sub2 = reply_subproblems(key, reply)
        if is_consistent(sub1) and is_consistent(sub2):
            candidates.append((reply, 1 + naive_value(sub1, memo) + naive_value(sub2, memo)))
    best = None
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            worst = None
            for reply, v in candidates:
                if reply_resolves(reply, i, j):
                    worst = v if worst is None else max(worst, v)
            if worst is None:
                raise NoValidReplyError(f"query ({i},{j}) on {key} has no valid reply")
            best = worst if best is None else min(best, worst)
    memo[key] = best
    return best


# ---------------------------------------------------------------------------
# accelerated kernel
# ---------------------------------------------------------------------------


def _masked(block: np.ndarray) -> np.ndarray:
    out = block.astype(np.int64)
    out[out == INVALID] = _NEG
    return out


def _suffix_max(a: np.ndarray, axis: int) -> np.ndarray:
    if axis == 0:
        return np.maximum.accumulate(a[::-1, :], axis=0)[::-1, :]
    return np.maximum.accumulate(a[:, ::-1], axis=1)[:, ::-1]


def _reply_max_matrix(values: np.ndarray, m: int, n: int, left: int, right: int) -> np.ndarray:
    """For a consistent key with both lists nonempty, the (m, n) matrix whose
    (i-1, j-1) entry is the best reply value against query (i, j)."""
    T = values

    # simple cuts: S[p, q] = 1 + V(low) + V(high); boundary cells use the
    # dropped-constraint blocks, which are plain (p,q)/(m-p,n-q) values
    S = np.zeros((m + 1, n + 1), dtype=np.int64)
    S[1:, 1:] += T[left, 0, 1 : m + 1, 1 : n + 1]
    S[:m, :n] += T[0, right, 1 : m + 1, 1 : n + 1][::-1, ::-1]
    S += 1
    S[0, 0] = _NEG
    S[m, n] = _NEG
    if left == BS:
        S[0, 1:] = _NEG
    elif left == FS:
        S[1:, 0] = _NEG
    if right == BS:
        S[0:m, n] = _NEG
    elif right == FS:
        S[m, 0:n] = _NEG

    # query (i, j) is answered "less" by cuts with p >= i, q < j and
    # "greater" by cuts with p < i, q >= j: two corner rectangle maxima
    D = np.maximum.accumulate(S[::-1, :], axis=0)[::-1, :]
    D = np.maximum.accumulate(D, axis=1)
    best = D[1:, 0:n].copy()
    E = np.maximum.accumulate(S, axis=0)
    E = np.maximum.accumulate(E[:, ::-1], axis=1)[:, ::-1]
    np.maximum(best, E[0:m, 1:], out=best)

    if m >= 2:
        # shared_b(p, l), p = 1..m-1, l = 1..n:
        # W[p-1, l-1] = 1 + V(p, l, left, a<b) + V(m-p, n-l+1, a>b, right)
        T1 = _masked(T[left, 1, 1:m, 1 : n + 1])
        T2 = _masked(T[2, right, 1:m, 1 : n + 1][::-1, ::-1])
        W = 1 + T1 + T2
        # "less" needs p >= i, l <= j-1
        D1 = _suffix_max(W, 0)
        D1 = np.maximum.accumulate(D1, axis=1)
        np.maximum(best[: m - 1, 1:], D1[:, : n - 1], out=best[: m - 1, 1:])
        # "greater" needs p <= i-1, l >= j+1
        D2 = np.maximum.accumulate(W, axis=0)
        D2 = _suffix_max(D2, 1)
        np.maximum(best[1:, : n - 1], D2[:, 1:], out=best[1:, : n - 1])

    if n >= 2:
        # shared_a(k, q), k = 1..m, q = 1..n-1:
        # W[k-1, q-1] = 1 + V(k, q, left, a>b) + V(m-k+1, n-q, a<b, right)
        T1 = _masked(T[left, 2, 1 : m + 1, 1:n])
        T2 = _masked(T[1, right, 1 : m + 1, 1:n][::-1, ::-1])
        W = 1 + T1 + T2
        # "less" needs k >= i+1, q <= j-1
        D3 = _suffix_max(W, 0)
        D3 = np.maximum.accumulate(D3, axis=1)
        if m >= 2:
            np.maximum(best[: m - 1, 1:], D3[1:, : n - 1], out=best[: m - 1, 1:])
        # "greater" needs k <= i-1, q >= j
        D4 = np.maximum.accumulate(W, axis=0)
        D4 = _suffix_max(D4, 1)
        if m >= 2:
            np.maximum(best[1:, : n - 1], D4[: m - 1, :], out=best[1:, : n - 1])

    return best


def _fill_key(values: np.ndarray, m: int, n: int, left: int, right: int) -> None:
    best = _reply_max_matrix(values, m, n, left, right)
    if (best <= _NEG // 2).any():
        bad = np.argwhere(best <= _NEG // 2)[0]
        raise NoValidReplyError(
            f"key (m={m}, n={n}, left={Constraint(left).token}, right={Constraint(right).token}) "
            f"has no valid adversary reply for query ({bad[0] + 1}, {bad[1] + 1})"
        )
    v = int(best.min())
    if not 0 <= v <= m + n - 1:
        raise AssertionError(f"value {v} out of range for ({m},{n},{left},{right})")
    values[left, right, m, n] = v


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------

_FLIP = {DOT: DOT, BS: FS, FS: BS}


def symmetry_orbit(key: ProblemKey) -> list[ProblemKey]:
    """Images of a key under list swap and order reversal."""
    m, n, left, right = key
    swap = ProblemKey(n, m, _FLIP[left], _FLIP[right])
    rev = ProblemKey(m, n, _FLIP[right], _FLIP[left])
    swap_rev = ProblemKey(n, m, right, left)
    return [key, swap, rev, swap_rev]


@dataclass
class AdversaryTable:
    max_m: int
    max_n: int
    values: np.ndarray  # (3, 3, max_m+1, max_n+1) int16; INVALID = inconsistent

    def in_bounds(self, key: ProblemKey) -> bool:
        return 0 <= key.m <= self.max_m and 0 <= key.n <= self.max_n

    def stored(self, key: ProblemKey) -> int:
        if not self.in_bounds(key):
            raise CoverageError(
                f"key {key} outside table bounds {self.max_m}x{self.max_n}", missing=[key]
            )
        return int(self.values[key.left, key.right, key.m, key.n])

    def value(self, key: ProblemKey) -> int:
        v = self.stored(key)
        if v == INVALID:
            raise InconsistentKeyError(f"no consistent interleaving for {key}")
        return v

    def deficiency(self, m: int, n: int) -> int:
        """Comparisons the restricted adversary leaves on the table versus
        tape merge: m+n-1 - V(m, n); zero certifies tape-merge optimality."""
        return m + n - 1 - self.value(ProblemKey(m, n))

    def _require_live(self, key: ProblemKey) -> None:
        self.value(key)
        if is_settled(key):
            raise TerminalStateError(f"{key} has an empty list; no queries exist")

    def best_first_comparisons(self, key: ProblemKey) -> list[tuple[int, int]]:
        """All queries achieving the game value, lexicographically sorted."""
        self._require_live(key)
        best = _reply_max_matrix(self.values, key.m, key.n, key.left, key.right)
        v = int(best.min())
        pairs = np.argwhere(best == v)
        return [(int(i) + 1, int(j) + 1) for i, j in pairs]

    def adversary_reply(self, key: ProblemKey, i: int, j: int) -> tuple[SplitStrategy, int]:
        """Best reply to query (i, j) and its value 1 + V(low) + V(high);
        ties prefer simple over shared_a over shared_b, then smallest cuts."""
        self._require_live(key)
        if not (1 <= i <= key.m and 1 <= j <= key.n):
            raise CoverageError(f"query ({i},{j}) out of range for {key}")
        best: tuple[int, SplitStrategy] | None = None
        for reply in valid_replies(key, i, j):
            sub1, sub2 = reply_subproblems(key, reply)
            v = 1 + self.value(sub1) + self.value(sub2)
            if best is None or v > best[0] or (v == best[0] and reply < best[1]):
                best = (v, reply)
        if best is None:
            raise NoValidReplyError(f"query ({i},{j}) on {key} has no valid reply")
        return best[1], best[0]

    def assert_symmetries(self) -> None:
        """Swap/reversal identities must hold across the whole table; computing
        all nine functions independently makes this a free correctness check."""
        V = self.values
        sq = min(self.max_m, self.max_n)
        for left in (DOT, BS, FS):
            for right in (DOT, BS, FS):
                rev = V[_FLIP[right], _FLIP[left]]
                if not np.array_equal(V[left, right], rev):
                    raise AssertionError(
                        f"reversal symmetry broken for ({Constraint(left).token},"
                        f"{Constraint(right).token})"
                    )
                swap = V[_FLIP[left], _FLIP[right], : sq + 1, : sq + 1]
                if not np.array_equal(V[left, right, : sq + 1, : sq + 1], swap.T):
                    raise AssertionError(
                        f"swap symmetry broken for ({Constraint(left).token},"
                        f"{Constraint(right).token})"
                    )


def _layer_keys(s: int, max_m: int, max_n: int) -> Iterator[tuple[int, int]]:
    for m in range(max(0, s - max_n), min(max_m, s) + 1):
        yield m, s - m


def compute_tables(
    max_m: int,
    max_n: int,
    *,
    naive: bool = False,
    threads: int | None = None,
    exploit_symmetry: bool = False,
    check_symmetries: bool = True,
) -> AdversaryTable:
    """Fill the nine-function table for all m <= max_m, n <= max_n.

    naive=True swaps in the enumeration oracle (testing only).  When
    exploit_symmetry is set, only one representative per swap/reversal orbit
    is computed and the rest are mirrored; by default all nine functions are
    computed independently and the symmetries are asserted afterwards.
    """
    if max_m < 1 or max_n < 1:
        raise ValueError("table bounds must be at least 1")
    values = np.full((3, 3, max_m + 1, max_n + 1), INVALID, dtype=np.int16)
    memo: dict = {}

    def classify(m: int, n: int) -> list[tuple[int, int, int, int]]:
        pending = []
        for left in (DOT, BS, FS):
            for right in (DOT, BS, FS):
                key = ProblemKey(m, n, Constraint(left), Constraint(right))
                if not is_consistent(key):
                    continue
                if is_settled(key):
                    values[left, right, m, n] = 0
                elif exploit_symmetry and _orbit_rep_in_bounds(key, max_m, max_n) != key:
                    continue
                else:
                    pending.append((m, n, left, right))
        return pending

    pool = ThreadPoolExecutor(max_workers=threads) if threads and threads > 1 else None
    try:
        for s in range(max_m + max_n + 1):
            pending = []
            for m, n in _layer_keys(s, max_m, max_n):
                pending.extend(classify(m, n))
            if naive:
                for m, n, left, right in pending:
                    key = ProblemKey(m, n, Constraint(left), Constraint(right))
                    values[left, right, m, n] = naive_value(key, memo)
            elif pool is not None:
                list(pool.map(lambda args: _fill_key(values, *args), pending))
            else:
                for args in pending:
                    _fill_key(values, *args)
            if exploit_symmetry:
                for m, n in _layer_keys(s, max_m, max_n):
                    _mirror_layer_entry(values, m, n, max_m, max_n)
    finally:
        if pool is not None:
            pool.shutdown()

    table = AdversaryTable(max_m, max_n, values)
    if check_symmetries and not exploit_symmetry:
        table.assert_symmetries()
    return table


def _orbit_rep_in_bounds(key: ProblemKey, max_m: int, max_n: int) -> ProblemKey:
    orbit = [k for k in symmetry_orbit(key) if k.m <= max_m and k.n <= max_n]
    return min(orbit, key=lambda k: (k.left, k.right, k.m, k.n))


def _mirror_layer_entry(values: np.ndarray, m: int, n: int, max_m: int, max_n: int) -> None:
    for left in (DOT, BS, FS):
        for right in (DOT, BS, FS):
            key = ProblemKey(m, n, Constraint(left), Constraint(right))
            rep = _orbit_rep_in_bounds(key, max_m, max_n)
            if rep != key:
                values[left, right, m, n] = values[rep.left, rep.right, rep.m, rep.n]
