"""Exact minimax solver for the unrestricted merge game M(m, n).

Value of a knowledge state:
  V(terminal) = 0, else
  V = min over meaningful comparisons (i, j) with L_i < j < H_i of
      1 + max(V(state | a_i < b_j), V(state | a_i > b_j)).

Forced comparisons are excluded from the min: they change nothing and waste a
unit, so the minimizing player never takes them (the restricted-adversary
tables keep them, because there a reply converts even a forced query into a
fresh split).

Solver organization:

  blocks          A state splits into independent blocks wherever some prefix
                  of the a's is known to lie entirely below the rest: values
                  add across blocks, so the memo is keyed on single blocks
                  with their b-range renumbered from 0 and the block taken up
                  to reversal.  This collapses translated and mirrored
                  subgames and is the main reason the search fits in memory.
  bounds          Every block enters the table with the admissible window
                  lower = ceil(lg completions), upper = sum of per-element
                  binary-insertion costs ceil(lg(H_i - L_i)).
  threshold tests test(block, t) decides V <= t exactly, expanding moves only
                  until one is certified (both outcomes <= t-1) or all are
                  refuted; sums of child blocks are decided against their
                  budget with early cutoffs from the stored windows.  Exact
                  values are obtained by ascending tests from the lower bound,
                  so the table accumulates ever-tighter windows MTD-style.

The state budget counts memo insertions; exceeding it aborts the solve with
an UNKNOWN outcome rather than a partial value.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .combinatorics import ceil_lg, hwang_lin_formula
from .errors import BudgetExceededError, MergeLabError, NotSolvedError, TerminalStateError
from .knowledge import GREATER, LESS, KnowledgeState, apply_outcome, initial_state

# Externally verified optima used as trusted inputs when a fresh solve is out
# of reach; every verification consuming one must flag it as trusted.
TRUSTED_EXACT: dict[tuple[int, int], int] = {(7, 12): 17}
TRUSTED_UPPER: dict[tuple[int, int], int] = {(10, 20): 27}

DEFAULT_STATE_BUDGET = 50_000_000

Block = tuple[int, tuple[int, ...], tuple[int, ...]]  # (n, L, H), m = len(L)


def trusted_exact(m: int, n: int) -> int | None:
    return TRUSTED_EXACT.get((m, n)) or TRUSTED_EXACT.get((n, m))


def trusted_upper(m: int, n: int) -> int | None:
    direct = TRUSTED_UPPER.get((m, n)) or TRUSTED_UPPER.get((n, m))
    exact = trusted_exact(m, n)
    if direct is not None and exact is not None:
        return min(direct, exact)
    return direct if direct is not None else exact


@dataclass(frozen=True)
class SolveOutcome:
    value: int | None  # None = unknown (budget exhausted)
    states_expanded: int
    budget_hit: bool


def _reverse_block(block: Block) -> Block:
    n, L, H = block
    m = len(L)
    rl = tuple(n + 1 - H[m - 1 - i] for i in range(m))
    rh = tuple(n + 1 - L[m - 1 - i] for i in range(m))
    return (n, rl, rh)


def _canon_block(block: Block) -> Block:
    rev = _reverse_block(block)
    return rev if (rev[1], rev[2]) < (block[1], block[2]) else block


def _block_completions(block: Block) -> int:
    n, L, H = block
    cur = [0] * (n + 1)
    for v in range(L[0], H[0]):
        cur[v] = 1
    for i in range(1, len(L)):
        acc = list(accumulate(cur))
        lo, hi = L[i], H[i]
        cur = [0] * lo + acc[lo:hi] + [0] * (n + 1 - hi)
    return sum(cur)


def decompose(n: int, L, H) -> list[tuple[Block, int, int]]:
    """Split bound arrays into live independent blocks.

    Returns (block, a_offset, b_offset) triples in list order, where block
    indices are local (a's 1..m', b's 1..n') and global index = local + offset.
    A cut after a_k is sound when H_k - 1 <= L_{k+1}: everything at or below
    the cut is then known smaller than everything above it.  Fully placed
    stretches (and the b's falling between blocks) carry no game value and
    are dropped.
    """
    m = len(L)
    out = []
    prev = 0
    for k in range(1, m + 1):
        nxt_l = L[k] if k < m else n
        if H[k - 1] - 1 <= nxt_l:
            lo_c = L[prev]
            hi_c = H[k - 1] - 1
            if hi_c - lo_c >= 1:
                bl = (
                    hi_c - lo_c,
                    tuple(L[i] - lo_c for i in range(prev, k)),
                    tuple(H[i] - lo_c for i in range(prev, k)),
                )
                out.append((bl, prev, lo_c))
            prev = k
    return out


def _apply_block(block: Block, i: int, j: int, less: bool) -> tuple[int, list[int], list[int]]:
    n, L, H = block
    if less:
        return n, list(L), [min(h, j) for h in H[:i]] + list(H[i:])
    return n, list(L[: i - 1]) + [max(l, j) for l in L[i - 1 :]], list(H)


def _children(block: Block, i: int, j: int, less: bool) -> list[Block]:
    n, L, H = _apply_block(block, i, j, less)
    return [_canon_block(b) for b, _, _ in decompose(n, L, H)]


class GameSolver:
    """Shared-table solver; one instance is meant for single-threaded use."""

    def __init__(self, state_budget: int = DEFAULT_STATE_BUDGET):
        self.state_budget = state_budget
        self._tt: dict[Block, list] = {}  # block -> [lo, hi, hint_move]
        self._moves_cache: dict[Block, tuple[tuple[int, int], ...]] = {}
        self._optimal_cache: dict[Block, tuple[int, int]] = {}
        self.states_expanded = 0
        self.solved: dict[tuple[int, int], int] = {}

    # -- table plumbing ----------------------------------------------------

    def _entry(self, block: Block) -> list:
        e = self._tt.get(block)
        if e is None:
            n, L, H = block
            lo = ceil_lg(_block_completions(block))
            # independent binary insertions, capped by solving the block as a
            # fresh merge (extra knowledge never hurts the minimizing player)
            m = len(L)
            hi = min(
                sum(ceil_lg(h - l) for l, h in zip(L, H)),
                hwang_lin_formula(min(m, n), max(m, n)),
            )
            e = [lo, hi, None]
            self._tt[block] = e
            self.states_expanded += 1
            if self.states_expanded > self.state_budget:
                raise BudgetExceededError(
                    f"state budget {self.state_budget} exhausted"
                )
        return e

    def _ordered_moves(self, block: Block) -> tuple[tuple[int, int], ...]:
        mv = self._moves_cache.get(block)
        if mv is None:
            n, L, H = block
            m = len(L)
            sym = block == _reverse_block(block)
            cand = []
            for i in range(1, m + 1):
                lo, hi = L[i - 1], H[i - 1]
                for j in range(lo + 1, hi):
                    if sym and (m + 1 - i, n + 1 - j) < (i, j):
                        continue  # mirror move is equivalent
                    cand.append((abs(2 * j - lo - hi), abs(2 * i - m - 1), i, j))
            cand.sort()
            mv = tuple((i, j) for _, _, i, j in cand)
            self._moves_cache[block] = mv
        return mv

    # -- threshold machinery -------------------------------------------------

    def _sum_le(self, blocks: list[Block], budget: int) -> bool:
        """Exactly decide sum of block values <= budget."""
        entries = [self._entry(b) for b in blocks]
        s_lo = sum(e[0] for e in entries)
        s_hi = sum(e[1] for e in entries)
        if s_hi <= budget:
            return True
        if s_lo > budget:
            return False
        for b, e in zip(blocks, entries):
            while e[0] < e[1]:
                old_lo, old_hi = e[0], e[1]
                self._test_le(b, e[0])
                s_lo += e[0] - old_lo
                s_hi += e[1] - old_hi
                if s_hi <= budget:
                    return True
                if s_lo > budget:
                    return False
        return s_lo <= budget

    def _test_le(self, block: Block, t: int) -> bool:
        """Exactly decide V(block) <= t, tightening the stored window."""
        e = self._entry(block)
        if e[1] <= t:
            return True
        if e[0] > t:
            return False
        moves = self._ordered_moves(block)
        hint = e[2]
        if hint is not None and hint in moves:
            moves = (hint,) + tuple(mv for mv in moves if mv != hint)
        for i, j in moves:
            if self._sum_le(_children(block, i, j, True), t - 1) and self._sum_le(
                _children(block, i, j, False), t - 1
            ):
                e[1] = t
                e[2] = (i, j)
                return True
        e[0] = t + 1
        return False

    def _block_value(self, block: Block) -> int:
        e = self._entry(block)
        while e[0] < e[1]:
            self._test_le(block, e[0])
        return e[0]

    # -- public API ----------------------------------------------------------

    def solve(self, m: int, n: int) -> SolveOutcome:
        """Exact M(m, n), or an unknown outcome if the state budget runs out."""
        if m < 0 or n < 0:
            raise MergeLabError("list sizes must be nonnegative")
        if (m, n) in self.solved:
            return SolveOutcome(self.solved[(m, n)], self.states_expanded, False)
        st = initial_state(m, n)
        try:
            total = self.value_of_state(st)
        except BudgetExceededError:
            return SolveOutcome(None, self.states_expanded, True)
        self.solved[(m, n)] = total
        return SolveOutcome(total, self.states_expanded, False)

    def value_of_state(self, state: KnowledgeState) -> int:
        return sum(
            self._block_value(_canon_block(b))
            for b, _, _ in decompose(state.n, state.L, state.H)
        )

    def optimal_move(self, state: KnowledgeState) -> tuple[int, int]:
        """Lexicographically smallest comparison achieving the minimax value.

        Requires a completed solve covering the state's list sizes; terminal
        states have no move.
        """
        if (state.m, state.n) not in self.solved:
            raise NotSolvedError(
                f"solve({state.m}, {state.n}) has not completed; no strategy available"
            )
        parts = decompose(state.n, state.L, state.H)
        if not parts:
            raise TerminalStateError("state is fully determined; no comparisons remain")
        block, a_off, b_off = parts[0]
        mv = self._optimal_block_move(block)
        return mv[0] + a_off, mv[1] + b_off

    def _optimal_block_move(self, block: Block) -> tuple[int, int]:
        cached = self._optimal_cache.get(block)
        if cached is not None:
            return cached
        v = self._block_value(_canon_block(block))
        n, L, H = block
        for i in range(1, len(L) + 1):
            for j in range(L[i - 1] + 1, H[i - 1]):
                if self._sum_le(_children(block, i, j, True), v - 1) and self._sum_le(
                    _children(block, i, j, False), v - 1
                ):
                    self._optimal_cache[block] = (i, j)
                    return i, j
        raise AssertionError(f"no optimal move found for block {block}")

    def dump_strategy(self, m: int, n: int) -> dict:
        """Optimal-move listing over every state reachable under optimal play.

        Format: {m, n, value, moves: [{L, H, move}, ...]}, moves sorted by
        (L, H) so dumps are byte-stable.
        """
        outcome = self.solve(m, n)
        if outcome.value is None:
            raise BudgetExceededError("cannot dump a strategy for an unsolved game")
        seen: dict[tuple, tuple[int, int]] = {}
        stack = [initial_state(m, n)]
        while stack:
            st = stack.pop()
            key = (st.L, st.H)
            if key in seen or st.is_terminal():
                continue
            mv = self.optimal_move(st)
            seen[key] = mv
            stack.append(apply_outcome(st, mv[0], mv[1], LESS))
            stack.append(apply_outcome(st, mv[0], mv[1], GREATER))
        moves = [
            {"L": list(L), "H": list(H), "move": [mv[0], mv[1]]}
            for (L, H), mv in sorted(seen.items())
        ]
        return {"m": m, "n": n, "value": outcome.value, "moves": moves}
