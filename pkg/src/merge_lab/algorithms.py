"""Deterministic merge algorithms as transcript-driven decision procedures.

Every algorithm is a pure function of (m, n, transcript): `next` replays the
transcript through an immutable cursor and returns either the following
comparison or the finished merged order.  The harness drives cursors directly
(query/advance), which keeps its branch-and-replay exploration O(1) per step;
`next` stays the public, obviously-pure entry point.

Comparisons always use ORIGINAL indices (i into A, j into B, both 1-based);
the merged order is a tuple of ("a", i) / ("b", j) tags, smallest first.

Algorithms:
  tape              compare the current heads, pop the smaller.
  binary-insertion  m = 1 only; binary-search the gap for a_1.
  hwang-lin         block probing from the top with the smaller list probing:
                    with m' <= n' remaining and t = floor(lg(n'/m')), compare
                    the largest a against the b 2^t below the top; a loss
                    retires a 2^t block of b's for one comparison, a win
                    binary-inserts the largest a into the top 2^t - 1 b's.
  modified          the two-smallest-pairs gambit: compare a_1:b_2, then
                    depending on outcomes a_2:b_2, a_2:b_1, a_1:b_1, retiring
                    the lowest 2-3 elements for 1/3/4/3 comparisons and
                    re-dispatching the remainder through the selector.
  optimal           plays the exact solver's minimax strategy.

The selector chooses, for a (sub)problem, the procedure with the smallest
PROVEN worst-case bound: exact solver value where the solve is within budget,
the gambit recurrence max{f(m,n-2)+1, f(m-1,n-2)+3, f(m-2,n)+3, f(m-2,n-1)+4}
evaluated over proven bounds of the continuations, the Hwang-Lin closed form
in its n >= 2m regime, and tape's m+n-1.  Ties resolve in that order.
Measured worst cases then validate the claimed bounds independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .combinatorics import binomial, floor_lg_ratio, hwang_lin_formula, tape_merge_worst
from .errors import MergeLabError, NotSolvedError
from .game import GameSolver
from .knowledge import (
    GREATER,
    LESS,
    KnowledgeState,
    apply_outcome,
    initial_state,
    unique_interleaving,
)


class TranscriptError(MergeLabError):
    """Replayed transcript disagrees with the algorithm's own decisions."""


def _chrono(out):
    """Cons list -> chronological list of pushes."""
    items = []
    while out is not None:
        items.append(out[0])
        out = out[1]
    items.reverse()
    return items


class MergeAlgorithm:
    """Base: immutable-cursor decision procedure."""

    name = "?"

    def start(self, m: int, n: int):
        raise NotImplementedError

    def query(self, cur):
        """-> ("cmp", i, j) or ("done", order)."""
        raise NotImplementedError

    def advance(self, cur, less: bool):
        raise NotImplementedError

    def next(self, m: int, n: int, transcript):
        """Pure transcript interface: the next comparison or the final order."""
        cur = self.start(m, n)
        for (i, j), outcome in transcript:
            q = self.query(cur)
            if q[0] != "cmp" or (q[1], q[2]) != (i, j):
                raise TranscriptError(
                    f"{self.name}: transcript asked {(i, j)} where algorithm asks {q}"
                )
            cur = self.advance(cur, outcome == LESS)
        return self.query(cur)


class TapeMerge(MergeAlgorithm):
    name = "tape"

    def start(self, m, n):
        # (next a, next b, m, n, output cons)
        return (1, 1, m, n, None)

    def query(self, cur):
        ai, bj, m, n, out = cur
        if ai <= m and bj <= n:
            return ("cmp", ai, bj)
        order = _chrono(out)
        order += [("a", i) for i in range(ai, m + 1)]
        order += [("b", j) for j in range(bj, n + 1)]
        return ("done", tuple(order))

    def advance(self, cur, less):
        ai, bj, m, n, out = cur
        if less:
            return (ai + 1, bj, m, n, (("a", ai), out))
        return (ai, bj + 1, m, n, (("b", bj), out))


class BinaryInsertion(MergeAlgorithm):
    name = "binary-insertion"

    def start(self, m, n):
        if m != 1:
            raise MergeLabError(f"binary insertion merges a single element; got m={m}")
        return (0, n, n)  # gap window [lo, hi] over 0..n

    def query(self, cur):
        lo, hi, n = cur
        if lo < hi:
            return ("cmp", 1, (lo + hi + 1) // 2)
        order = [("b", j) for j in range(1, lo + 1)]
        order.append(("a", 1))
        order += [("b", j) for j in range(lo + 1, n + 1)]
        return ("done", tuple(order))

    def advance(self, cur, less):
        lo, hi, n = cur
        mid = (lo + hi + 1) // 2
        return (lo, mid - 1, n) if less else (mid, hi, n)


class HwangLin(MergeAlgorithm):
    name = "hwang-lin"

    def start(self, m, n):
        # (remaining a top, remaining b top, m, n, insertion sub-state, out)
        return (m, n, m, n, None, None)

    def query(self, cur):
        ah, bh, m, n, ins, out = cur
        if ins is not None:
            side, lo, hi = ins
            if lo < hi:
                mid = (lo + hi + 1) // 2
                return ("cmp", ah, mid) if side == "a" else ("cmp", mid, bh)
            # insertion finished; fold it and re-query
            return self.query(self._finish_insert(cur))
        if ah == 0 or bh == 0:
            # pushes run largest-to-smallest, so the cons reads out ascending
            order = [("a", i) for i in range(1, ah + 1)]
            order += [("b", j) for j in range(1, bh + 1)]
            while out is not None:
                order.append(out[0])
                out = out[1]
            return ("done", tuple(order))
        if ah <= bh:
            t = floor_lg_ratio(ah, bh)
            return ("cmp", ah, bh - (1 << t) + 1)
        t = floor_lg_ratio(bh, ah)
        return ("cmp", ah - (1 << t) + 1, bh)

    def _finish_insert(self, cur):
        ah, bh, m, n, ins, out = cur
        side, lo, hi = ins
        g = lo
        if side == "a":  # a_ah sits above b_g; emit b_{g+1}..b_bh then a_ah
            for j in range(bh, g, -1):
                out = (("b", j), out)
            out = (("a", ah), out)
            return (ah - 1, g, m, n, None, out)
        for i in range(ah, g, -1):
            out = (("a", i), out)
        out = (("b", bh), out)
        return (g, bh - 1, m, n, None, out)

    def advance(self, cur, less):
        cur = self._settle(cur)
        ah, bh, m, n, ins, out = cur
        if ins is not None:
            side, lo, hi = ins
            mid = (lo + hi + 1) // 2
            if side == "a":  # asked a_ah vs b_mid
                ins = (side, lo, mid - 1) if less else (side, mid, hi)
            else:  # asked a_mid vs b_bh; b < a_mid means "greater" for b
                ins = (side, mid, hi) if less else (side, lo, mid - 1)
            return self._settle((ah, bh, m, n, ins, out))
        if ah <= bh:
            t = floor_lg_ratio(ah, bh)
            probe = bh - (1 << t) + 1
            if less:  # a_ah below the block: retire b_probe..b_bh
                for j in range(bh, probe - 1, -1):
                    out = (("b", j), out)
                return (ah, probe - 1, m, n, None, out)
            # binary-insert a_ah among b_{probe+1}..b_bh (gap in [probe, bh])
            return self._settle((ah, bh, m, n, ("a", probe, bh), out))
        t = floor_lg_ratio(bh, ah)
        probe = ah - (1 << t) + 1
        if not less:  # b_bh below a_probe: retire a_probe..a_ah
            for i in range(ah, probe - 1, -1):
                out = (("a", i), out)
            return (probe - 1, bh, m, n, None, out)
        return self._settle((ah, bh, m, n, ("b", probe, ah), out))

    def _settle(self, cur):
        ah, bh, m, n, ins, out = cur
        if ins is not None and ins[1] == ins[2]:
            return self._finish_insert(cur)
        return cur


class OptimalPlayer(MergeAlgorithm):
    """Plays the exact solver's strategy; the covering solve must be done."""

    name = "optimal"

    def __init__(self, solver: GameSolver):
        self.solver = solver

    def start(self, m, n):
        if m >= 1 and n >= 1 and (m, n) not in self.solver.solved:
            raise NotSolvedError(f"optimal player needs solve({m}, {n}) first")
        return initial_state(m, n)

    def query(self, cur: KnowledgeState):
        if cur.is_terminal():
            return ("done", unique_interleaving(cur))
        i, j = self.solver.optimal_move(cur)
        return ("cmp", i, j)

    def advance(self, cur, less):
        q = self.query(cur)
        return apply_outcome(cur, q[1], q[2], LESS if less else GREATER)


# ---------------------------------------------------------------------------
# selector and the gambit dispatcher
# ---------------------------------------------------------------------------


@dataclass
class SelectorConfig:
    """Policy for dispatching subproblems; bounds must be PROVEN, never
    measured.  The solver option is available when the fresh problem's
    interleaving count fits the budget (and the solve itself succeeds).
    The default budget keeps on-demand solves interactive while still
    admitting the (7,12) base the dispatcher leans on."""

    solver: GameSolver = field(default_factory=GameSolver)
    completions_limit: int = 52_000
    _bound_cache: dict = field(default_factory=dict, repr=False)

    def in_solver_budget(self, m: int, n: int) -> bool:
        return binomial(m + n, m) <= self.completions_limit


_GAMBIT_COSTS = (1, 3, 3, 4)  # retire (0,2) / (1,2) / (2,0) / (2,1) elements


def proven_bound(cfg: SelectorConfig, m: int, n: int) -> tuple[int, str]:
    """Smallest proven worst-case bound for (m, n) and the procedure achieving
    it; ties prefer optimal, then modified, then hwang-lin, then tape."""
    lo, hi = min(m, n), max(m, n)
    if lo == 0:
        return 0, "tape"
    return _proven_bound(cfg, lo, hi)


def _proven_bound(cfg: SelectorConfig, lo: int, hi: int) -> tuple[int, str]:
    cache = cfg._bound_cache
    got = cache.get((lo, hi))
    if got is not None:
        return got
    options = []
    if cfg.in_solver_budget(lo, hi):
        out = cfg.solver.solve(lo, hi)
        if out.value is not None:
            options.append((out.value, 0, "optimal"))
    if lo >= 2 and hi >= 2 * lo - 2:
        b = max(
            _sub_bound(cfg, lo, hi - 2) + 1,
            _sub_bound(cfg, lo - 1, hi - 2) + 3,
            _sub_bound(cfg, lo - 2, hi) + 3,
            _sub_bound(cfg, lo - 2, hi - 1) + 4,
        )
        options.append((b, 1, "modified"))
    if hi >= 2 * lo:
        options.append((hwang_lin_formula(lo, hi), 2, "hwang-lin"))
    options.append((tape_merge_worst(lo, hi), 3, "tape"))
    best = min(options)
    result = (best[0], best[2])
    cache[(lo, hi)] = result
    return result


def _sub_bound(cfg: SelectorConfig, a: int, b: int) -> int:
    lo, hi = min(a, b), max(a, b)
    if lo <= 0:
        return 0
    return _proven_bound(cfg, lo, hi)[0]


def selector(cfg: SelectorConfig, m: int, n: int) -> str:
    """Procedure chosen for an (m, n) subproblem."""
    return proven_bound(cfg, m, n)[1]


class ModifiedBinaryMerge(MergeAlgorithm):
    """Selector-driven dispatcher built around the two-smallest-pairs gambit."""

    name = "modified"

    def __init__(self, config: SelectorConfig | None = None):
        self.config = config or SelectorConfig()
        self._tape = TapeMerge()
        self._hwang = HwangLin()
        self._optimal = OptimalPlayer(self.config.solver)

    # cursor: (a_lo, b_lo, m, n, mode, out)
    #   mode = ("select",) | ("gambit", stage, swap) | ("del", alg, sub)
    def start(self, m, n):
        return self._select((1, 1, m, n, None, None))

    def _select(self, cur):
        a_lo, b_lo, m, n, _, out = cur
        ma, nb = m - a_lo + 1, n - b_lo + 1
        choice = selector(self.config, ma, nb)
        if choice == "modified":
            swap = ma > nb
            return (a_lo, b_lo, m, n, ("gambit", 0, swap), out)
        if choice == "optimal" and ma >= 1 and nb >= 1:
            if (ma, nb) not in self.config.solver.solved:
                self.config.solver.solve(ma, nb)
            sub = self._optimal.start(ma, nb)
            return (a_lo, b_lo, m, n, ("del", self._optimal, sub), out)
        if choice == "hwang-lin" and ma >= 1 and nb >= 1:
            return (a_lo, b_lo, m, n, ("del", self._hwang, self._hwang.start(ma, nb)), out)
        return (a_lo, b_lo, m, n, ("del", self._tape, self._tape.start(ma, nb)), out)

    def query(self, cur):
        a_lo, b_lo, m, n, mode, out = cur
        if mode[0] == "del":
            alg, sub = mode[1], mode[2]
            q = alg.query(sub)
            if q[0] == "cmp":
                return ("cmp", q[1] + a_lo - 1, q[2] + b_lo - 1)
            order = _chrono(out)
            order += [
                ("a", idx + a_lo - 1) if tag == "a" else ("b", idx + b_lo - 1)
                for tag, idx in q[1]
            ]
            return ("done", tuple(order))
        stage, swap = mode[1], mode[2]
        xlo, ylo = (a_lo, b_lo) if not swap else (b_lo, a_lo)
        # gambit comparisons on (x = gambit list, y = other list):
        # stage 0: x1:y2, 1: x2:y2, 2: x2:y1, 3 and 4: x1:y1
        xi, yj = (
            (xlo, ylo + 1),
            (xlo + 1, ylo + 1),
            (xlo + 1, ylo),
            (xlo, ylo),
            (xlo, ylo),
        )[stage]
        return ("cmp", xi, yj) if not swap else ("cmp", yj, xi)

    def advance(self, cur, less):
        a_lo, b_lo, m, n, mode, out = cur
        if mode[0] == "del":
            alg, sub = mode[1], mode[2]
            return (a_lo, b_lo, m, n, ("del", alg, alg.advance(sub, less)), out)
        stage, swap = mode[1], mode[2]
        x_below_y = less if not swap else not less
        X, Y = ("a", "b") if not swap else ("b", "a")
        xlo, ylo = (a_lo, b_lo) if not swap else (b_lo, a_lo)

        def stay(next_stage):
            return (a_lo, b_lo, m, n, ("gambit", next_stage, swap), out)

        def retire(pushes, dx, dy):
            o = out
            for tag in pushes:
                o = (tag, o)
            da, db = (dx, dy) if not swap else (dy, dx)
            return self._select((a_lo + da, b_lo + db, m, n, None, o))

        x1, x2, y1, y2 = (X, xlo), (X, xlo + 1), (Y, ylo), (Y, ylo + 1)
        if stage == 0:  # x1 vs y2
            if x_below_y:
                return stay(1)
            return retire([y1, y2], 0, 2)  # y1 < y2 < x1
        if stage == 1:  # x2 vs y2, knowing x1 < y2
            return stay(2) if x_below_y else stay(3)
        if stage == 2:  # x2 vs y1, knowing x1,x2 < y2
            if x_below_y:
                return retire([x1, x2], 2, 0)  # x1 < x2 < y1
            return stay(4)
        if stage == 3:  # x1 vs y1, knowing x1 < y2 < x2
            if x_below_y:
                return retire([x1, y1, y2], 1, 2)
            return retire([y1, x1, y2], 1, 2)
        # stage 4: x1 vs y1, knowing y1 < x2 < y2
        if x_below_y:
            return retire([x1, y1, x2], 2, 1)
        return retire([y1, x1, x2], 2, 1)
