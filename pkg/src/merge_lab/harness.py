"""Exact worst-case measurement of merge algorithms.

`measure` walks an algorithm's entire decision tree: it maintains the
knowledge state of the transcript, answers forced comparisons outright (and
charges for them: the cost model counts comparisons made, not information
gained), and branches on both outcomes of every live comparison.  A correct
algorithm reaches exactly C(m+n, m) leaves, one per interleaving, each
terminal with the right merged order.

`replay` runs a single ground-truth interleaving; `fuzz` replays a seeded
sample of random interleavings.  Both are deterministic.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field

from .combinatorics import binomial
from .errors import BudgetExceededError
from .knowledge import GREATER, LESS

DEFAULT_LEAF_BUDGET = 10**8


@dataclass
class MeasureResult:
    worst_case: int
    leaves: int
    worst_transcript: tuple
    correct: bool
    failures: list = field(default_factory=list)  # (transcript, reason), first few


def measure(alg, m: int, n: int, leaf_budget: int = DEFAULT_LEAF_BUDGET) -> MeasureResult:
    """Exhaustive worst-case measurement by decision-tree DFS."""
    total = binomial(m + n, m)
    if total > leaf_budget:
        raise BudgetExceededError(
            f"{total} interleavings at ({m},{n}) exceed the leaf budget {leaf_budget}"
        )
    L = [0] * (m + 2)
    H = [n + 1] * (m + 2)
    path: list = []
    res = MeasureResult(0, 0, (), True)
    query = alg.query
    advance = alg.advance
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * (m + n) + 200))

    def leaf(q, depth):
        res.leaves += 1
        ok = True
        reason = ""
        order = q[1]
        if len(order) != m + n:
            ok, reason = False, f"order has {len(order)} elements"
        else:
            # checking every a against its bounds also certifies terminality
            bcount, anext, bnext = 0, 1, 1
            for tag, idx in order:
                if tag == "a":
                    if idx != anext or H[idx] != L[idx] + 1 or bcount != L[idx]:
                        ok, reason = False, f"misplaced a_{idx}"
                        break
                    anext += 1
                else:
                    if idx != bnext:
                        ok, reason = False, f"misplaced b_{idx}"
                        break
                    bnext += 1
                    bcount += 1
            if ok and anext != m + 1:
                ok, reason = False, "finished before the order was determined"
        if not ok:
            res.correct = False
            if len(res.failures) < 5:
                res.failures.append((tuple(path), reason))
        if depth > res.worst_case:
            res.worst_case = depth
            res.worst_transcript = tuple(path)

    def walk(cur, depth):
        q = query(cur)
        if q[0] == "done":
            leaf(q, depth)
            return
        i, j = q[1], q[2]
        if j <= L[i]:  # outcome forced: still costs one comparison
            path.append(((i, j), GREATER))
            walk(advance(cur, False), depth + 1)
            path.pop()
            return
        if j >= H[i]:
            path.append(((i, j), LESS))
            walk(advance(cur, True), depth + 1)
            path.pop()
            return
        changed = []
        for k in range(i, 0, -1):
            if H[k] <= j:
                break
            changed.append((k, H[k]))
            H[k] = j
        path.append(((i, j), LESS))
        walk(advance(cur, True), depth + 1)
        path.pop()
        for k, old in changed:
            H[k] = old
        changed = []
        for k in range(i, m + 1):
            if L[k] >= j:
                break
            changed.append((k, L[k]))
            L[k] = j
        path.append(((i, j), GREATER))
        walk(advance(cur, False), depth + 1)
        path.pop()
        for k, old in changed:
            L[k] = old

    try:
        walk(alg.start(m, n), 0)
    finally:
        sys.setrecursionlimit(old_limit)
    return res


def replay(alg, m: int, n: int, interleaving) -> tuple[int, bool]:
    """Run one ground-truth interleaving: (comparisons used, order ok)."""
    pos = {tag: r for r, tag in enumerate(interleaving)}
    cur = alg.start(m, n)
    used = 0
    while True:
        q = alg.query(cur)
        if q[0] == "done":
            return used, tuple(q[1]) == tuple(interleaving)
        used += 1
        cur = alg.advance(cur, pos[("a", q[1])] < pos[("b", q[2])])


def random_interleaving(m: int, n: int, rng: random.Random) -> tuple:
    """Uniformly random merged order of m a's and n b's."""
    slots = sorted(rng.sample(range(m + n), m))
    order = []
    ai, bi, s = 1, 1, 0
    for r in range(m + n):
        if s < m and slots[s] == r:
            order.append(("a", ai))
            ai += 1
            s += 1
        else:
            order.append(("b", bi))
            bi += 1
    return tuple(order)


@dataclass
class FuzzReport:
    trials: int
    max_comparisons: int
    failures: list


def fuzz(alg, m: int, n: int, trials: int, seed: int) -> FuzzReport:
    """Replay seeded random interleavings; deterministic for a fixed seed."""
    rng = random.Random(seed)
    worst = 0
    failures = []
    for t in range(trials):
        order = random_interleaving(m, n, rng)
        used, ok = replay(alg, m, n, order)
        worst = max(worst, used)
        if not ok and len(failures) < 5:
            failures.append((t, order))
    return FuzzReport(trials, worst, failures)
