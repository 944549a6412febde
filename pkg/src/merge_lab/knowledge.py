"""Exact knowledge states of an unrestricted two-list merge in progress.

Any transcript of comparisons between the chains a_1<...<a_m and b_1<...<b_n
conveys exactly, for each a_i, an interval of possible positions among the
b's.  We store, 1-indexed:

  L[i] = largest j with b_j < a_i known (0 when none)
  H[i] = smallest j with a_i < b_j known (n+1 when none)

Both sequences are nondecreasing and L[i] < H[i]; the state is terminal when
every interval has collapsed (H[i] == L[i] + 1).  The number of total orders
consistent with a state is the number of nondecreasing sequences g with
g_i in [L_i, H_i - 1], where g_i counts the b's below a_i.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinatorics import binomial
from .errors import MergeLabError, TerminalStateError

LESS = "less"
GREATER = "greater"


@dataclass(frozen=True)
class KnowledgeState:
    m: int
    n: int
    L: tuple[int, ...]
    H: tuple[int, ...]

    def is_terminal(self) -> bool:
        return all(h == l + 1 for l, h in zip(self.L, self.H))

    def validate(self) -> None:
        if len(self.L) != self.m or len(self.H) != self.m:
            raise MergeLabError("bound sequences must have length m")
        prev_l, prev_h = 0, 1
        for l, h in zip(self.L, self.H):
            if not (0 <= l < h <= self.n + 1):
                raise MergeLabError(f"bounds out of range: L={l}, H={h}, n={self.n}")
            if l < prev_l or h < prev_h:
                raise MergeLabError("bound sequences must be nondecreasing")
            prev_l, prev_h = l, h


def initial_state(m: int, n: int) -> KnowledgeState:
    return KnowledgeState(m, n, (0,) * m, (n + 1,) * m)


def apply_outcome(state: KnowledgeState, i: int, j: int, outcome: str) -> KnowledgeState:
    """State after learning a_i < b_j (less) or a_i > b_j (greater), with the
    transitive closure along both chains."""
    if not (1 <= i <= state.m and 1 <= j <= state.n):
        raise MergeLabError(f"comparison ({i},{j}) out of range for ({state.m},{state.n})")
    L, H = state.L, state.H
    if outcome == LESS:
        if j <= L[i - 1]:
            raise MergeLabError(f"a_{i} < b_{j} contradicts known b_{L[i-1]} < a_{i}")
        if j >= H[i - 1]:
            return state
        new_h = tuple(min(h, j) for h in H[:i]) + H[i:]
        return KnowledgeState(state.m, state.n, L, new_h)
    if outcome == GREATER:
        if j >= H[i - 1]:
            raise MergeLabError(f"a_{i} > b_{j} contradicts known a_{i} < b_{H[i-1]}")
        if j <= L[i - 1]:
            return state
        new_l = L[: i - 1] + tuple(max(l, j) for l in L[i - 1 :])
        return KnowledgeState(state.m, state.n, new_l, H)
    raise MergeLabError(f"outcome must be {LESS!r} or {GREATER!r}, got {outcome!r}")


def completions(state: KnowledgeState) -> int:
    """Total orders consistent with the state, by an O(m*n) prefix-sum
    recurrence over nondecreasing gap assignments."""
    if state.m == 0:
        return 1
    if state.L == (0,) * state.m and state.H == (state.n + 1,) * state.m:
        return binomial(state.m + state.n, state.m)
    cur = [0] * (state.n + 1)
    for v in range(state.L[0], state.H[0]):
        cur[v] = 1
    for i in range(1, state.m):
        acc = 0
        nxt = [0] * (state.n + 1)
        lo, hi = state.L[i], state.H[i]
        for v in range(state.n + 1):
            acc += cur[v]
            if lo <= v < hi:
                nxt[v] = acc
        cur = nxt
    return sum(cur)


def reverse_state(state: KnowledgeState) -> KnowledgeState:
    """The same information read with both lists reversed (largest first)."""
    m, n = state.m, state.n
    rl = tuple(n + 1 - state.H[m - 1 - i] for i in range(m))
    rh = tuple(n + 1 - state.L[m - 1 - i] for i in range(m))
    return KnowledgeState(m, n, rl, rh)


def canonicalize(state: KnowledgeState) -> KnowledgeState:
    """Lexicographic minimum (by the (L, H) pair) of the state and its
    reversal; solver memo keys use this form."""
    rev = reverse_state(state)
    return rev if (rev.L, rev.H) < (state.L, state.H) else state


def state_from_transcript(m: int, n: int, transcript) -> KnowledgeState:
    state = initial_state(m, n)
    for (i, j), outcome in transcript:
        state = apply_outcome(state, i, j, outcome)
    return state


def unique_interleaving(state: KnowledgeState) -> tuple[tuple[str, int], ...]:
    """The single consistent merged order of a terminal state, as a sequence
    of ('a', i) / ('b', j) tags."""
    if not state.is_terminal():
        raise TerminalStateError("state still has undetermined outcomes")
    order = []
    b_next = 1
    for i in range(1, state.m + 1):
        while b_next <= state.L[i - 1]:
            order.append(("b", b_next))
            b_next += 1
        order.append(("a", i))
    while b_next <= state.n:
        order.append(("b", b_next))
        b_next += 1
    return tuple(order)
