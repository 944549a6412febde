"""Knowledge states: bound updates, completions, canonicalization."""

import pytest
from hypothesis import given, strategies as st

from merge_lab.combinatorics import binomial
from merge_lab.errors import MergeLabError, TerminalStateError
from merge_lab.knowledge import (
    GREATER,
    LESS,
    KnowledgeState,
    apply_outcome,
    canonicalize,
    completions,
    initial_state,
    reverse_state,
    state_from_transcript,
    unique_interleaving,
)


def test_initial_state():
    st0 = initial_state(2, 3)
    assert st0.L == (0, 0) and st0.H == (4, 4)
    assert completions(st0) == binomial(5, 2) == 10
    assert initial_state(0, 5).is_terminal()


def test_apply_outcome_closure():
    st0 = initial_state(2, 3)
    st1 = apply_outcome(st0, 2, 2, LESS)
    assert st1.L == (0, 0) and st1.H == (2, 2)  # a_1 < a_2 < b_2 caps both
    assert completions(st1) == 3
    st2 = apply_outcome(initial_state(1, 1), 1, 1, GREATER)
    assert st2.is_terminal()
    assert unique_interleaving(st2) == (("b", 1), ("a", 1))


def test_inconsistent_outcome_rejected():
    st0 = apply_outcome(initial_state(2, 3), 1, 3, GREATER)  # a_1 > b_3
    assert st0.L == (3, 3)
    with pytest.raises(MergeLabError):
        apply_outcome(st0, 2, 3, LESS)  # contradicts b_3 < a_1 < a_2


def test_redundant_outcome_is_identity():
    st0 = apply_outcome(initial_state(2, 3), 1, 2, LESS)
    assert apply_outcome(st0, 1, 3, LESS) == st0


@st.composite
def reachable_states(draw):
    m = draw(st.integers(1, 4))
    n = draw(st.integers(1, 6))
    state = initial_state(m, n)
    for _ in range(draw(st.integers(0, 6))):
        i = draw(st.integers(1, m))
        lo, hi = state.L[i - 1], state.H[i - 1]
        if hi - lo <= 1:
            continue
        j = draw(st.integers(lo + 1, hi - 1))
        state = apply_outcome(state, i, j, draw(st.sampled_from([LESS, GREATER])))
    return state


@given(reachable_states())
def test_invariants_preserved(state):
    state.validate()
    assert completions(state) >= 1


@given(reachable_states())
def test_canonicalize_involution(state):
    rev = reverse_state(state)
    rev.validate()
    assert reverse_state(rev) == state
    assert canonicalize(rev) == canonicalize(state)
    assert completions(rev) == completions(state)


def test_unique_interleaving_requires_terminal():
    with pytest.raises(TerminalStateError):
        unique_interleaving(initial_state(1, 1))


def test_state_from_transcript():
    transcript = (((1, 2), LESS), ((2, 2), GREATER))
    state = state_from_transcript(3, 3, transcript)
    assert state.H[0] == 2 and state.L[1] == 2
