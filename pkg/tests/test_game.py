"""Exact solver: brute-force equivalence, fixtures, strategy extraction."""

import functools

import pytest

from merge_lab.combinatorics import ceil_lg, info_bound
from merge_lab.errors import NotSolvedError, TerminalStateError
from merge_lab.game import GameSolver, decompose, trusted_exact, trusted_upper
from merge_lab.knowledge import GREATER, LESS, KnowledgeState, apply_outcome, initial_state


@functools.lru_cache(maxsize=None)
def brute_value(L, H, n):
    """Plain minimax over meaningful comparisons; no blocks, no windows."""
    m = len(L)
    if all(h == l + 1 for l, h in zip(L, H)):
        return 0
    best = None
    for i in range(1, m + 1):
        for j in range(L[i - 1] + 1, H[i - 1]):
            state = KnowledgeState(m, n, L, H)
            less = apply_outcome(state, i, j, LESS)
            greater = apply_outcome(state, i, j, GREATER)
            v = 1 + max(brute_value(less.L, less.H, n), brute_value(greater.L, greater.H, n))
            if best is None or v < best:
                best = v
    return best


def test_brute_force_equivalence(solver):
    for m in range(0, 5):
        for n in range(0, 6):
            want = brute_value((0,) * m, (n + 1,) * m, n) if m else 0
            assert solver.solve(m, n).value == want, (m, n)


def test_fixture_rows(solver):
    for n in range(1, 17):
        assert solver.solve(1, n).value == ceil_lg(n + 1)
    for m in range(1, 7):
        assert solver.solve(m, m).value == 2 * m - 1
    assert solver.solve(2, 4).value == 5
    assert solver.solve(3, 5).value == 7
    out = solver.solve(5, 9)
    assert out.value == 12 and not out.budget_hit


def test_sandwich(solver):
    for m in range(1, 6):
        for n in range(1, 7):
            v = solver.solve(m, n).value
            assert info_bound(m, n) <= v <= info_bound(m, n) + m


def test_decompose_blocks():
    # a_2 fully placed splits the problem around it
    state = initial_state(3, 4)
    state = apply_outcome(state, 2, 2, GREATER)
    state = apply_outcome(state, 2, 3, LESS)
    parts = decompose(state.n, state.L, state.H)
    assert len(parts) == 2
    (b1, a_off1, b_off1), (b2, a_off2, b_off2) = parts
    assert a_off1 == 0 and b_off1 == 0
    assert len(b1[1]) == 1 and b1[0] == 2  # a_1 against b_1, b_2
    assert len(b2[1]) == 1 and b2[0] == 2  # a_3 against b_3, b_4 shifted
    assert a_off2 == 2 and b_off2 == 2


def test_value_additivity_over_blocks(solver):
    # a_1 in a width-2 window below b_2, a_2 in a width-3 window above b_3
    state = apply_outcome(initial_state(2, 5), 1, 2, LESS)
    state = apply_outcome(state, 2, 3, GREATER)
    assert solver.value_of_state(state) == 1 + 2
    # a_1 fully placed below b_1 leaves only the a_2 insert
    state = apply_outcome(initial_state(2, 2), 1, 1, LESS)
    state = apply_outcome(state, 2, 1, GREATER)
    assert solver.value_of_state(state) == 1


def test_optimal_move_fixtures(solver):
    solver.solve(1, 3)
    assert solver.optimal_move(initial_state(1, 3)) == (1, 2)
    solver.solve(1, 1)
    assert solver.optimal_move(initial_state(1, 1)) == (1, 1)
    solver.solve(2, 2)
    move = solver.optimal_move(initial_state(2, 2))
    assert move == (1, 1)  # every first move reaches 3; the tie-break is lexicographic


def test_optimal_move_requires_solve_and_liveness():
    fresh = GameSolver()
    with pytest.raises(NotSolvedError):
        fresh.optimal_move(initial_state(2, 3))
    fresh.solve(1, 1)
    done = apply_outcome(initial_state(1, 1), 1, 1, LESS)
    with pytest.raises(TerminalStateError):
        fresh.optimal_move(done)


def test_optimal_play_meets_value(solver):
    for m, n in [(2, 3), (3, 3), (3, 4), (2, 5)]:
        value = solver.solve(m, n).value

        def worst(state, depth):
            if state.is_terminal():
                return depth
            i, j = solver.optimal_move(state)
            return max(
                worst(apply_outcome(state, i, j, LESS), depth + 1),
                worst(apply_outcome(state, i, j, GREATER), depth + 1),
            )

        assert worst(initial_state(m, n), 0) == value


def test_budget_exhaustion_is_reported():
    tiny = GameSolver(state_budget=5)
    out = tiny.solve(4, 6)
    assert out.value is None and out.budget_hit
    assert out.states_expanded >= 5


def test_dump_strategy_shape(solver):
    dump = solver.dump_strategy(2, 2)
    assert set(dump) == {"m", "n", "value", "moves"}
    assert dump["value"] == 3
    first = dump["moves"][0]
    assert set(first) == {"L", "H", "move"}
    moves = [(tuple(e["L"]), tuple(e["H"])) for e in dump["moves"]]
    assert moves == sorted(moves)
    assert solver.dump_strategy(2, 2) == dump


def test_trusted_registry():
    assert trusted_exact(7, 12) == trusted_exact(12, 7) == 17
    assert trusted_upper(10, 20) == 27
    assert trusted_exact(9, 9) is None
