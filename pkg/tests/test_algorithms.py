"""Decision procedures: purity, correctness on every interleaving, the gambit
accounting, and the selector's proven-bound dispatch."""

import pytest

from merge_lab.algorithms import (
    BinaryInsertion,
    HwangLin,
    ModifiedBinaryMerge,
    OptimalPlayer,
    SelectorConfig,
    TapeMerge,
    TranscriptError,
    proven_bound,
    selector,
)
from merge_lab.combinatorics import binomial, hwang_lin_formula
from merge_lab.errors import MergeLabError, NotSolvedError
from merge_lab.game import GameSolver
from merge_lab.harness import replay
from merge_lab.knowledge import LESS

from itertools import combinations


def all_interleavings(m, n):
    for slots in combinations(range(m + n), m):
        order = []
        ai = bi = 1
        for r in range(m + n):
            if r in slots:
                order.append(("a", ai))
                ai += 1
            else:
                order.append(("b", bi))
                bi += 1
        yield tuple(order)


@pytest.fixture(scope="module")
def shared_solver():
    return GameSolver()


@pytest.fixture(scope="module")
def config(shared_solver):
    return SelectorConfig(solver=shared_solver)


def exhaustive_correct(alg, m, n):
    for order in all_interleavings(m, n):
        used, ok = replay(alg, m, n, order)
        assert ok, (alg.name, m, n, order)
        assert used <= m + n - 1 or alg.name == "?"


def test_tape_correct_everywhere():
    tape = TapeMerge()
    for m in range(0, 5):
        for n in range(0, 5):
            exhaustive_correct(tape, m, n)


def test_binary_insertion():
    alg = BinaryInsertion()
    for n in range(1, 9):
        exhaustive_correct(alg, 1, n)
    with pytest.raises(MergeLabError):
        alg.start(2, 3)


def test_hwang_lin_correct_and_both_orientations():
    hw = HwangLin()
    for m in range(1, 5):
        for n in range(1, 7):
            exhaustive_correct(hw, m, n)
    worst = max(replay(hw, 2, 9, order)[0] for order in all_interleavings(2, 9))
    assert worst == hwang_lin_formula(2, 9)
    worst = max(replay(hw, 9, 2, order)[0] for order in all_interleavings(9, 2))
    assert worst == hwang_lin_formula(2, 9)


def test_modified_correct(config):
    mod = ModifiedBinaryMerge(config)
    for m in range(0, 5):
        for n in range(0, 6):
            if m + n:
                exhaustive_correct(mod, m, n)


def test_optimal_player(shared_solver):
    shared_solver.solve(3, 4)
    alg = OptimalPlayer(shared_solver)
    exhaustive_correct(alg, 3, 4)
    worst = max(replay(alg, 3, 4, order)[0] for order in all_interleavings(3, 4))
    assert worst == shared_solver.solve(3, 4).value
    with pytest.raises(NotSolvedError):
        OptimalPlayer(GameSolver()).start(3, 3)


def test_next_is_pure_and_checks_transcripts():
    tape = TapeMerge()
    assert tape.next(2, 2, ()) == ("cmp", 1, 1)
    t = (((1, 1), LESS),)
    assert tape.next(2, 2, t) == tape.next(2, 2, t) == ("cmp", 2, 1)
    with pytest.raises(TranscriptError):
        tape.next(2, 2, (((2, 2), LESS),))


def gambit_comparisons(mod, m, n, outcomes):
    """Feed outcomes to the dispatcher until it retires a batch; count queries."""
    cur = mod.start(m, n)
    assert cur[4][0] == "gambit"
    count = 0
    for less in outcomes:
        assert cur[4][0] == "gambit", "gambit ended early"
        assert mod.query(cur)[0] == "cmp"
        cur = mod.advance(cur, less)
        count += 1
    assert cur[4][0] != "gambit" or cur[:2] != (1, 1), "gambit still running"
    return count, cur


def test_gambit_branch_accounting():
    # solver disabled so the dispatcher opens with the gambit and the
    # bound recursion stays purely arithmetic
    mod = ModifiedBinaryMerge(SelectorConfig(solver=GameSolver(), completions_limit=0))
    m, n = 9, 16
    # branch 1: a1 > b2 retires b1 b2 for one comparison
    c, cur = gambit_comparisons(mod, m, n, [False])
    assert c == 1 and cur[0] == 1 and cur[1] == 3
    # branch 2: a1 < b2, a2 > b2, then a1:b1 -> 3 comparisons, retires a1 b1 b2
    c, cur = gambit_comparisons(mod, m, n, [True, False, True])
    assert c == 3 and cur[0] == 2 and cur[1] == 3
    # branch 3: a1 < b2, a2 < b2, a2 > b1, then a1:b1 -> 4, retires a1 a2 b1
    c, cur = gambit_comparisons(mod, m, n, [True, True, False, True])
    assert c == 4 and cur[0] == 3 and cur[1] == 2
    # branch 4: a2 < b1 -> 3 comparisons, retires a1 a2
    c, cur = gambit_comparisons(mod, m, n, [True, True, True])
    assert c == 3 and cur[0] == 3 and cur[1] == 1


def test_selector_fixtures(config):
    assert selector(config, 5, 9) == "optimal"
    assert proven_bound(config, 5, 9)[0] == 12
    assert selector(config, 25, 38) == "tape"
    assert proven_bound(config, 25, 38)[0] == 62
    assert proven_bound(config, 3, 12)[0] <= 11
    no_solver = SelectorConfig(solver=GameSolver(), completions_limit=0)
    assert proven_bound(no_solver, 3, 12)[0] == 11
    assert selector(no_solver, 25, 38) == "tape"
    # gambit bounds at the interesting even/odd rows, solver-free
    assert proven_bound(no_solver, 8, 14)[0] <= 21
    assert proven_bound(no_solver, 10, 18)[0] <= 27


def test_selector_orientation(config):
    assert proven_bound(config, 9, 5)[0] == proven_bound(config, 5, 9)[0]
