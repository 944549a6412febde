"""Measurement harness: exact worst cases, forced-query charging, fuzzing."""

import pytest

from merge_lab.algorithms import HwangLin, MergeAlgorithm, TapeMerge
from merge_lab.combinatorics import binomial, hwang_lin_formula
from merge_lab.errors import BudgetExceededError
from merge_lab.harness import fuzz, measure, random_interleaving, replay
import random


def test_measure_tape():
    r = measure(TapeMerge(), 4, 4)
    assert r.worst_case == 7
    assert r.leaves == binomial(8, 4) == 70
    assert r.correct and not r.failures
    assert len(r.worst_transcript) == 7


def test_measure_hwang():
    r = measure(HwangLin(), 3, 12)
    assert r.worst_case == hwang_lin_formula(3, 12) == 11
    assert r.correct and r.leaves == binomial(15, 3)


def test_measure_trivial():
    r = measure(TapeMerge(), 1, 1)
    assert r.worst_case == 1 and r.leaves == 2


def test_budget_guard():
    with pytest.raises(BudgetExceededError):
        measure(TapeMerge(), 10, 10, leaf_budget=100)


class WastefulTape(MergeAlgorithm):
    """Asks (1, 1) three times before merging; the repeats are forced."""

    name = "wasteful"

    def __init__(self):
        self.inner = TapeMerge()

    def start(self, m, n):
        return (0, self.inner.start(m, n))

    def query(self, cur):
        waste, sub = cur
        if waste < 3:
            return ("cmp", 1, 1)
        return self.inner.query(sub)

    def advance(self, cur, less):
        waste, sub = cur
        if waste == 0:
            return (1, self.inner.advance(sub, less))
        if waste < 3:
            return (waste + 1, sub)
        return (waste, self.inner.advance(sub, less))


def test_forced_comparisons_are_charged():
    r = measure(WastefulTape(), 3, 3)
    assert r.correct
    assert r.worst_case == measure(TapeMerge(), 3, 3).worst_case + 2


class EarlyStopper(MergeAlgorithm):
    name = "early"

    def start(self, m, n):
        return (m, n)

    def query(self, cur):
        m, n = cur
        return ("done", tuple(("a", i) for i in range(1, m + 1)) + tuple(("b", j) for j in range(1, n + 1)))

    def advance(self, cur, less):
        return cur


def test_wrong_done_reported_not_raised():
    r = measure(EarlyStopper(), 2, 2)
    assert not r.correct
    assert r.failures and r.leaves == 1


def test_replay_fixture():
    below = tuple(("a", i) for i in range(1, 4)) + tuple(("b", j) for j in range(1, 5))
    used, ok = replay(TapeMerge(), 3, 4, below)
    assert used == 3 and ok


def test_random_interleaving_uniform_support():
    rng = random.Random(0)
    seen = {random_interleaving(2, 2, rng) for _ in range(200)}
    assert len(seen) == binomial(4, 2)


def test_fuzz_deterministic():
    a = fuzz(TapeMerge(), 5, 5, 50, seed=42)
    b = fuzz(TapeMerge(), 5, 5, 50, seed=42)
    assert a == b
    assert a.max_comparisons <= 9 and not a.failures
    c = fuzz(TapeMerge(), 5, 5, 50, seed=43)
    assert c.trials == 50
