import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsys.graph import FINITE, LASSO, PREFIX, History
from memsys.logic import ast as A
from memsys.logic.checker import prepare
from memsys.logic.eliminate import bind, eliminate_counting
from memsys.logic.evaluate import LogicModel, eval_at
from memsys.logic.parser import parse_formula
from randsys import random_formula, random_system, random_valuation
from refsem import all_small_histories, random_history, reference_holds

MAJ_LASSO = History(LASSO, (("G", "G", "B"), ("G", "G", "G")), ("maj-2g-1b", "maj-3g-0b"), 1)


def holds(sys, h, k, text, valuation=None):
    model = LogicModel(sys, valuation or {})
    return eval_at(h, k, prepare(text, sys, valuation), model).holds


def test_spec_examples(maj1):
    assert holds(maj1, MAJ_LASSO, 0, "#x. g@x = 2") is True
    assert holds(maj1, MAJ_LASSO, 0, "<> [] forall x. g@x") is True
    v = eval_at(MAJ_LASSO, 0, prepare("stable(g)", maj1), LogicModel(maj1))
    assert v.holds is False and v.counterexample == MAJ_LASSO and v.position == 0


def test_count_without_elimination(maj1):
    f = bind(parse_formula("#x. g@x = 2"), maj1)
    assert eval_at(MAJ_LASSO, 0, f, LogicModel(maj1)).holds
    assert not eval_at(MAJ_LASSO, 5, f, LogicModel(maj1)).holds


def test_open_formula_under_assignment(maj1):
    f = bind(parse_formula("#y. (g@y & ~(y = x)) = 1"), maj1, {"x": "1"})
    assert eval_at(MAJ_LASSO, 0, f, LogicModel(maj1)).holds


def test_previous_false_at_origin_examples(maj1):
    assert holds(maj1, MAJ_LASSO, 0, "Y true") is False
    assert holds(maj1, MAJ_LASSO, 1, "Y b@3") is True


def test_next_false_at_end_of_finite(maj1):
    h = History(FINITE, (("G", "G", "B"), ("G", "G", "G")), ("maj-2g-1b",))
    assert holds(maj1, h, 1, "X true") is False
    assert holds(maj1, h, 0, "X g@3") is True


def test_position_out_of_range(maj1):
    h = History(FINITE, (("G", "G", "B"),), ())
    with pytest.raises(IndexError):
        eval_at(h, 1, A.TRUE, LogicModel(maj1))


def test_prefix_three_valued(maj1):
    h = History(PREFIX, (("G", "G", "B"), ("G", "G", "G")), ("maj-2g-1b",))
    assert holds(maj1, h, 0, "<> g@3") is True
    assert holds(maj1, h, 0, "[] g@1") is None
    assert holds(maj1, h, 0, "<> b@1") is None
    assert holds(maj1, h, 0, "X X g@1") is None
    assert holds(maj1, h, 0, "Y g@1") is False
    assert holds(maj1, h, 1, "P- b@3") is True
    assert holds(maj1, h, 0, "[] g@1 & b@1") is False


def test_propositions(maj1):
    val = {"G": ["happy"]}
    assert holds(maj1, MAJ_LASSO, 0, "happy@1 & ~happy@3", val) is True
    assert holds(maj1, MAJ_LASSO, 0, "<> happy@3", val) is True
    # unknown propositions are false
    assert holds(maj1, MAJ_LASSO, 0, "sad@1", val) is False


def fixture_histories(fixtures):
    for name, sys in fixtures.items():
        for h in all_small_histories(sys, 4):
            yield sys, h


def test_duality_on_fixture_histories(fixtures):
    rng = random.Random(4)
    for sys, h in fixture_histories(fixtures):
        f = eliminate_counting(bind(random_formula(rng, sys, depth=2, size=4), sys), sys)
        model = LogicModel(sys, {})
        horizon = len(h.configs) + 3
        for k in range(len(h.configs) if h.kind != LASSO else horizon):
            box = eval_at(h, k, A.always(f), model).holds
            later = range(k, len(h.configs)) if h.kind != LASSO else range(k, k + 3 * horizon)
            assert box == all(eval_at(h, j, f, model).holds for j in later)
            hist = eval_at(h, k, A.historically(f), model).holds
            assert hist == all(eval_at(h, j, f, model).holds for j in range(k + 1))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_matches_reference_semantics(seed):
    rng = random.Random(seed)
    sys = random_system(rng)
    val = {q: set(p) for q, p in random_valuation(rng, sys).items()}
    h = random_history(rng, sys, prefer_lasso=rng.random() < 0.7)
    f = bind(random_formula(rng, sys, depth=3, size=rng.randint(1, 7)), sys, valuation=val)
    ground = eliminate_counting(f, sys)
    model = LogicModel(sys, val)
    last = len(h.configs) if h.kind != LASSO else len(h.configs) + 4
    for k in range(last):
        want = reference_holds(sys, val, h, k, f)
        assert eval_at(h, k, f, model).holds == want
        # elimination preserves the verdict
        assert eval_at(h, k, ground, model).holds == want


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_previous_false_at_origin(seed):
    rng = random.Random(seed)
    sys = random_system(rng)
    h = random_history(rng, sys)
    f = prepare(random_formula(rng, sys, depth=2, size=4), sys, {})
    assert eval_at(h, 0, A.Prev(f), LogicModel(sys)).holds is False


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_next_false_at_final_position(seed):
    rng = random.Random(seed)
    sys = random_system(rng)
    h = random_history(rng, sys, prefer_lasso=False)
    if h.kind != FINITE:
        return
    f = prepare(random_formula(rng, sys, depth=2, size=4), sys, {})
    assert eval_at(h, len(h.configs) - 1, A.Next(f), LogicModel(sys)).holds is False


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_count_monotone(seed):
    rng = random.Random(seed)
    sys = random_system(rng)
    h = random_history(rng, sys)
    body = random_formula(rng, sys, depth=1, size=3, bound=("x",))
    model = LogicModel(sys)
    for k in range(1, sys.n_agents + 1):
        hi = bind(A.Count("x", body, ">=", k), sys)
        lo = bind(A.Count("x", body, ">=", k - 1), sys)
        for pos in range(len(h.configs)):
            if eval_at(h, pos, hi, model).holds:
                assert eval_at(h, pos, lo, model).holds
