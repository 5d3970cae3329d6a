import random

import pytest

from memsys.emergence import (
    FAIRNESS_MODES,
    brute_force_emergence,
    check_emergence,
    fair_terminal_classes,
)
from memsys.graph import FINITE, LASSO, build_graph
from memsys.system import MemorySystem, apply_transition
from randsys import random_system


@pytest.mark.parametrize("fairness", FAIRNESS_MODES)
def test_fixture_verdicts(maj1, even2, pred3, fairness):
    v = check_emergence(maj1, fairness)
    assert v.supports and v.signal == "g"
    v = check_emergence(even2, fairness)
    assert not v.supports and v.counterexample is not None
    v = check_emergence(pred3, fairness)
    assert v.supports and v.signal == "b"


def test_maj1_classes(maj1):
    g = build_graph(maj1)
    classes = fair_terminal_classes(g)
    assert [sorted(g.configs[v] for v in c.nodes) for c in classes] == [[("G", "G", "G")]]
    assert classes[0].stable_signal == "g"


def test_even2_counterexample_shape(even2):
    ce = check_emergence(even2).counterexample
    assert ce.kind == LASSO and ce.configs == (("G", "B"),) and ce.lasso_start == 0


def test_pred3_idle_loop_is_unfair(pred3):
    # (B,G,B) idles on the pair 1-3 but an enabled pred entry never fires
    g = build_graph(pred3)
    idle = g.node(("B", "G", "B"))
    assert all(idle not in c.nodes for c in fair_terminal_classes(g))


def test_constant_signal_supports():
    sys = MemorySystem.build(["A", "C"], ["a"], {"A": "a", "C": "a"}, 3, {"N": ["1", "2", "3"]},
                             [{"id": "t", "neighbourhood": "N", "guard": [3],
                               "rule": [["a", "A", "C"], ["a", "C", "A"]]}], ["A", "C", "A"])
    v = check_emergence(sys)
    assert v.supports and v.counterexample is None


def test_nonuniform_deadlock_is_counterexample():
    sys = MemorySystem.build(["G", "B"], ["g", "b"], {"G": "g", "B": "b"}, 3, {"N": ["1", "2", "3"]},
                             [], ["G", "B", "B"])
    v = check_emergence(sys)
    assert not v.supports and v.counterexample.kind == FINITE


def replays(sys, h):
    return all(apply_transition(sys, a, e) == b for a, e, b in h.steps())


@pytest.mark.parametrize("fairness", FAIRNESS_MODES)
def test_agrees_with_oracle(fairness):
    rng = random.Random(FAIRNESS_MODES.index(fairness))
    for _ in range(80):
        sys = random_system(rng)
        v = check_emergence(sys, fairness)
        o = brute_force_emergence(sys, 12, fairness)
        assert v.supports == o.supports
        if v.counterexample is not None:
            assert v.counterexample.configs[0] == sys.initial
            assert replays(sys, v.counterexample)


def test_verdict_json(even2):
    g = build_graph(even2)
    doc = check_emergence(even2, graph=g).to_json(g)
    assert doc["supports"] is False and doc["counterexample"]["kind"] == "lasso"
