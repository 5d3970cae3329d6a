import random
from collections import deque

import pytest

from memsys import _accel
from memsys.graph import (
    FINITE,
    LASSO,
    PREFIX,
    BudgetExceeded,
    History,
    UndeterminedError,
    build_graph,
    deadlocks,
    history_from_edges,
    is_eventually_stable,
    scc_decomposition,
    shortest_path,
    trace_records,
)
from memsys.system import apply_transition, enabled_transitions, initial_configuration
from randsys import random_system


def naive_graph(sys):
    start = initial_configuration(sys)
    seen = {start}
    edges = set()
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for e in enabled_transitions(sys, c):
            d = apply_transition(sys, c, e)
            edges.add((c, e, d))
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return seen, edges


def test_maj1_graph(maj1):
    g = build_graph(maj1)
    assert set(g.configs) == {("G", "G", "B"), ("G", "G", "G")}
    assert {(g.configs[s], g.configs[t]) for s, _, t in g.edges} == {
        (("G", "G", "B"), ("G", "G", "G")), (("G", "G", "G"), ("G", "G", "G"))}
    assert g.configs[g.root] == ("G", "G", "B")


def test_even2_single_selfloop(even2):
    g = build_graph(even2)
    assert g.configs == [("G", "B")]
    assert g.edges == [(0, "even-1-1", 0)]
    assert not deadlocks(g)


def test_graph_matches_naive_exploration():
    rng = random.Random(11)
    for _ in range(150):
        sys = random_system(rng)
        g = build_graph(sys)
        nodes, edges = naive_graph(sys)
        assert set(g.configs) == nodes
        assert {(g.configs[s], e, g.configs[t]) for s, e, t in g.edges} == edges


@pytest.mark.skipif("compiled" not in _accel.BACKENDS, reason="compiled kernel not built")
def test_backends_agree():
    rng = random.Random(5)
    for _ in range(150):
        sys = random_system(rng, max_states=3)
        a = build_graph(sys, backend="python")
        b = build_graph(sys, backend="compiled")
        assert a.configs == b.configs and a.edges == b.edges


def test_budget_exceeded(pred3):
    with pytest.raises(BudgetExceeded):
        build_graph(pred3, node_budget=2)


def test_numbering_is_deterministic(pred3):
    assert build_graph(pred3).configs == build_graph(pred3).configs


def test_scc_bottom(maj1):
    sccs = scc_decomposition(build_graph(maj1))
    bottom = [c for c in sccs if c.bottom]
    assert len(bottom) == 1 and not bottom[0].trivial
    assert [c.trivial for c in sccs if not c.bottom] == [True]


def test_shortest_path_and_history(pred3):
    g = build_graph(pred3)
    target = g.node(("B", "B", "B"))
    path = shortest_path(g, g.root, {target})
    assert len(path) == 2
    h = history_from_edges(g, path, [(target, g.succ[target][0][0], target)])
    assert h.kind == LASSO and h.lasso_start == 2
    for src, e, dst in h.steps():
        assert apply_transition(pred3, src, e) == dst


def test_history_positions_unfold():
    h = History(LASSO, (("A",), ("B",), ("C",)), ("x", "y", "z"), 1)
    assert [h.config_at(k)[0] for k in range(7)] == list("ABCBCBC")
    with pytest.raises(IndexError):
        History(FINITE, (("A",),), ()).config_at(1)


def test_history_label_count_checked():
    with pytest.raises(ValueError):
        History(FINITE, (("A",), ("B",)), ())


def test_eventually_stable_examples(maj1, even2):
    maj = History(LASSO, (("G", "G", "B"), ("G", "G", "G")), ("maj-2g-1b", "maj-3g-0b"), 1)
    assert is_eventually_stable(maj1, maj, "g")
    ev = History(LASSO, (("G", "B"),), ("even-1-1",), 0)
    assert not is_eventually_stable(even2, ev, "g")
    assert not is_eventually_stable(even2, ev, "b")
    with pytest.raises(UndeterminedError):
        is_eventually_stable(even2, History(PREFIX, (("G", "B"),), ()), "g")


def test_mixed_cycle_never_stable(maj1):
    h = History(LASSO, (("G", "G", "B"), ("G", "G", "G")), ("a", "b"), 0)
    assert not any(is_eventually_stable(maj1, h, s) for s in maj1.signals)


def test_trace_records(maj1):
    h = History(FINITE, (("G", "G", "B"), ("G", "G", "G")), ("maj-2g-1b",))
    recs = trace_records(maj1, h)
    assert recs[0] == {"step": 0, "label": None, "config": ["G", "G", "B"]}
    assert recs[1]["label"] == {"neighbourhood": "N", "entry": "maj-2g-1b"}


def test_graph_json(maj1):
    doc = build_graph(maj1).to_json()
    assert doc["root"] == 0 and len(doc["nodes"]) == 2 and len(doc["edges"]) == 2
