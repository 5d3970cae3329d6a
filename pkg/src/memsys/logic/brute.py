"""Brute-force model checking by enumerating histories."""

from __future__ import annotations

from ..emergence import BoundTooSmall, _agent_mask, _labeller
from ..graph import FINITE, LASSO, BudgetExceeded, History, build_graph
from ..system import MemorySystem
from .checker import MODES, prepare
from .evaluate import LogicModel, Verdict, eval_at


def brute_force_check(sys: MemorySystem, valuation: dict | None, formula, stem_bound: int = 12,
                      mode: str = "all-maximal", fairness: str = "entry",
                      assignment: dict | None = None, node_budget: int = 10_000,
                      walk_budget: int = 1_000_000) -> Verdict:
    """Evaluate ``formula`` at instant 0 on every short history.

    Covers every finite-maximal history and every lasso with at most
    ``stem_bound`` stored configurations.  Histories are enumerated as node
    sequences: the truth of a formula depends only on the configurations,
    and the edge labels only matter for fairness.  A lasso may go round its
    cycle several times using different parallel edges without changing its
    configuration word, so its cycle can serve every label of every edge
    between consecutive cycle nodes; stem labels are chosen one per step.

    Raises :class:`BoundTooSmall` when ``stem_bound`` is below the number of
    reachable configurations, since some simple lassos would be missed, and
    :class:`BudgetExceeded` when more than ``walk_budget`` node sequences
    would have to be enumerated.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    valuation = {q: set(ps) for q, ps in (valuation or {}).items()}
    f = prepare(formula, sys, valuation, assignment)
    graph = build_graph(sys, node_budget)
    if stem_bound < len(graph):
        raise BoundTooSmall(f"bound {stem_bound} below the {len(graph)} reachable configurations")
    label = _labeller(graph, fairness)
    fair = mode == "spanning-only"
    span = fair and fairness == "span"
    full = (1 << sys.n_agents) - 1
    model = LogicModel(sys, valuation)

    # parallel edges between consecutive nodes
    between: list = [dict() for _ in graph.configs]
    for s, e, t in graph.edges:
        between[s].setdefault(t, []).append(e)
    masks = {e.id: _agent_mask(sys, e.id) for e in sys.transitions}
    enabled = [{label(e) for e, _ in out} for out in graph.succ]
    if count_walks(between, graph.root, stem_bound) > walk_budget:
        raise BudgetExceeded(f"more than {walk_budget} walks of length {stem_bound}")

    def stem_masks(nodes) -> set:
        reach = {0}
        for a, b in zip(nodes, nodes[1:]):
            reach = {m | masks[e] for m in reach for e in between[a][b]}
        return reach

    def history(nodes, start=None) -> History:
        configs = tuple(graph.configs[v] for v in nodes)
        if start is None:
            labels = tuple(between[a][b][0] for a, b in zip(nodes, nodes[1:]))
            return History(FINITE, configs, labels)
        closed = list(nodes) + [nodes[start]]
        labels = tuple(between[a][b][0] for a, b in zip(closed, closed[1:]))
        return History(LASSO, configs, labels, start)

    def spanning_lasso(nodes, start) -> bool:
        closed = list(nodes[start:]) + [nodes[start]]
        cyc_labels = set()
        cyc_mask = 0
        for a, b in zip(closed, closed[1:]):
            for e in between[a][b]:
                cyc_labels.add(label(e))
                cyc_mask |= masks[e]
        if span:
            return any(m | cyc_mask == full for m in stem_masks(nodes[:start + 1]))
        return all(enabled[v] <= cyc_labels for v in nodes[start:])

    def check(h):
        verdict = eval_at(h, 0, f, model)
        return None if verdict.holds else Verdict(False, h, 0)

    # every node sequence from the root, each prefix visited once
    stack = [[graph.root]]
    while stack:
        nodes = stack.pop()
        last = nodes[-1]
        if not between[last]:
            if not span or full in stem_masks(nodes):
                found = check(history(nodes))
                if found:
                    return found
            continue
        for j, v in enumerate(nodes):
            if v in between[last] and (not fair or spanning_lasso(nodes, j)):
                found = check(history(nodes, j))
                if found:
                    return found
        if len(nodes) < stem_bound:
            stack += [nodes + [t] for t in sorted(between[last], reverse=True)]
    return Verdict(True)


def count_walks(between, root: int, length: int) -> int:
    """Number of node sequences from ``root`` with at most ``length`` nodes."""
    layer = {root: 1}
    total = 1
    for _ in range(length - 1):
        nxt: dict = {}
        for v, k in layer.items():
            for t in between[v]:
                nxt[t] = nxt.get(t, 0) + k
        layer = nxt
        total += sum(layer.values())
    return total
