"""Deciding emergence of collective memory.

A system supports emergence when every spanning history eventually has all
agents emitting one signal forever.  Histories are spanning under one of
three fairness readings:

``entry``
    every transition entry enabled infinitely often fires infinitely often
    (default);
``neighbourhood``
    the same with neighbourhoods in place of entries;
``span``
    the neighbourhoods of the fired entries together cover N.

Finite maximal histories count as spanning under ``entry`` and
``neighbourhood`` and must cover N under ``span``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import (
    ConfigurationGraph,
    History,
    build_graph,
    deadlocks,
    history_from_edges,
    history_to_json,
    shortest_path,
    strongly_connected,
)
from .system import MemorySystem, MemorySystemError

FAIRNESS_MODES = ("entry", "neighbourhood", "span")


class ClassBudgetExceeded(MemorySystemError):
    pass


class BoundTooSmall(MemorySystemError):
    """The lasso enumeration did not saturate within the bound."""


@dataclass(frozen=True)
class FairTerminalClass:
    nodes: frozenset
    witness_edges: tuple
    stable_signal: str | None


@dataclass
class EmergenceVerdict:
    supports: bool
    classes: list = field(default_factory=list)
    deadlock_signals: dict = field(default_factory=dict)  # node -> signal or None
    counterexample: History | None = None
    fairness: str = "entry"

    @property
    def stable_signals_by_class(self) -> list:
        return [c.stable_signal for c in self.classes]

    @property
    def signals(self) -> set:
        """Signals stabilised by the terminal behaviours (classes and deadlocks)."""
        out = {c.stable_signal for c in self.classes}
        out |= set(self.deadlock_signals.values())
        return out

    @property
    def signal(self) -> str | None:
        """The single signal every spanning history converges to, if any."""
        sigs = self.signals
        if self.supports and len(sigs) == 1:
            return next(iter(sigs))
        return None

    def to_json(self, graph: ConfigurationGraph | None = None) -> dict:
        sys = graph.system if graph is not None else None

        def nodes(ns):
            if graph is None:
                return sorted(ns)
            return [list(graph.configs[v]) for v in sorted(ns)]

        out = {
            "supports": self.supports,
            "signal": self.signal,
            "fairness": self.fairness,
            "classes": [
                {"nodes": nodes(c.nodes), "stable_signal": c.stable_signal}
                for c in self.classes
            ],
            "deadlocks": [
                {"node": nodes([d])[0], "signal": s} for d, s in sorted(self.deadlock_signals.items())
            ],
            "counterexample": None,
        }
        if self.counterexample is not None and sys is not None:
            out["counterexample"] = history_to_json(sys, self.counterexample)
        return out


def _labeller(graph: ConfigurationGraph, fairness: str):
    if fairness == "entry":
        return lambda e: e
    if fairness in ("neighbourhood", "span"):
        return graph.neighbourhood_of
    raise ValueError(f"unknown fairness mode {fairness!r}; choose from {FAIRNESS_MODES}")


def _nontrivial(graph, comp) -> bool:
    members = set(comp)
    return any(t in members for v in comp for _, t in graph.succ[v])


def fair_terminal_classes(graph: ConfigurationGraph, fairness: str = "entry",
                          class_budget: int = 100_000) -> list:
    """Maximal node sets that can be the infinitely-visited set of a spanning history.

    Every realisable infinite-visitation set is contained in exactly one of
    the returned classes, and each class is itself realisable, so they
    decide emergence.  Candidates are refined by dropping nodes where some
    interaction is enabled that cannot fire inside the candidate, then
    splitting into SCCs again.
    """
    label = _labeller(graph, fairness)
    sys = graph.system
    enabled_labels = [{label(e) for e, _ in out} for out in graph.succ]
    succ = lambda v: (t for _, t in graph.succ[v])  # noqa: E731

    work = [c for c in strongly_connected(range(len(graph)), succ) if _nontrivial(graph, c)]
    found = []
    steps = 0
    while work:
        steps += 1
        if steps > class_budget:
            raise ClassBudgetExceeded(f"class refinement exceeded {class_budget} steps")
        comp = work.pop()
        members = set(comp)
        internal = [(v, e, t) for v in comp for e, t in graph.succ[v] if t in members]
        if fairness == "span":
            found.append(members)
            continue
        served = {label(e) for _, e, _ in internal}
        bad = {v for v in comp if not enabled_labels[v] <= served}
        if not bad:
            found.append(members)
            continue
        rest = members - bad
        for sub in strongly_connected(rest, succ):
            if _nontrivial(graph, sub):
                work.append(sub)

    classes = []
    for members in sorted(found, key=min):
        internal = tuple((v, e, t) for v in sorted(members) for e, t in graph.succ[v] if t in members)
        sigs = {sys.uniform_signal(graph.configs[v]) for v in members}
        stable = sigs.pop() if len(sigs) == 1 else None
        classes.append(FairTerminalClass(frozenset(members), internal, stable))
    return classes


def _closed_walk(graph, start, members, required_edges) -> list:
    """Closed walk from ``start`` inside ``members`` through every node and required edge."""
    walk = []
    cur = start
    visited = {start}
    for a, e, b in required_edges:
        path = shortest_path(graph, cur, {a}, allowed=members)
        walk += path
        walk.append((a, e, b))
        visited.update(t for _, _, t in path)
        visited.add(b)
        cur = b
    for v in sorted(members):
        if v in visited:
            continue
        path = shortest_path(graph, cur, {v}, allowed=members)
        walk += path
        visited.update(t for _, _, t in path)
        cur = v
    if cur != start:
        walk += shortest_path(graph, cur, {start}, allowed=members)
    if not walk:
        e, t = next((e, t) for e, t in graph.succ[start] if t in members)
        walk.append((start, e, t))
        walk += shortest_path(graph, t, {start}, allowed=members)
    return walk


def _serving_edges(graph, cls: FairTerminalClass, fairness: str) -> list:
    label = _labeller(graph, fairness)
    chosen = {}
    for v, e, t in cls.witness_edges:
        chosen.setdefault(label(e), (v, e, t))
    return [chosen[k] for k in sorted(chosen)]


def check_emergence(sys: MemorySystem, fairness: str = "entry", node_budget: int = 100_000,
                    graph: ConfigurationGraph | None = None, class_budget: int = 100_000
                    ) -> EmergenceVerdict:
    if graph is None:
        graph = build_graph(sys, node_budget)
    _labeller(graph, fairness)
    classes = fair_terminal_classes(graph, fairness, class_budget)
    dead = sorted(deadlocks(graph))
    dead_signals = {d: sys.uniform_signal(graph.configs[d]) for d in dead}

    if fairness == "span":
        return _check_span(graph, classes, dead_signals)

    counterexample = None
    for d in dead:
        if dead_signals[d] is None:
            counterexample = history_from_edges(graph, shortest_path(graph, graph.root, {d}))
            break
    if counterexample is None:
        for cls in classes:
            if cls.stable_signal is None:
                start = min(cls.nodes)
                stem = shortest_path(graph, graph.root, {start})
                cycle = _closed_walk(graph, start, cls.nodes, _serving_edges(graph, cls, fairness))
                counterexample = history_from_edges(graph, stem, cycle)
                break
    return EmergenceVerdict(counterexample is None, classes, dead_signals, counterexample, fairness)


def _agent_mask(sys: MemorySystem, entry_id: str) -> int:
    m = 0
    for i in sys.neighbourhood(sys.entry(entry_id).neighbourhood).members:
        m |= 1 << i
    return m


def _check_span(graph, classes, dead_signals) -> EmergenceVerdict:
    sys = graph.system
    full = (1 << sys.n_agents) - 1
    masks = {e.id: _agent_mask(sys, e.id) for e in sys.transitions}

    # breadth-first search over (node, covered agents)
    start = (graph.root, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        v, m = queue.popleft()
        for e, t in graph.succ[v]:
            st = (t, m | masks[e])
            if st not in parent:
                parent[st] = ((v, m), e)
                queue.append(st)

    def stem_to(state):
        path = []
        while parent[state] is not None:
            prev, e = parent[state]
            path.append((prev[0], e, state[0]))
            state = prev
        return path[::-1]

    # only behaviours some spanning history can reach are reported
    reached_dead = {}
    for (v, m) in sorted(parent):
        if v in dead_signals and m == full:
            reached_dead.setdefault(v, (v, m))
    live = []
    for cls in classes:
        cover = 0
        for _, e, _ in cls.witness_edges:
            cover |= masks[e]
        entry = next(((v, m) for (v, m) in sorted(parent) if v in cls.nodes and m | cover == full),
                     None)
        if entry is not None:
            live.append((cls, entry))
    dead_signals = {d: dead_signals[d] for d in reached_dead}
    classes = [cls for cls, _ in live]

    for d, state in sorted(reached_dead.items()):
        if dead_signals[d] is None:
            ce = history_from_edges(graph, stem_to(state))
            return EmergenceVerdict(False, classes, dead_signals, ce, "span")
    for cls, (v, m) in live:
        if cls.stable_signal is None:
            cycle = _closed_walk(graph, v, cls.nodes, list(cls.witness_edges))
            ce = history_from_edges(graph, stem_to((v, m)), cycle)
            return EmergenceVerdict(False, classes, dead_signals, ce, "span")
    return EmergenceVerdict(True, classes, dead_signals, None, "span")


# -- brute-force oracle ---------------------------------------------------------


def brute_force_emergence(sys: MemorySystem, lasso_bound: int = 12, fairness: str = "entry",
                          node_budget: int = 10_000) -> EmergenceVerdict:
    """Decide emergence by enumerating lassos directly.

    Stems are walks from the initial configuration, cycles are closed walks
    of length at most ``lasso_bound``.  Walks are merged when they agree on
    their current node, the nodes they visited, the interactions they fired
    and the agents they covered, since fairness and stability depend on
    nothing else.  Raises :class:`BoundTooSmall` when no counterexample was
    found and the cycle enumeration had not saturated at the bound.
    """
    graph = build_graph(sys, node_budget)
    label = _labeller(graph, fairness)
    full = (1 << sys.n_agents) - 1
    masks = {e.id: _agent_mask(sys, e.id) for e in sys.transitions}
    span = fairness == "span"

    def uniform(nodes):
        sig_vectors = {sys.signal_vector(graph.configs[v]) for v in nodes}
        if len(sig_vectors) != 1:
            return False
        return len(set(next(iter(sig_vectors)))) == 1

    # stems
    start = (graph.root, 0)
    stems = {start: []}
    queue = deque([start])
    while queue:
        v, m = queue.popleft()
        for e, t in graph.succ[v]:
            st = (t, m | masks[e] if span else 0)
            if st not in stems:
                stems[st] = stems[(v, m)] + [(v, e, t)]
                queue.append(st)

    for (v, m), path in sorted(stems.items()):
        if graph.succ[v]:
            continue
        if span and m != full:
            continue
        if not uniform([v]):
            return EmergenceVerdict(False, counterexample=history_from_edges(graph, path),
                                    fairness=fairness)

    stem_masks: dict = {}
    for (v, m) in stems:
        stem_masks.setdefault(v, set()).add(m)

    saturated = True
    for v in range(len(graph)):
        frontier = {(v, frozenset([v]), frozenset(), 0): []}
        seen = set(frontier)
        for _ in range(lasso_bound):
            nxt = {}
            for (u, nodes, labels, cm), walk in frontier.items():
                for e, t in graph.succ[u]:
                    st = (t, nodes | {t}, labels | {label(e)}, cm | masks[e])
                    step = walk + [(u, e, t)]
                    if t == v:
                        _, n2, l2, c2 = st
                        if span:
                            spanning = any(m | c2 == full for m in stem_masks[v])
                        else:
                            spanning = all(label(e2) in l2 for w in n2 for e2, _ in graph.succ[w])
                        if spanning and not uniform(n2):
                            m0 = min(m for m in stem_masks[v] if not span or m | c2 == full)
                            ce = history_from_edges(graph, stems[(v, m0)], step)
                            return EmergenceVerdict(False, counterexample=ce, fairness=fairness)
                    if st not in seen:
                        seen.add(st)
                        nxt[st] = step
            frontier = nxt
            if not frontier:
                break
        else:
            if frontier:
                saturated = False
    if not saturated:
        raise BoundTooSmall(f"cycle enumeration not saturated at bound {lasso_bound}")
    return EmergenceVerdict(True, fairness=fairness)
