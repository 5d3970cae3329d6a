"""Configuration graphs, histories and SCC machinery."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from . import _accel
from ._kernels_py import decode
from .system import Configuration, MemorySystem, MemorySystemError


class BudgetExceeded(MemorySystemError):
    """More configurations are reachable than the node budget allows."""


class UndeterminedError(ValueError):
    """A property of an infinite history was asked of a finite prefix."""


def compile_system(sys: MemorySystem) -> dict:
    """Integer arrays describing ``sys`` for the exploration kernels."""
    qidx = {q: i for i, q in enumerate(sys.states)}
    nb_index = {nb.name: i for i, nb in enumerate(sys.neighbourhoods)}
    sig = [sys.signal_index[sys.signal_of[q]] for q in sys.states]
    upd = []
    for e in sys.transitions:
        if e.neighbourhood not in nb_index:
            raise MemorySystemError(f"entry {e.id!r}: unknown neighbourhood {e.neighbourhood!r}")
        rule = e.rule_map
        upd.append([qidx[rule.get((sys.signal_of[q], q), q)] for q in sys.states])
    return {
        "init": tuple(qidx[q] for q in sys.initial),
        "sig": sig,
        "nb_members": [sorted(nb.members) for nb in sys.neighbourhoods],
        "entry_nb": [nb_index[e.neighbourhood] for e in sys.transitions],
        "entry_guard": [tuple(e.guard) for e in sys.transitions],
        "entry_upd": upd,
        "n_signals": len(sys.signals),
    }


@dataclass(eq=False)
class ConfigurationGraph:
    """Reachable configurations of a system.

    Node 0 is the initial configuration; nodes are numbered in breadth-first
    discovery order with successors expanded in entry-id order, so the
    numbering is a function of the system alone.  ``edges`` holds
    ``(source, entry_id, target)`` triples, one per enabled entry per node.
    """

    system: MemorySystem
    configs: list
    edges: list
    succ: list = field(repr=False)

    root = 0

    @cached_property
    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.configs)}

    @cached_property
    def pred(self) -> list:
        out = [[] for _ in self.configs]
        for s, e, t in self.edges:
            out[t].append((e, s))
        return out

    def __len__(self) -> int:
        return len(self.configs)

    def node(self, config: Configuration) -> int:
        return self.index[tuple(config)]

    def enabled(self, node: int) -> list:
        return [e for e, _ in self.succ[node]]

    def neighbourhood_of(self, entry_id: str) -> str:
        return self.system.entry(entry_id).neighbourhood

    def to_json(self) -> dict:
        sys = self.system
        return {
            "root": self.root,
            "nodes": [{"id": i, "config": list(c)} for i, c in enumerate(self.configs)],
            "edges": [
                {"source": s, "target": t, "neighbourhood": sys.entry(e).neighbourhood, "entry": e}
                for s, e, t in self.edges
            ],
        }


def build_graph(sys: MemorySystem, node_budget: int = 100_000, backend: str | None = None
                ) -> ConfigurationGraph:
    if node_budget < 1:
        raise ValueError("node_budget must be at least 1")
    arrays = compile_system(sys)
    kernel = _accel.get_backend(backend)
    codes, raw_edges, complete = kernel.explore(
        arrays["init"], arrays["sig"], arrays["nb_members"], arrays["entry_nb"],
        arrays["entry_guard"], arrays["entry_upd"], arrays["n_signals"], node_budget)
    if not complete:
        raise BudgetExceeded(f"more than {node_budget} reachable configurations")
    n_states = len(sys.states)
    n_agents = sys.n_agents
    configs = [
        tuple(sys.states[q] for q in decode(c, n_agents, n_states))
        for c in codes
    ]
    ids = [e.id for e in sys.transitions]
    edges = [(s, ids[e], t) for s, e, t in raw_edges]
    succ: list = [[] for _ in configs]
    for s, e, t in edges:
        succ[s].append((e, t))
    return ConfigurationGraph(sys, configs, edges, succ)


def deadlocks(graph: ConfigurationGraph) -> frozenset:
    return frozenset(i for i, out in enumerate(graph.succ) if not out)


@dataclass(frozen=True)
class SCC:
    nodes: frozenset
    bottom: bool
    trivial: bool  # single node without a self-loop


def strongly_connected(nodes: Iterable[int], succ: Callable[[int], Iterable[int]]) -> list:
    """Tarjan's algorithm restricted to ``nodes``; returns sorted node lists.

    Components are ordered by their smallest member.
    """
    nodes = list(nodes)
    allowed = set(nodes)
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps = []
    counter = 0
    for start in sorted(nodes):
        if start in index:
            continue
        work = [(start, iter(succ(start)))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in allowed:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def scc_decomposition(graph: ConfigurationGraph) -> list:
    comps = strongly_connected(range(len(graph)), lambda v: (t for _, t in graph.succ[v]))
    out = []
    for comp in comps:
        members = frozenset(comp)
        bottom = all(t in members for v in comp for _, t in graph.succ[v])
        trivial = len(comp) == 1 and all(t != comp[0] for _, t in graph.succ[comp[0]])
        out.append(SCC(members, bottom, trivial))
    return out


def shortest_path(graph: ConfigurationGraph, source: int, targets, allowed=None) -> list | None:
    """Edge list ``[(src, entry, dst), ...]`` of a shortest path, or None.

    ``targets`` is a container of nodes or a predicate; ``allowed`` restricts
    intermediate and target nodes.  A zero-length path is returned when the
    source itself is a target.
    """
    is_target = targets if callable(targets) else targets.__contains__
    if is_target(source):
        return []
    parent = {source: None}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for e, t in graph.succ[v]:
            if t in parent or (allowed is not None and t not in allowed):
                continue
            parent[t] = (v, e)
            if is_target(t):
                path = []
                while parent[t] is not None:
                    v2, e2 = parent[t]
                    path.append((v2, e2, t))
                    t = v2
                return path[::-1]
            queue.append(t)
    return None


# -- histories ----------------------------------------------------------------

FINITE = "finite-maximal"
LASSO = "lasso"
PREFIX = "prefix"


@dataclass(frozen=True)
class History:
    """A path from the initial configuration.

    ``labels[i]`` is the entry fired from ``configs[i]``.  For finite and
    prefix histories ``len(labels) == len(configs) - 1``.  A lasso repeats
    ``configs[lasso_start:]`` forever: its last label leads from
    ``configs[-1]`` back to ``configs[lasso_start]``, so
    ``len(labels) == len(configs)``.
    """

    kind: str
    configs: tuple
    labels: tuple
    lasso_start: int | None = None

    def __post_init__(self):
        if self.kind not in (FINITE, LASSO, PREFIX):
            raise ValueError(f"unknown history kind {self.kind!r}")
        expected = len(self.configs) if self.kind == LASSO else len(self.configs) - 1
        if len(self.labels) != expected:
            raise ValueError("label count does not match history kind")
        if self.kind == LASSO and not (0 <= (self.lasso_start or 0) < len(self.configs)):
            raise ValueError("lasso_start out of range")

    @property
    def stem_length(self) -> int:
        return self.lasso_start if self.kind == LASSO else len(self.configs)

    @property
    def cycle(self) -> tuple:
        return self.configs[self.lasso_start:] if self.kind == LASSO else ()

    def config_at(self, k: int) -> Configuration:
        return self.configs[self.position(k)]

    def position(self, k: int) -> int:
        """Index into ``configs`` of instant ``k`` (lassos unfold forever)."""
        if k < 0:
            raise IndexError("negative position")
        if k < len(self.configs):
            return k
        if self.kind != LASSO:
            raise IndexError(f"position {k} beyond history of length {len(self.configs)}")
        c = len(self.configs) - self.lasso_start
        return self.lasso_start + (k - self.lasso_start) % c

    def steps(self) -> list:
        """``(source_config, entry, target_config)`` for every stored step."""
        out = []
        for i, e in enumerate(self.labels):
            j = i + 1 if i + 1 < len(self.configs) else self.lasso_start
            out.append((self.configs[i], e, self.configs[j]))
        return out


def history_from_edges(graph: ConfigurationGraph, stem: Sequence, cycle: Sequence = ()) -> History:
    """Build a history from graph edge lists.

    ``stem`` is a path from the root; ``cycle`` (optional) is a closed walk
    starting where the stem ends.  Without a cycle the stem must end in a
    deadlock (finite-maximal) or is reported as a prefix.
    """
    nodes = [graph.root] + [t for _, _, t in stem]
    labels = [e for _, e, _ in stem]
    if cycle:
        start = len(nodes) - 1
        nodes += [t for _, _, t in cycle[:-1]]
        labels += [e for _, e, _ in cycle]
        return History(LASSO, tuple(graph.configs[v] for v in nodes), tuple(labels), start)
    kind = FINITE if not graph.succ[nodes[-1]] else PREFIX
    return History(kind, tuple(graph.configs[v] for v in nodes), tuple(labels))


def is_eventually_stable(sys: MemorySystem, history: History, signal: str,
                         neighbourhood: str | None = None) -> bool:
    if history.kind == PREFIX:
        raise UndeterminedError("stability is not determined by a finite prefix")
    members = None if neighbourhood is None else sys.neighbourhood(neighbourhood).members
    tail = history.cycle if history.kind == LASSO else history.configs[-1:]
    return all(sys.uniform_signal(c, members) == signal for c in tail)


def trace_records(sys: MemorySystem, history: History) -> list:
    """One JSON-ready record per instant of the stored history."""
    out = [{"step": 0, "label": None, "config": list(history.configs[0])}]
    for i, (_, e, target) in enumerate(history.steps(), start=1):
        out.append({
            "step": i,
            "label": {"neighbourhood": sys.entry(e).neighbourhood, "entry": e},
            "config": list(target),
        })
    return out


def history_to_json(sys: MemorySystem, history: History) -> dict:
    return {
        "kind": history.kind,
        "lasso_start": history.lasso_start,
        "trace": trace_records(sys, history),
    }
