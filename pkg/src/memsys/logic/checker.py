"""Explicit-state model checking by product with a formula tableau.

A product state is ``(node, past, guess, mask)``:

* ``past`` holds one bit per previous-operator (the argument's value one
  instant earlier) and one per past-eventually (its own value one instant
  earlier), so past operators are evaluated exactly and incrementally;
* ``guess`` holds one bit per next-operator (the argument's value one
  instant later) and one per eventually (its own value one instant later);
  a step is allowed only when the guesses match the successor;
* ``mask`` accumulates the agents covered by fired neighbourhoods and is
  only tracked under ``span`` fairness.

Given these bits every subformula has a determined value at the state.  A
history violating the formula corresponds to a product run starting with the
formula false that either stops at a deadlock with no pending obligation or
loops forever through a strongly connected set that fulfils every eventually
(and, in spanning-only mode, the fairness requirement).  Threshold nodes are
evaluated as counters, never expanded.
"""

from __future__ import annotations

from collections import deque

from ..emergence import _agent_mask, _labeller
from ..graph import ConfigurationGraph, build_graph, history_from_edges, strongly_connected
from ..system import MemorySystem
from . import ast as A
from .eliminate import BindError, bind, eliminate_counting
from .evaluate import Verdict
from .parser import parse_formula

MODES = ("all-maximal", "spanning-only")


class _Tableau:
    """Subformula closure compiled to an evaluation program."""

    def __init__(self, f: A.Formula, sys: MemorySystem, valuation: dict):
        self.sys = sys
        self.valuation = valuation
        self.nodes = A.subformulas(f)  # children before parents
        self.pos = {g: i for i, g in enumerate(self.nodes)}
        self.root = self.pos[f]
        self.past = [i for i, g in enumerate(self.nodes) if isinstance(g, (A.Prev, A.Once))]
        self.future = [i for i, g in enumerate(self.nodes) if isinstance(g, (A.Next, A.Eventually))]
        self.past_bit = {i: b for b, i in enumerate(self.past)}
        self.future_bit = {i: b for b, i in enumerate(self.future)}
        self.evs = [i for i in self.future if isinstance(self.nodes[i], A.Eventually)]
        prog = []
        for g in self.nodes:
            if isinstance(g, A.Const):
                prog.append(("const", g.value))
            elif isinstance(g, A.Sig):
                prog.append(("sig", g.term.index, g.signal))
            elif isinstance(g, A.Prop):
                prog.append(("prop", g.term.index, g.prop))
            elif isinstance(g, A.Not):
                prog.append(("not", self.pos[g.arg]))
            elif isinstance(g, A.Or):
                prog.append(("or", self.pos[g.left], self.pos[g.right]))
            elif isinstance(g, A.Threshold):
                prog.append(("thr", g.op, g.k, tuple(self.pos[a] for a in g.args)))
            elif isinstance(g, A.Prev):
                prog.append(("prev", self.past_bit[self.pos[g]]))
            elif isinstance(g, A.Once):
                prog.append(("once", self.pos[g.arg], self.past_bit[self.pos[g]]))
            elif isinstance(g, A.Next):
                prog.append(("next", self.future_bit[self.pos[g]]))
            elif isinstance(g, A.Eventually):
                prog.append(("ev", self.pos[g.arg], self.future_bit[self.pos[g]]))
            else:
                raise BindError(f"cannot model-check {A.to_text(g)}; bind and eliminate first")
        self.prog = prog

    def values(self, config, past: int, guess: int) -> list:
        sys = self.sys
        out = []
        for ins in self.prog:
            op = ins[0]
            if op == "const":
                v = ins[1]
            elif op == "sig":
                v = sys.signal_of[config[ins[1]]] == ins[2]
            elif op == "prop":
                v = ins[2] in self.valuation.get(config[ins[1]], ())
            elif op == "not":
                v = not out[ins[1]]
            elif op == "or":
                v = out[ins[1]] or out[ins[2]]
            elif op == "thr":
                v = A.compare(sum(out[a] for a in ins[3]), ins[1], ins[2])
            elif op == "prev":
                v = bool(past >> ins[1] & 1)
            elif op == "once":
                v = out[ins[1]] or bool(past >> ins[2] & 1)
            elif op == "next":
                v = bool(guess >> ins[1] & 1)
            else:
                v = out[ins[1]] or bool(guess >> ins[2] & 1)
            out.append(v)
        return out

    def next_past(self, vals) -> int:
        bits = 0
        for b, i in enumerate(self.past):
            g = self.nodes[i]
            v = vals[self.pos[g.arg]] if isinstance(g, A.Prev) else vals[i]
            bits |= v << b
        return bits

    def observed(self, vals) -> int:
        """What a predecessor must have guessed for this state."""
        bits = 0
        for b, i in enumerate(self.future):
            g = self.nodes[i]
            v = vals[self.pos[g.arg]] if isinstance(g, A.Next) else vals[i]
            bits |= v << b
        return bits


def prepare(formula, sys: MemorySystem, valuation: dict | None = None,
            assignment: dict | None = None, strict: bool = False) -> A.Formula:
    """Parse (if needed), bind and eliminate counting; returns a ground formula."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    bound = bind(formula, sys, assignment, valuation, strict)
    return eliminate_counting(bound, sys)


def model_check(sys: MemorySystem, valuation: dict | None, formula, mode: str = "all-maximal",
                fairness: str = "entry", assignment: dict | None = None,
                node_budget: int = 100_000, graph: ConfigurationGraph | None = None,
                strict: bool = False) -> Verdict:
    """Does every (maximal or spanning) history satisfy ``formula`` at instant 0?

    On failure the verdict carries a finite-maximal or lasso counterexample
    violating the formula at position 0.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    valuation = {q: set(ps) for q, ps in (valuation or {}).items()}
    f = prepare(formula, sys, valuation, assignment, strict)
    if graph is None:
        graph = build_graph(sys, node_budget)
    label = _labeller(graph, fairness)
    fair = mode == "spanning-only"
    span = fair and fairness == "span"
    full = (1 << sys.n_agents) - 1
    masks = {e.id: _agent_mask(sys, e.id) for e in sys.transitions}
    tab = _Tableau(f, sys, valuation)
    n_future = len(tab.future)

    val_cache: dict = {}

    def vals_of(node, past, guess):
        key = (node, past, guess)
        out = val_cache.get(key)
        if out is None:
            out = val_cache[key] = tab.values(graph.configs[node], past, guess)
        return out

    by_obs: dict = {}

    def guesses_matching(node, past, obs):
        key = (node, past)
        table = by_obs.get(key)
        if table is None:
            table = by_obs[key] = {}
            for g in range(1 << n_future):
                table.setdefault(tab.observed(vals_of(node, past, g)), []).append(g)
        return table.get(obs, ())

    # initial states: instant 0 has no past; the formula must be false there
    init = []
    for g in range(1 << n_future):
        if not vals_of(graph.root, 0, g)[tab.root]:
            init.append((graph.root, 0, g, 0))

    parent: dict = {s: None for s in init}
    succ: dict = {}
    queue = deque(init)
    while queue:
        s = queue.popleft()
        v, past, guess, m = s
        vals = vals_of(v, past, guess)
        past2 = tab.next_past(vals)
        out = []
        for e, t in graph.succ[v]:
            m2 = m | masks[e] if span else 0
            for g2 in guesses_matching(t, past2, guess):
                s2 = (t, past2, g2, m2)
                out.append((e, s2))
                if s2 not in parent:
                    parent[s2] = (s, e)
                    queue.append(s2)
        succ[s] = out

    def stem_to(s):
        path = []
        while parent[s] is not None:
            prev, e = parent[s]
            path.append((prev[0], e, s[0]))
            s = prev
        return path[::-1]

    # finite maximal counterexamples; ``parent`` is in breadth-first order
    for s in parent:
        v, past, guess, m = s
        if graph.succ[v] or guess:
            continue
        if span and m != full:
            continue
        return Verdict(False, history_from_edges(graph, stem_to(s)), 0)

    # infinite counterexamples
    enabled = [{label(e) for e, _ in out} for out in graph.succ]
    states = list(parent)
    succ_fn = lambda s: (t for _, t in succ[s])  # noqa: E731
    rank = {s: i for i, s in enumerate(states)}
    work = [c for c in _sccs(states, succ_fn, rank) if _loops(c, succ)]
    while work:
        comp = work.pop()
        members = set(comp)
        if span and comp[0][3] != full:
            continue
        if fair and not span:
            served = {label(e) for s in comp for e, t in succ[s] if t in members}
            bad = {s for s in comp if not enabled[s[0]] <= served}
            if bad:
                rest = [s for s in comp if s not in bad]
                work += [c for c in _sccs(rest, succ_fn, rank) if _loops(c, succ)]
                continue
        required = []
        for i in tab.evs:
            b = tab.future_bit[i]
            arg = tab.pos[tab.nodes[i].arg]
            hit = next((s for s in comp
                        if not (s[2] >> b & 1) or vals_of(s[0], s[1], s[2])[arg]), None)
            if hit is None:
                break
            required.append(hit)
        else:
            if fair and not span:
                chosen = {}
                for s in comp:
                    for e, t in succ[s]:
                        if t in members:
                            chosen.setdefault(label(e), (s, e, t))
                edges = [chosen[k] for k in sorted(chosen)]
            else:
                edges = []
            start = comp[0]
            cycle = _closed_walk(succ, start, members, required, edges)
            history = history_from_edges(
                graph, stem_to(start), [(a[0], e, b[0]) for a, e, b in cycle])
            return Verdict(False, history, 0)
    return Verdict(True)


def _sccs(states, succ_fn, rank):
    index = [rank[s] for s in states]
    lookup = {rank[s]: s for s in states}
    raw = strongly_connected(index, lambda i: (rank[t] for t in succ_fn(lookup[i])))
    return [[lookup[i] for i in c] for c in raw]


def _loops(comp, succ) -> bool:
    members = set(comp)
    return any(t in members for s in comp for _, t in succ[s])


def _bfs(succ, source, targets, members):
    if source in targets:
        return []
    parent = {source: None}
    queue = deque([source])
    while queue:
        s = queue.popleft()
        for e, t in succ[s]:
            if t in parent or t not in members:
                continue
            parent[t] = (s, e)
            if t in targets:
                path = []
                while parent[t] is not None:
                    p, e2 = parent[t]
                    path.append((p, e2, t))
                    t = p
                return path[::-1]
            queue.append(t)
    raise AssertionError("target unreachable inside a strongly connected set")


def _closed_walk(succ, start, members, required_states, required_edges):
    walk = []
    cur = start
    for s in required_states:
        walk += _bfs(succ, cur, {s}, members)
        cur = s
    for a, e, b in required_edges:
        walk += _bfs(succ, cur, {a}, members)
        walk.append((a, e, b))
        cur = b
    walk += _bfs(succ, cur, {start}, members)
    if not walk:
        e, t = next((e, t) for e, t in succ[start] if t in members)
        walk.append((start, e, t))
        walk += _bfs(succ, t, {start}, members)
    return walk


def check_all(sys: MemorySystem, valuation: dict | None, formulas, **kwargs) -> list:
    """Model-check several formulas against one shared graph."""
    graph = kwargs.pop("graph", None) or build_graph(sys, kwargs.pop("node_budget", 100_000))
    return [model_check(sys, valuation, f, graph=graph, **kwargs) for f in formulas]

