"""Binding formulas to a system and eliminating counting quantifiers."""

from __future__ import annotations

import itertools

from ..system import MemorySystem
from . import ast as A


class BindError(ValueError):
    pass


class UnboundVariable(BindError):
    pass


class UnknownName(BindError):
    pass


def _fresh(taken: set, base: str = "v") -> str:
    for i in itertools.count():
        name = f"_{base}{i}"
        if name not in taken:
            return name


def _all_vars(f) -> set:
    out = set()
    for g in A.subformulas(f):
        for t in _terms(g):
            if isinstance(t, A.Var):
                out.add(t.name)
        if isinstance(g, A.Count):
            out.add(g.var)
    return out


def _terms(f) -> tuple:
    if isinstance(f, A.Eq):
        return (f.left, f.right)
    if isinstance(f, (A.In, A.At, A.Sig, A.Prop)):
        return (f.term,)
    return ()


def bind(f: A.Formula, sys: MemorySystem, assignment: dict | None = None,
         valuation: dict | None = None, strict: bool = False) -> A.Formula:
    """Resolve names in ``f`` against ``sys``.

    Free identifiers in term position resolve, in order, through
    ``assignment`` (variable -> external agent name), then as agent names.
    ``name@I`` with ``I`` a neighbourhood expands to "every agent of I
    signals name".  ``name@t`` becomes a signal atom when ``name`` is a
    signal and a proposition atom otherwise; with ``strict`` set, a
    proposition no state carries is an error.
    """
    assignment = {k: str(v) for k, v in (assignment or {}).items()}
    for var, agent in assignment.items():
        if agent not in sys.agent_index:
            raise UnknownName(f"assignment {var}={agent}: unknown agent")
    known_props = set()
    for props in (valuation or {}).values():
        known_props.update(props)
    taken = _all_vars(f)
    n = sys.n_agents

    def term(t, scope):
        if isinstance(t, A.Var):
            if t.name in scope:
                return t
            if t.name in assignment:
                return A.Agent(sys.agent_index[assignment[t.name]])
            if t.name in sys.agent_index:
                return A.Agent(sys.agent_index[t.name])
            raise UnboundVariable(f"unbound variable {t.name!r}")
        if isinstance(t, A.AgentName):
            if t.name not in sys.agent_index:
                raise UnknownName(f"unknown agent {t.name!r}")
            return A.Agent(sys.agent_index[t.name])
        if isinstance(t, A.Agent):
            if not 0 <= t.index < n:
                raise UnknownName(f"agent index {t.index} out of range")
            return t
        raise TypeError(f"not a term: {t!r}")

    def go(g, scope):
        if isinstance(g, A.Const):
            return g
        if isinstance(g, A.Eq):
            return A.Eq(term(g.left, scope), term(g.right, scope))
        if isinstance(g, A.In):
            if g.neighbourhood not in sys.neighbourhood_map:
                raise UnknownName(f"unknown neighbourhood {g.neighbourhood!r}")
            return A.In(term(g.term, scope), g.neighbourhood)
        if isinstance(g, A.At):
            t = g.term
            if (isinstance(t, A.Var) and t.name not in scope and t.name not in assignment
                    and t.name not in sys.agent_index and t.name in sys.neighbourhood_map):
                x = _fresh(taken | scope)
                taken.add(x)
                expanded = A.forall(x, A.implies(A.In(A.Var(x), t.name), A.At(g.name, A.Var(x))))
                return go(expanded, scope)
            bt = term(t, scope)
            if g.name in sys.signal_index:
                return A.Sig(g.name, bt)
            if strict and g.name not in known_props:
                raise UnknownName(f"unknown proposition {g.name!r}")
            return A.Prop(g.name, bt)
        if isinstance(g, A.Sig):
            if g.signal not in sys.signal_index:
                raise UnknownName(f"unknown signal {g.signal!r}")
            return A.Sig(g.signal, term(g.term, scope))
        if isinstance(g, A.Prop):
            return A.Prop(g.prop, term(g.term, scope))
        if isinstance(g, A.Emergence):
            x = _fresh(taken | scope)
            taken.add(x)
            out = None
            for s in sys.signals:
                st = A.always(A.forall(x, A.Sig(s, A.Var(x))))
                out = st if out is None else A.Or(out, st)
            return go(out, scope)
        if isinstance(g, A.Count):
            if g.op not in A.CMP_OPS:
                raise BindError(f"unknown comparison {g.op!r}")
            if not 0 <= g.k <= n:
                raise BindError(f"counting threshold {g.k} outside 0..{n}")
            return A.Count(g.var, go(g.body, scope | {g.var}), g.op, g.k)
        if isinstance(g, A.Threshold):
            return A.Threshold(g.op, g.k, tuple(go(c, scope) for c in g.args))
        return A.rebuild(g, [go(c, scope) for c in A.children(g)])

    return go(f, frozenset())


def substitute(f: A.Formula, var: str, value) -> A.Formula:
    """Replace free occurrences of ``var`` by the term ``value``."""

    def term(t):
        return value if isinstance(t, A.Var) and t.name == var else t

    if isinstance(f, A.Eq):
        return A.Eq(term(f.left), term(f.right))
    if isinstance(f, A.In):
        return A.In(term(f.term), f.neighbourhood)
    if isinstance(f, A.At):
        return A.At(f.name, term(f.term))
    if isinstance(f, A.Sig):
        return A.Sig(f.signal, term(f.term))
    if isinstance(f, A.Prop):
        return A.Prop(f.prop, term(f.term))
    if isinstance(f, A.Count) and f.var == var:
        return f
    return A.rebuild(f, [substitute(c, var, value) for c in A.children(f)])


_FLIP = {"=": "=", "!=": "!=", "<": ">", ">": "<", "<=": ">=", ">=": "<="}
_NEGATE = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


def simplify(f: A.Formula) -> A.Formula:
    """Constant folding and threshold normalisation (bottom-up, one pass)."""
    kids = [simplify(c) for c in A.children(f)]
    if isinstance(f, A.Not):
        a = kids[0]
        if isinstance(a, A.Const):
            return A.Const(not a.value)
        if isinstance(a, A.Not):
            return a.arg
        if isinstance(a, A.Threshold):
            return A.Threshold(_NEGATE[a.op], a.k, a.args)
        return A.Not(a)
    if isinstance(f, A.Or):
        a, b = kids
        if isinstance(a, A.Const):
            return A.TRUE if a.value else b
        if isinstance(b, A.Const):
            return A.TRUE if b.value else a
        return A.Or(a, b)
    if isinstance(f, A.Threshold):
        trues = sum(1 for a in kids if a == A.TRUE)
        rest = tuple(a for a in kids if not isinstance(a, A.Const))
        op, k = f.op, f.k - trues
        if not rest:
            return A.Const(A.compare(0, op, k))
        if all(isinstance(a, A.Not) for a in rest):
            # |{not a}| op k  <=>  |{a}| flip(op) n - k
            op, k, rest = _FLIP[op], len(rest) - k, tuple(a.arg for a in rest)
        return A.Threshold(op, k, rest)
    if isinstance(f, A.TEMPORAL):
        a = kids[0]
        if isinstance(a, A.Const):
            if isinstance(f, (A.Once, A.Eventually)):
                return a
            if not a.value:
                return A.FALSE
            # Y true / X true still depend on the instant
        return type(f)(a)
    if isinstance(f, A.Eq) and isinstance(f.left, A.Agent) and isinstance(f.right, A.Agent):
        return A.Const(f.left == f.right)
    return A.rebuild(f, kids) if kids else f


def eliminate_counting(f: A.Formula, sys: MemorySystem) -> A.Formula:
    """Variable-free equivalent of a bound formula.

    Each counting node becomes a threshold combinator over its ``|N|``
    instances; membership and equality between agents fold to constants.
    """

    def go(g):
        if isinstance(g, A.Count):
            insts = tuple(go(substitute(g.body, g.var, A.Agent(j))) for j in range(sys.n_agents))
            return A.Threshold(g.op, g.k, insts)
        if isinstance(g, A.In) and isinstance(g.term, A.Agent):
            return A.Const(g.term.index in sys.neighbourhood(g.neighbourhood).members)
        if isinstance(g, A.Eq) and isinstance(g.left, A.Agent) and isinstance(g.right, A.Agent):
            return A.Const(g.left == g.right)
        if A.free_vars(g) and not A.children(g):
            raise UnboundVariable(f"free variable in {A.to_text(g)}")
        return A.rebuild(g, [go(c) for c in A.children(g)])

    out = simplify(go(f))
    if A.free_vars(out):
        raise UnboundVariable(f"free variables {sorted(A.free_vars(out))}")
    return out
