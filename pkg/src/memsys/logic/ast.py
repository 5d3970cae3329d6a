"""Formula syntax trees.

Core connectives are those of the logic: equality and membership of terms,
``p@t`` and ``gamma@t`` atoms, negation, disjunction, previous, next,
past-eventually, eventually and the counting quantifier.  Conjunction,
implication, the universal/existential quantifiers and the box operators
are built from them by the helper constructors below.  ``Threshold`` only
appears after counting elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")


def compare(a: int, op: str, b: int) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(f"unknown comparison {op!r}")


# -- terms --------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class AgentName:
    """An agent written by external name, resolved when binding to a system."""

    name: str


@dataclass(frozen=True)
class Agent:
    index: int


# -- formulas -----------------------------------------------------------------


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Eq(Formula):
    left: object
    right: object


@dataclass(frozen=True)
class In(Formula):
    term: object
    neighbourhood: str


@dataclass(frozen=True)
class At(Formula):
    """``name@term`` before it is known whether name is a signal or a proposition."""

    name: str
    term: object


@dataclass(frozen=True)
class Sig(Formula):
    signal: str
    term: object


@dataclass(frozen=True)
class Prop(Formula):
    prop: str
    term: object


@dataclass(frozen=True)
class Emergence(Formula):
    """Disjunction of stable(gamma) over all signals; expanded when bound."""


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Prev(Formula):
    arg: Formula


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Once(Formula):
    """Past-eventually: the argument held at some instant up to now."""

    arg: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True)
class Count(Formula):
    var: str
    body: Formula
    op: str
    k: int


@dataclass(frozen=True)
class Threshold(Formula):
    """``|{i : args[i] holds}| op k`` over ground instances."""

    op: str
    k: int
    args: tuple


TEMPORAL = (Prev, Next, Once, Eventually)
UNARY = (Not,) + TEMPORAL


# -- derived forms ------------------------------------------------------------


def neg(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.arg
    if isinstance(f, Const):
        return Const(not f.value)
    return Not(f)


def disj(a: Formula, b: Formula) -> Formula:
    return Or(a, b)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Or(neg(a), neg(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Or(neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(implies(a, b), implies(b, a))


def always(f: Formula) -> Formula:
    return neg(Eventually(neg(f)))


def historically(f: Formula) -> Formula:
    return neg(Once(neg(f)))


def exists(var: str, f: Formula) -> Formula:
    return Count(var, f, ">", 0)


def forall(var: str, f: Formula) -> Formula:
    return neg(Count(var, neg(f), ">", 0))


def stable(signal: str, var: str = "x") -> Formula:
    return always(forall(var, At(signal, Var(var))))


def collective_memory(signal: str, var: str = "x") -> Formula:
    return Eventually(stable(signal, var))


# -- traversal ----------------------------------------------------------------


def children(f: Formula) -> tuple:
    if isinstance(f, UNARY):
        return (f.arg,)
    if isinstance(f, Or):
        return (f.left, f.right)
    if isinstance(f, Count):
        return (f.body,)
    if isinstance(f, Threshold):
        return f.args
    return ()


def rebuild(f: Formula, kids) -> Formula:
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, Or):
        return Or(kids[0], kids[1])
    if isinstance(f, Count):
        return Count(f.var, kids[0], f.op, f.k)
    if isinstance(f, Threshold):
        return Threshold(f.op, f.k, tuple(kids))
    return f


def _term_vars(t) -> set:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Eq):
        return frozenset(_term_vars(f.left) | _term_vars(f.right))
    if isinstance(f, (In, At, Sig, Prop)):
        return frozenset(_term_vars(f.term))
    if isinstance(f, Count):
        return free_vars(f.body) - {f.var}
    out: frozenset = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def temporal_depth(f: Formula) -> int:
    d = max((temporal_depth(c) for c in children(f)), default=0)
    return d + 1 if isinstance(f, TEMPORAL) else d


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def subformulas(f: Formula) -> list:
    """Distinct subformulas, children before parents."""
    seen: dict = {}

    def walk(g):
        if g in seen:
            return
        for c in children(g):
            walk(c)
        seen[g] = None

    walk(f)
    return list(seen)


# -- printing -----------------------------------------------------------------


def _term_text(t) -> str:
    if isinstance(t, Agent):
        return f"${t.index}"
    return t.name


def to_text(f: Formula) -> str:
    """Concrete syntax for ``f``; parsing it back gives ``f`` again."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Eq):
        return f"{_term_text(f.left)} = {_term_text(f.right)}"
    if isinstance(f, In):
        return f"{_term_text(f.term)} in {f.neighbourhood}"
    if isinstance(f, (At, Sig, Prop)):
        name = getattr(f, "name", None) or getattr(f, "signal", None) or f.prop
        return f"{name}@{_term_text(f.term)}"
    if isinstance(f, Emergence):
        return "emergence"
    if isinstance(f, Not):
        return f"~{_wrap(f.arg)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left)} | {_wrap(f.right)}"
    prefix = {Prev: "Y ", Next: "X ", Once: "P- ", Eventually: "<> "}
    if type(f) in prefix:
        return prefix[type(f)] + _wrap(f.arg)
    if isinstance(f, Count):
        return f"#{f.var}. {_wrap(f.body)} {f.op} {f.k}"
    if isinstance(f, Threshold):
        return f"#[{f.op} {f.k}](" + ", ".join(to_text(a) for a in f.args) + ")"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula) -> str:
    text = to_text(f)
    if isinstance(f, (Const, At, Sig, Prop, Emergence, Not)) or isinstance(f, TEMPORAL):
        return text
    return f"({text})"
