"""Direct evaluation of formulas on histories.

Each subformula is evaluated to its whole truth sequence along the history.
On a lasso with stem length ``s`` and cycle length ``c`` every sequence is
ultimately periodic with period ``c``; a sequence is stored as its values on
``0 .. pre + c - 1`` where ``pre`` is a pre-period that grows by one for each
enclosing previous-operator and by ``c`` for each past-eventually.  Prefix
histories are evaluated three-valued (``None`` = undetermined).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graph import FINITE, LASSO, PREFIX, History
from ..system import MemorySystem
from . import ast as A
from .eliminate import UnboundVariable


@dataclass
class LogicModel:
    system: MemorySystem
    valuation: dict = field(default_factory=dict)  # state -> set of propositions
    assignment: dict = field(default_factory=dict)  # variable -> agent index
    strict: bool = False


@dataclass
class Verdict:
    holds: bool | None
    counterexample: History | None = None
    position: int | None = None

    @property
    def undetermined(self) -> bool:
        return self.holds is None


class _Seq:
    """Truth values on positions ``0 .. pre + period - 1``, periodic afterwards."""

    __slots__ = ("vals", "pre", "period")

    def __init__(self, vals, pre, period):
        self.vals = vals
        self.pre = pre
        self.period = period

    def __getitem__(self, p):
        if p < len(self.vals):
            return self.vals[p]
        if not self.period:
            raise IndexError(p)
        return self.vals[self.pre + (p - self.pre) % self.period]


def _kleene_or(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _kleene_not(a):
    return None if a is None else not a


def _threshold(op, k, trues, unknown):
    lo = A.compare(trues, op, k)
    if not unknown:
        return lo
    outcomes = {A.compare(trues + u, op, k) for u in range(unknown + 1)}
    return outcomes.pop() if len(outcomes) == 1 else None


class _Evaluator:
    def __init__(self, history: History, model: LogicModel):
        self.h = history
        self.model = model
        self.sys = model.system
        if history.kind == LASSO:
            self.stem = history.lasso_start
            self.period = len(history.configs) - history.lasso_start
        else:
            self.stem = len(history.configs)
            self.period = 0
        self.three_valued = history.kind == PREFIX
        self.memo: dict = {}

    def agent(self, t, env):
        if isinstance(t, A.Agent):
            return t.index
        if isinstance(t, A.Var):
            if t.name in env:
                return env[t.name]
            raise UnboundVariable(f"unbound variable {t.name!r}")
        raise TypeError(f"unbound term {t!r}; bind the formula first")

    def length(self, pre):
        return pre + self.period if self.period else self.stem

    def atom(self, test):
        n = self.length(self.stem)
        return _Seq([test(self.h.configs[self.h.position(p)]) for p in range(n)], self.stem, self.period)

    def const(self, value):
        return _Seq([value] * self.length(self.stem), self.stem, self.period)

    def seq(self, f, env) -> _Seq:
        relevant = tuple(sorted((v, env[v]) for v in A.free_vars(f) if v in env))
        key = (f, relevant)
        out = self.memo.get(key)
        if out is None:
            out = self.memo[key] = self._seq(f, env)
        return out

    def _seq(self, f, env) -> _Seq:
        sys = self.sys
        if isinstance(f, A.Const):
            return self.const(f.value)
        if isinstance(f, A.Eq):
            return self.const(self.agent(f.left, env) == self.agent(f.right, env))
        if isinstance(f, A.In):
            return self.const(self.agent(f.term, env) in sys.neighbourhood(f.neighbourhood).members)
        if isinstance(f, A.Sig):
            i = self.agent(f.term, env)
            return self.atom(lambda c: sys.signal_of[c[i]] == f.signal)
        if isinstance(f, A.Prop):
            i = self.agent(f.term, env)
            val = self.model.valuation
            if self.model.strict and not any(f.prop in ps for ps in val.values()):
                raise KeyError(f"unknown proposition {f.prop!r}")
            return self.atom(lambda c: f.prop in val.get(c[i], ()))
        if isinstance(f, (A.At, A.Emergence)):
            raise TypeError("formula must be bound to the system before evaluation")
        if isinstance(f, A.Not):
            a = self.seq(f.arg, env)
            return _Seq([_kleene_not(v) for v in a.vals], a.pre, self.period)
        if isinstance(f, A.Or):
            a, b = self.seq(f.left, env), self.seq(f.right, env)
            pre = max(a.pre, b.pre)
            return _Seq([_kleene_or(a[p], b[p]) for p in range(self.length(pre))], pre, self.period)
        if isinstance(f, (A.Count, A.Threshold)):
            if isinstance(f, A.Count):
                parts = [self.seq(f.body, {**env, f.var: j}) for j in range(sys.n_agents)]
            else:
                parts = [self.seq(a, env) for a in f.args]
            pre = max((s.pre for s in parts), default=self.stem)
            vals = []
            for p in range(self.length(pre)):
                col = [s[p] for s in parts]
                vals.append(_threshold(f.op, f.k, col.count(True), col.count(None)))
            return _Seq(vals, pre, self.period)
        if isinstance(f, A.Prev):
            a = self.seq(f.arg, env)
            pre = a.pre + 1 if self.period else a.pre
            return _Seq([p > 0 and a[p - 1] for p in range(self.length(pre))], pre, self.period)
        if isinstance(f, A.Once):
            a = self.seq(f.arg, env)
            pre = a.pre + self.period if self.period else a.pre
            vals = []
            acc = False
            for p in range(self.length(pre)):
                acc = _kleene_or(acc, a[p])
                vals.append(acc)
            return _Seq(vals, pre, self.period)
        if isinstance(f, A.Next):
            a = self.seq(f.arg, env)
            n = self.length(a.pre)
            if self.period:
                return _Seq([a[p + 1] for p in range(n)], a.pre, self.period)
            last = None if self.three_valued else False
            return _Seq([a[p + 1] if p + 1 < n else last for p in range(n)], a.pre, 0)
        if isinstance(f, A.Eventually):
            a = self.seq(f.arg, env)
            n = self.length(a.pre)
            vals = [None] * n
            if self.period:
                # from the pre-period on, the future contains a full period
                tail = any(a[p] for p in range(a.pre, a.pre + self.period))
                for p in range(a.pre, n):
                    vals[p] = tail
                acc = tail
                start = a.pre - 1
            else:
                acc = None if self.three_valued else False
                start = n - 1
            for p in range(start, -1, -1):
                acc = _kleene_or(a[p], acc)
                vals[p] = acc
            return _Seq(vals, a.pre, self.period)
        raise TypeError(f"cannot evaluate {f!r}")


def truth_sequence(history: History, f: A.Formula, model: LogicModel) -> _Seq:
    return _Evaluator(history, model).seq(f, dict(model.assignment))


def eval_at(history: History, k: int, f: A.Formula, model: LogicModel) -> Verdict:
    """Truth of ``f`` at instant ``k`` of ``history``.

    ``f`` must be bound to the model's system.  Lassos accept any ``k >= 0``;
    finite and prefix histories only their stored positions.  Only prefix
    histories can give an undetermined verdict.
    """
    if k < 0 or (history.kind in (FINITE, PREFIX) and k >= len(history.configs)):
        raise IndexError(f"position {k} out of range for a {history.kind} history "
                         f"of length {len(history.configs)}")
    holds = truth_sequence(history, f, model)[k]
    if holds is False:
        return Verdict(False, history, k)
    return Verdict(holds)
