"""Presburger arithmetic: syntax, parsing and bounded evaluation.

Concrete syntax::

    formula ::= disj ('->' formula)?
    disj    ::= conj ('|' conj)*
    conj    ::= unary ('&' unary)*
    unary   ::= '~' unary | ('E' | 'A') IDENT '.' formula | '(' formula ')'
              | 'true' | 'false' | term REL term
    term    ::= factor ('+' factor)*
    factor  ::= INT '*' factor | INT | IDENT | '(' term ')'
    REL     ::= '<' | '>' | '<=' | '>=' | '=' | '!='

``=`` abbreviates ``<=`` and ``>=`` together; ``!=`` is its negation.
Free variables ``x1 .. xd`` name the coordinates of a point.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

# -- syntax -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Scale:
    factor: int
    term: object


@dataclass(frozen=True)
class Cmp:
    op: str  # one of < > <= >=
    left: object
    right: object


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class PNot:
    arg: object


@dataclass(frozen=True)
class PAnd:
    left: object
    right: object


@dataclass(frozen=True)
class POr:
    left: object
    right: object


@dataclass(frozen=True)
class Quant:
    kind: str  # "E" or "A"
    var: str
    body: object


def equal(a, b):
    return PAnd(Cmp("<=", a, b), Cmp(">=", a, b))


def free_variables(f) -> frozenset:
    if isinstance(f, Name):
        return frozenset([f.name])
    if isinstance(f, (Num, Bool)):
        return frozenset()
    if isinstance(f, Scale):
        return free_variables(f.term)
    if isinstance(f, PNot):
        return free_variables(f.arg)
    if isinstance(f, Quant):
        return free_variables(f.body) - {f.var}
    return free_variables(f.left) | free_variables(f.right)


def is_quantifier_free(f) -> bool:
    if isinstance(f, Quant):
        return False
    if isinstance(f, PNot):
        return is_quantifier_free(f.arg)
    if isinstance(f, (PAnd, POr)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


def to_text(f) -> str:
    if isinstance(f, Num):
        return str(f.value)
    if isinstance(f, Name):
        return f.name
    if isinstance(f, Add):
        return f"{to_text(f.left)} + {to_text(f.right)}"
    if isinstance(f, Scale):
        inner = to_text(f.term)
        return f"{f.factor}*({inner})" if isinstance(f.term, Add) else f"{f.factor}*{inner}"
    if isinstance(f, Cmp):
        return f"{to_text(f.left)} {f.op} {to_text(f.right)}"
    if isinstance(f, Bool):
        return "true" if f.value else "false"
    if isinstance(f, PNot):
        return f"~({to_text(f.arg)})"
    if isinstance(f, PAnd):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, POr):
        return f"({to_text(f.left)} | {to_text(f.right)})"
    return f"{f.kind} {f.var}. ({to_text(f.body)})"


# -- parsing ------------------------------------------------------------------


class PresburgerSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op><=|>=|!=|->|[<>=~&|()+*.]))")


def _tokens(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PresburgerSyntaxError("unexpected character", text, pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def at(self, *values) -> bool:
        kind, value, _ = self.peek()
        return kind in ("op", "ident") and value in values

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise PresburgerSyntaxError(message, self.text, self.peek()[2])

    def expect(self, value):
        if not self.at(value):
            self.fail(f"expected {value!r}")
        self.take()

    def formula(self):
        left = self.disj()
        if self.at("->"):
            self.take()
            return POr(PNot(left), self.formula())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.take()
            left = POr(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = PAnd(left, self.unary())
        return left

    def unary(self):
        if self.at("~"):
            self.take()
            return PNot(self.unary())
        kind, value, _ = self.peek()
        if kind == "ident" and value in ("E", "A") and self.toks[self.i + 1][0] == "ident":
            self.take()
            var = self.take()[1]
            self.expect(".")
            return Quant(value, var, self.formula())
        if self.at("true", "false"):
            self.take()
            return Bool(value == "true")
        if self.at("("):
            # either a parenthesised formula or a term starting a comparison
            save = self.i
            try:
                self.take()
                f = self.formula()
                self.expect(")")
                if not self.at("<", ">", "<=", ">=", "=", "!=", "+"):
                    return f
            except PresburgerSyntaxError:
                pass
            self.i = save
        return self.comparison()

    def comparison(self):
        left = self.term()
        kind, op, _ = self.peek()
        if op not in ("<", ">", "<=", ">=", "=", "!=") or kind != "op":
            self.fail("expected comparison")
        self.take()
        right = self.term()
        if op == "=":
            return equal(left, right)
        if op == "!=":
            return PNot(equal(left, right))
        return Cmp(op, left, right)

    def term(self):
        left = self.factor()
        while self.at("+"):
            self.take()
            left = Add(left, self.factor())
        return left

    def factor(self):
        kind, value, _ = self.peek()
        if kind == "int":
            self.take()
            if self.at("*"):
                self.take()
                return Scale(int(value), self.factor())
            return Num(int(value))
        if kind == "ident" and value not in ("true", "false"):
            self.take()
            return Name(value)
        if self.at("("):
            self.take()
            t = self.term()
            self.expect(")")
            return t
        self.fail("expected term")


def parse_presburger(text: str):
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail("unexpected input")
    return f


def read_spec_file(text: str) -> dict:
    """``signal: formula`` lines; ``#`` starts a comment line."""
    out = {}
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise PresburgerSyntaxError(f"line {no}: expected 'signal: formula'", line, 0)
        sig, body = line.split(":", 1)
        sig = sig.strip()
        if sig in out:
            raise PresburgerSyntaxError(f"line {no}: duplicate signal {sig!r}", line, 0)
        out[sig] = parse_presburger(body)
    return out


# -- evaluation ---------------------------------------------------------------


class DimensionError(ValueError):
    pass


def _term(t, env) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Name):
        return env[t.name]
    if isinstance(t, Add):
        return _term(t.left, env) + _term(t.right, env)
    return t.factor * _term(t.term, env)


def _and(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _eval(f, env, bound):
    if isinstance(f, Bool):
        return f.value
    if isinstance(f, Cmp):
        a, b = _term(f.left, env), _term(f.right, env)
        return {"<": a < b, ">": a > b, "<=": a <= b, ">=": a >= b}[f.op]
    if isinstance(f, PNot):
        v = _eval(f.arg, env, bound)
        return None if v is None else not v
    if isinstance(f, PAnd):
        a = _eval(f.left, env, bound)
        return False if a is False else _and(a, _eval(f.right, env, bound))
    if isinstance(f, POr):
        a = _eval(f.left, env, bound)
        return True if a is True else _or(a, _eval(f.right, env, bound))
    if isinstance(f, Quant):
        decisive = f.kind == "E"  # a witness decides E, a counterexample decides A
        for w in range(bound + 1):
            v = _eval(f.body, {**env, f.var: w}, bound)
            if v is decisive:
                return decisive
        # no decisive instance within the bound: nothing is proven
        return None
    raise TypeError(f"not a Presburger formula: {f!r}")


def point_env(point) -> dict:
    if isinstance(point, dict):
        return dict(point)
    return {f"x{i}": int(v) for i, v in enumerate(point, start=1)}


def eval_presburger(f, point, quantifier_bound: int = 64):
    """Truth of ``f`` at ``point`` over the naturals: True, False or None (unknown).

    Quantifiers range over ``0 .. quantifier_bound``.  Finding a witness
    proves an existential and finding a counterexample refutes a universal;
    any other outcome of a quantifier is unknown, since larger values were
    not inspected.
    """
    env = point_env(point)
    if any(v < 0 for v in env.values()):
        raise DimensionError("points range over the naturals")
    missing = free_variables(f) - env.keys()
    if missing:
        raise DimensionError(f"no value for {sorted(missing)} in a point of dimension {len(env)}")
    return _eval(f, env, quantifier_bound)


def satisfying_points(f, dimension: int, limit: int, quantifier_bound: int = 64):
    """Points of ``[0, limit]^dimension`` where ``f`` is true, in lexicographic order."""
    for p in itertools.product(range(limit + 1), repeat=dimension):
        if eval_presburger(f, p, quantifier_bound) is True:
            yield p
