"""Concrete syntax for the temporal logic.

    formula  ::= impl ('<->' impl)?
    impl     ::= disj ('->' impl)?
    disj     ::= conj ('|' conj)*
    conj     ::= unary ('&' unary)*
    unary    ::= ('~' | 'X' | 'Y' | '<>' | '[]' | 'P-' | 'H-') unary
               | ('exists' | 'forall') IDENT '.'? formula
               | '#' IDENT '.' unary CMP INT
               | 'stable' '(' IDENT ')'
               | primary
    primary  ::= '(' formula ')' | 'true' | 'false' | 'emergence'
               | IDENT '@' term | term ('=' | '!=') term | term 'in' IDENT
    term     ::= IDENT | INT | '$' INT
    CMP      ::= '=' | '!=' | '<' | '<=' | '>' | '>='

``Y`` is the previous-instant operator, ``P-`` past-eventually and ``H-``
its dual.  Integer terms name agents; ``$i`` is an internal agent index.
Identifiers in term position are variables until bound to a system.
"""

from __future__ import annotations

import re

from . import ast as A


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


_UNICODE = {
    "¬": "~", "∨": "|", "∧": "&", "→": "->", "⊃": "->", "↔": "<->",
    "○": "X", "⊖": "Y", "◇": "<>", "□": "[]", "⟐": "P-", "⊟": "H-",
    "♯": "#", "∃": "exists", "∀": "forall", "∈": "in",
    "≤": "<=", "≥": ">=", "≠": "!=",
}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|<>|\[\]|P-|H-|!=|<=|>=|[~|&()#.@=<>,])
  | (?P<index>\$\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"X", "Y", "in", "exists", "forall", "true", "false", "stable", "emergence"}
_PREFIX = {"~": A.neg, "X": A.Next, "Y": A.Prev, "<>": A.Eventually, "[]": A.always,
           "P-": A.Once, "H-": A.historically}


def tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch in _UNICODE:
            kind = "op" if _UNICODE[ch] not in KEYWORDS else "kw"
            out.append((kind, _UNICODE[ch], pos))
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", text, pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "ident" and value in KEYWORDS:
            kind = "kw"
        if kind != "ws":
            out.append((kind, value, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def at(self, *values) -> bool:
        kind, value, _ = self.peek()
        return kind in ("op", "kw") and value in values

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str):
        raise FormulaSyntaxError(message, self.text, self.peek()[2])

    def expect(self, value: str):
        if not self.at(value):
            self.error(f"expected {value!r}, found {self.peek()[1] or 'end of input'!r}")
        return self.take()

    def ident(self) -> str:
        kind, value, _ = self.peek()
        if kind != "ident":
            self.error(f"expected identifier, found {value or 'end of input'!r}")
        self.take()
        return value

    def parse(self) -> A.Formula:
        f = self.formula()
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def formula(self):
        left = self.impl()
        if self.at("<->"):
            self.take()
            left = A.iff(left, self.impl())
        return left

    def impl(self):
        left = self.disj()
        if self.at("->"):
            self.take()
            return A.implies(left, self.impl())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.take()
            left = A.disj(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = A.conj(left, self.unary())
        return left

    def unary(self):
        kind, value, _ = self.peek()
        if kind in ("op", "kw") and value in _PREFIX:
            self.take()
            return _PREFIX[value](self.unary())
        if self.at("exists", "forall"):
            self.take()
            var = self.ident()
            if self.at("."):
                self.take()
            body = self.formula()
            return A.exists(var, body) if value == "exists" else A.forall(var, body)
        if self.at("#"):
            self.take()
            var = self.ident()
            self.expect(".")
            body = self.unary()
            kind, op, _ = self.peek()
            if op not in A.CMP_OPS:
                self.error("expected comparison after counting quantifier body")
            self.take()
            kind, k, _ = self.peek()
            if kind != "int":
                self.error("expected integer threshold")
            self.take()
            return A.Count(var, body, op, int(k))
        if self.at("stable"):
            self.take()
            self.expect("(")
            sig = self.ident()
            self.expect(")")
            return A.stable(sig)
        return self.primary()

    def primary(self):
        if self.at("("):
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("true"):
            self.take()
            return A.TRUE
        if self.at("false"):
            self.take()
            return A.FALSE
        if self.at("emergence"):
            self.take()
            return A.Emergence()
        kind, value, _ = self.peek()
        if kind == "ident" and self.peek(1)[1] == "@" and self.peek(1)[0] == "op":
            self.take()
            self.take()
            return A.At(value, self.term())
        left = self.term()
        if self.at("="):
            self.take()
            return A.Eq(left, self.term())
        if self.at("!="):
            self.take()
            return A.neg(A.Eq(left, self.term()))
        if self.at("in"):
            self.take()
            return A.In(left, self.ident())
        self.error("expected '=', '!=' or 'in' after term")

    def term(self):
        kind, value, _ = self.peek()
        if kind == "ident":
            self.take()
            return A.Var(value)
        if kind == "int":
            self.take()
            return A.AgentName(value)
        if kind == "index":
            self.take()
            return A.Agent(int(value[1:]))
        self.error(f"expected term, found {value or 'end of input'!r}")


def parse_formula(text: str) -> A.Formula:
    return _Parser(text).parse()


def read_formula_file(text: str) -> list:
    """``(line_number, source, formula)`` for each formula line; ``#`` starts a comment line."""
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        src = line.strip()
        if not src or _is_comment(src):
            continue
        out.append((no, src, parse_formula(src)))
    return out


def _is_comment(line: str) -> bool:
    # '#x.' opens a counting quantifier; any other leading '#' is a comment
    return line.startswith("#") and not re.match(r"#\s*[A-Za-z_][A-Za-z0-9_']*\s*\.", line)
