"""Size-parameterised system families and the predicates they compute.

A family fixes states, signals and rules; instantiating it at population
size ``n`` produces a size-based memory system.  Each neighbourhood class
is either ``"all"`` (one neighbourhood containing every agent) or an integer
``k`` (every ``k``-subset of agents, skipped when ``k > n``).  A rule
applies to every neighbourhood of its class, once for each guard
distribution satisfying its ``when`` condition, a Presburger formula over
the guard coordinates ``x1 .. xd`` (one per signal, in signal order).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from ..emergence import check_emergence
from ..graph import BudgetExceeded
from ..system import MemorySystem, MemorySystemError, TransitionEntry, is_agent_symmetric
from .presburger import eval_presburger, parse_presburger

FAMILY_SCHEMA = {
    "type": "object",
    "required": ["states", "signals", "signal_of", "input", "neighbourhoods", "rules"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "states": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "signals": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "signal_of": {"type": "object", "additionalProperties": {"type": "string"}},
        "input": {"type": "object", "additionalProperties": {"type": "string"}},
        "neighbourhoods": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "size"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "size": {"oneOf": [{"const": "all"}, {"type": "integer", "minimum": 1}]},
                },
            },
        },
        "rules": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "neighbourhood", "when", "rule"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "neighbourhood": {"type": "string"},
                    "when": {"type": "string"},
                    "rule": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "string"},
                                  "minItems": 3, "maxItems": 3},
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class FamilyRule:
    id: str
    neighbourhood: str  # class name
    when: object  # Presburger formula over x1..xd
    rule: tuple


@dataclass(frozen=True)
class SystemFamily:
    name: str
    states: tuple
    signals: tuple
    signal_of: dict
    input: dict  # signal -> state an agent starts in when its input is that signal
    classes: tuple  # (name, size) with size an int or "all"
    rules: tuple

    def __hash__(self) -> int:
        return hash((self.name, self.states, self.signals, self.classes, self.rules))

    @property
    def dimension(self) -> int:
        return len(self.signals)

    def neighbourhoods(self, n: int) -> dict:
        """Class name -> list of (neighbourhood name, member names) at size ``n``."""
        agents = [str(i) for i in range(1, n + 1)]
        out = {}
        seen = {}
        for cname, size in self.classes:
            k = n if size == "all" else size
            if k > n:
                out[cname] = []
                continue
            items = []
            for combo in itertools.combinations(agents, k):
                nb = cname if size == "all" else f"{cname}{'_'.join(combo)}"
                key = frozenset(combo)
                if key in seen:
                    raise MemorySystemError(
                        f"neighbourhood classes {seen[key]!r} and {cname!r} coincide at n={n}")
                seen[key] = cname
                items.append((nb, list(combo)))
            out[cname] = items
        return out

    def instantiate(self, n: int, y=None) -> MemorySystem:
        """The member of size ``n`` started from input distribution ``y``.

        The first ``y[0]`` agents receive the input state of the first
        signal, the next ``y[1]`` that of the second, and so on.
        """
        if n < 1:
            raise ValueError("population size must be at least 1")
        y = tuple(y) if y is not None else (n,) + (0,) * (self.dimension - 1)
        if len(y) != self.dimension or sum(y) != n or min(y) < 0:
            raise ValueError(f"distribution {y} does not split {n} agents over {self.dimension} signals")
        classes = self.neighbourhoods(n)
        nbs = {nb: members for items in classes.values() for nb, members in items}
        entries = []
        for r in self.rules:
            for nb, members in classes[r.neighbourhood]:
                for guard in compositions(len(members), self.dimension):
                    verdict = eval_presburger(r.when, guard)
                    if verdict is None:
                        raise MemorySystemError(f"rule {r.id!r}: condition undecided at {guard}")
                    if verdict:
                        gid = "-".join(map(str, guard))
                        entries.append(TransitionEntry(f"{r.id}.{nb}.{gid}", nb, guard, r.rule))
        initial = [self.input[s] for s, k in zip(self.signals, y) for _ in range(k)]
        return MemorySystem.build(self.states, self.signals, self.signal_of, n, nbs, entries, initial)


def compositions(total: int, parts: int):
    """Vectors of ``parts`` naturals summing to ``total``, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def family_from_dict(doc: dict) -> SystemFamily:
    try:
        jsonschema.validate(doc, FAMILY_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise MemorySystemError(f"family schema: {exc.message}") from None
    classes = tuple((c["name"], c["size"]) for c in doc["neighbourhoods"])
    names = {c for c, _ in classes}
    rules = []
    for r in doc["rules"]:
        if r["neighbourhood"] not in names:
            raise MemorySystemError(f"rule {r['id']!r}: unknown neighbourhood class")
        rules.append(FamilyRule(r["id"], r["neighbourhood"], parse_presburger(r["when"]),
                                tuple(tuple(t) for t in r["rule"])))
    fam = SystemFamily(doc.get("name", "family"), tuple(doc["states"]), tuple(doc["signals"]),
                       dict(doc["signal_of"]), dict(doc["input"]), classes, tuple(rules))
    missing = set(fam.signals) - fam.input.keys()
    if missing:
        raise MemorySystemError(f"no input state for signals {sorted(missing)}")
    return fam


def load_family(path) -> SystemFamily:
    return family_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# -- predicate tables -----------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    n: int
    y: tuple
    verdict: str | None  # the computed signal, or None for bottom
    reason: str | None = None  # "no-emergence", "ambiguous" or "truncated" when bottom


def _cell(args) -> TableRow:
    fam, n, y, node_budget, fairness = args
    sys = fam.instantiate(n, y)
    if not is_agent_symmetric(sys):
        raise MemorySystemError(f"family member n={n} is not agent-symmetric")
    try:
        verdict = check_emergence(sys, fairness, node_budget)
    except BudgetExceeded:
        return TableRow(n, y, None, "truncated")
    if not verdict.supports:
        return TableRow(n, y, None, "no-emergence")
    if verdict.signal is None:
        return TableRow(n, y, None, "ambiguous")
    return TableRow(n, y, verdict.signal)


def computed_predicate_table(fam: SystemFamily, n_max: int, node_budget: int = 100_000,
                             fairness: str = "entry", workers: int = 1) -> list:
    """One row per population size ``1 .. n_max`` and input distribution."""
    cells = [(fam, n, y, node_budget, fairness)
             for n in range(1, n_max + 1) for y in compositions(n, fam.dimension)]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


@dataclass(frozen=True)
class SpecReport:
    checked: int
    mismatches: tuple  # (row, expected signal or None)
    inconclusive: tuple  # (row, cause)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.inconclusive

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "mismatches": [{"n": r.n, "y": list(r.y), "expected": e, "computed": r.verdict,
                            "reason": r.reason} for r, e in self.mismatches],
            "inconclusive": [{"n": r.n, "y": list(r.y), "cause": c} for r, c in self.inconclusive],
        }


def check_semilinear_spec(table, spec: dict, quantifier_bound: int = 64) -> SpecReport:
    """Compare table rows with ``spec``: signal -> Presburger formula over ``x1 .. xd``.

    A row's expected output is the one signal whose formula holds at ``y``,
    or bottom when none or several hold.
    """
    mismatches = []
    inconclusive = []
    for row in table:
        if row.reason == "truncated":
            inconclusive.append((row, "truncated"))
            continue
        holding = []
        unknown = False
        for sig in sorted(spec):
            v = eval_presburger(spec[sig], row.y, quantifier_bound)
            if v is None:
                unknown = True
            elif v:
                holding.append(sig)
        if unknown:
            inconclusive.append((row, "quantifier-bound"))
            continue
        expected = holding[0] if len(holding) == 1 else None
        if expected != row.verdict:
            mismatches.append((row, expected))
    return SpecReport(len(table), tuple(mismatches), tuple(inconclusive))


BOTTOM = "⊥"


def table_to_csv(table, signals) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", *signals, "verdict", "reason"])
    for row in table:
        w.writerow([row.n, *row.y, row.verdict or BOTTOM, row.reason or ""])
    return buf.getvalue()
