"""Parikh images and Parikh automata."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..emergence import fair_terminal_classes
from ..graph import build_graph
from ..system import MemorySystem
from .presburger import eval_presburger, free_variables


class AlphabetError(ValueError):
    pass


def parikh_image(word, alphabet=None) -> tuple:
    """Letter counts over ``alphabet``, or the vector sum for ``(letter, vector)`` words.

    With an alphabet, letters are counted in alphabet order.  Without one
    every letter must be a pair whose second component is a vector.
    """
    word = list(word)
    if alphabet is not None:
        index = {a: i for i, a in enumerate(alphabet)}
        out = [0] * len(index)
        for a in word:
            if a not in index:
                raise AlphabetError(f"letter {a!r} not in the alphabet")
            out[index[a]] += 1
        return tuple(out)
    if not word:
        raise AlphabetError("the dimension of an empty extended word needs an alphabet")
    return _vector_sum(word, len(word[0][1]))


def _vector_sum(word, d: int) -> tuple:
    out = [0] * d
    for letter in word:
        try:
            _, vec = letter
        except (TypeError, ValueError):
            raise AlphabetError(f"letter {letter!r} carries no vector") from None
        if len(vec) != d:
            raise AlphabetError(f"letter {letter!r} has dimension {len(vec)}, expected {d}")
        for i, x in enumerate(vec):
            out[i] += x
    return tuple(out)


def projection(word) -> tuple:
    """Drop the vector component of each letter."""
    return tuple(a for a, _ in word)


@dataclass(frozen=True)
class ParikhAutomaton:
    """A finite automaton over ``(letter, vector)`` pairs with a Presburger constraint.

    ``transitions`` are ``(source, (letter, vector), target)`` triples and may be
    nondeterministic.  ``constraint`` is over ``x1 .. x{dimension}``; None
    stands for the constraint that always holds.
    """

    dimension: int
    states: tuple
    initial: object
    finals: frozenset
    transitions: tuple
    constraint: object = None
    info: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "transitions", tuple(
            (s, (a, tuple(v)), t) for s, (a, v), t in self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        known = set(self.states)
        for s, (_, v), t in self.transitions:
            if s not in known or t not in known:
                raise ValueError(f"transition {s!r} -> {t!r} uses an unknown state")
            if len(v) != self.dimension or any(x < 0 for x in v):
                raise ValueError(f"vector {v} outside N^{self.dimension}")
        if self.initial not in known or not self.finals <= known:
            raise ValueError("initial and final states must be states")
        if self.constraint is not None:
            allowed = {f"x{i}" for i in range(1, self.dimension + 1)}
            extra = free_variables(self.constraint) - allowed
            if extra:
                raise ValueError(f"constraint mentions {sorted(extra)}")

    @property
    def alphabet(self) -> list:
        return sorted({letter for _, letter, _ in self.transitions}, key=letter_key)

    def delta(self) -> dict:
        out: dict = {}
        for s, letter, t in self.transitions:
            out.setdefault((s, letter), []).append(t)
        return out


def letter_key(letter):
    a, v = letter
    return (str(a), tuple(v))


def _constraint(pa: ParikhAutomaton, vec, bound):
    if pa.constraint is None:
        return True
    return eval_presburger(pa.constraint, vec, bound)


def pa_accepts(pa: ParikhAutomaton, word, quantifier_bound: int = 64):
    """True, False, or None when the constraint is undecided within the bound."""
    delta = pa.delta()
    current = {pa.initial}
    for letter in word:
        a, v = letter
        letter = (a, tuple(v))
        if not any(letter == l for _, l, _ in pa.transitions):
            raise AlphabetError(f"letter {letter!r} not in the automaton's alphabet")
        current = {t for s in current for t in delta.get((s, letter), ())}
    if not current & pa.finals:
        return False
    return _constraint(pa, _vector_sum(word, pa.dimension), quantifier_bound)


@dataclass(frozen=True)
class NonemptinessReport:
    witness: tuple | None
    explored: int  # (state, vector) pairs expanded
    exhausted: bool  # no longer words could reach new (state, vector) pairs
    inconclusive: int = 0  # final pairs whose constraint evaluated to unknown

    @property
    def found(self) -> bool:
        return self.witness is not None


def pa_bounded_nonempty(pa: ParikhAutomaton, length_bound: int,
                        quantifier_bound: int = 64) -> NonemptinessReport:
    """Shortlex-least accepted word of length at most ``length_bound``.

    Breadth-first search over (state, accumulated vector).  Letters are
    tried in a fixed order, so the first accepting pair found carries the
    least witness.  Finding none is not a proof of emptiness unless the
    search is reported exhausted and no constraint was inconclusive.
    """
    by_source: dict = {}
    for s, letter, t in pa.transitions:
        by_source.setdefault(s, []).append((letter, t))
    for s in by_source:
        by_source[s].sort(key=lambda lt: (letter_key(lt[0]), str(lt[1])))
    start = (pa.initial, (0,) * pa.dimension)
    word_of = {start: ()}
    layer = [start]
    inconclusive = 0
    explored = 0
    for length in range(length_bound + 1):
        for state in layer:
            if state[0] in pa.finals:
                verdict = _constraint(pa, state[1], quantifier_bound)
                if verdict is True:
                    return NonemptinessReport(word_of[state], explored, False, inconclusive)
                if verdict is None:
                    inconclusive += 1
        if length == length_bound:
            break
        nxt = []
        for state in layer:
            explored += 1
            q, vec = state
            for letter, t in by_source.get(q, ()):
                st = (t, tuple(a + b for a, b in zip(vec, letter[1])))
                if st not in word_of:
                    word_of[st] = word_of[state] + (letter,)
                    nxt.append(st)
        layer = nxt
        if not layer:
            return NonemptinessReport(None, explored, True, inconclusive)
    return NonemptinessReport(None, explored, not layer, inconclusive)


def system_to_parikh(sys: MemorySystem, constraint=None, fairness: str = "entry",
                     node_budget: int = 100_000) -> ParikhAutomaton:
    """Parikh automaton reading the interactions of ``sys``.

    States are reachable configurations (graph node ids), letters pair an
    interaction ``(neighbourhood, entry)`` with its guard, a distribution
    over the signals.  Final states are the members of fair terminal classes
    with a stable signal.  ``constraint`` restricts the accumulated guard
    vector; by default every vector is accepted.
    """
    graph = build_graph(sys, node_budget)
    classes = fair_terminal_classes(graph, fairness)
    finals = frozenset(v for c in classes if c.stable_signal is not None for v in c.nodes)
    transitions = tuple(
        (s, ((sys.entry(e).neighbourhood, e), tuple(sys.entry(e).guard)), t)
        for s, e, t in graph.edges)
    info = {"configs": list(graph.configs), "signals": list(sys.signals),
            "stable_signal": {v: c.stable_signal for c in classes for v in c.nodes}}
    return ParikhAutomaton(len(sys.signals), tuple(range(len(graph))), graph.root, finals,
                           transitions, constraint, info)
