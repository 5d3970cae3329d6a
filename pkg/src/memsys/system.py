"""Memory systems: data model and single-step semantics.

A memory system is a tuple (Q, delta, iota, omega) over a finite agent set N,
a family of neighbourhoods C and a signal alphabet Gamma.  Agents are
canonically numbered 0..n-1 internally; ``agent_names`` keeps the external
names (``"1"``..``"n"`` by default).

Configurations are tuples of state names indexed by agent position.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

Configuration = tuple  # tuple[str, ...], one state per agent


class MemorySystemError(ValueError):
    """Raised for structurally unusable systems or precondition violations."""


class NotEnabledError(MemorySystemError):
    pass


@dataclass(frozen=True)
class Neighbourhood:
    name: str
    members: frozenset  # agent indices

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class TransitionEntry:
    """One element (guard, sigma) of delta_I.

    ``rule`` is a tuple of (signal, state, new_state) triples read as a
    deterministic partial map (signal, state) -> new_state.  Agents of the
    neighbourhood with no matching triple keep their state.
    """

    id: str
    neighbourhood: str
    guard: tuple
    rule: tuple = ()

    @cached_property
    def rule_map(self) -> dict:
        return {(s, q): q2 for s, q, q2 in self.rule}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    warnings: tuple = ()
    flags: Mapping = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "violations": list(self.violations),
            "warnings": list(self.warnings),
            "flags": dict(self.flags),
        }


@dataclass(frozen=True)
class MemorySystem:
    states: tuple
    signals: tuple
    signal_of: Mapping  # state -> signal (omega)
    agent_names: tuple
    neighbourhoods: tuple  # of Neighbourhood
    transitions: tuple  # of TransitionEntry, sorted by id
    initial: tuple  # state per agent (iota)

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        signals: Sequence[str],
        signal_of: Mapping[str, str],
        agents: Sequence[str] | int,
        neighbourhoods: Mapping[str, Iterable] | Sequence[tuple[str, Iterable]],
        transitions: Iterable[TransitionEntry | Mapping],
        initial: Mapping[str, str] | Sequence[str],
    ) -> "MemorySystem":
        """Construct a system from external names.

        Neighbourhood members and ``initial`` keys use external agent names;
        integers are accepted and stringified.  Semantic problems (bad
        guards, unknown states in rules...) are left for
        :func:`validate_system`; only problems that make the system
        unrepresentable raise.
        """
        if isinstance(agents, int):
            agent_names = tuple(str(i) for i in range(1, agents + 1))
        else:
            agent_names = tuple(str(a) for a in agents)
        if len(set(agent_names)) != len(agent_names):
            raise MemorySystemError("duplicate agent names")
        index = {a: i for i, a in enumerate(agent_names)}

        def resolve(a) -> int:
            try:
                return index[str(a)]
            except KeyError:
                raise MemorySystemError(f"unknown agent {a!r}") from None

        items = neighbourhoods.items() if isinstance(neighbourhoods, Mapping) else neighbourhoods
        nbs = tuple(
            Neighbourhood(str(name), frozenset(resolve(a) for a in members))
            for name, members in items
        )

        entries = []
        for t in transitions:
            if isinstance(t, TransitionEntry):
                entries.append(t)
            else:
                entries.append(
                    TransitionEntry(
                        id=str(t["id"]),
                        neighbourhood=str(t["neighbourhood"]),
                        guard=tuple(int(v) for v in t["guard"]),
                        rule=tuple(tuple(str(x) for x in r) for r in t["rule"]),
                    )
                )
        entries.sort(key=lambda e: e.id)

        if isinstance(initial, Mapping):
            init = [None] * len(agent_names)
            for a, q in initial.items():
                init[resolve(a)] = str(q)
            if any(q is None for q in init):
                missing = [agent_names[i] for i, q in enumerate(init) if q is None]
                raise MemorySystemError(f"initial state missing for agents {missing}")
        else:
            init = [str(q) for q in initial]
            if len(init) != len(agent_names):
                raise MemorySystemError("initial configuration length differs from agent count")

        return cls(
            states=tuple(str(q) for q in states),
            signals=tuple(str(s) for s in signals),
            signal_of={str(k): str(v) for k, v in signal_of.items()},
            agent_names=agent_names,
            neighbourhoods=nbs,
            transitions=tuple(entries),
            initial=tuple(init),
        )

    def __hash__(self) -> int:
        return hash((self.states, self.signals, self.agent_names, self.neighbourhoods,
                     self.transitions, self.initial))

    @property
    def n_agents(self) -> int:
        return len(self.agent_names)

    @cached_property
    def neighbourhood_map(self) -> dict:
        return {nb.name: nb for nb in self.neighbourhoods}

    @cached_property
    def entry_map(self) -> dict:
        return {e.id: e for e in self.transitions}

    @cached_property
    def signal_index(self) -> dict:
        return {s: j for j, s in enumerate(self.signals)}

    @cached_property
    def agent_index(self) -> dict:
        return {a: i for i, a in enumerate(self.agent_names)}

    def neighbourhood(self, name: str) -> Neighbourhood:
        try:
            return self.neighbourhood_map[name]
        except KeyError:
            raise MemorySystemError(f"unknown neighbourhood {name!r}") from None

    def entry(self, entry_id: str) -> TransitionEntry:
        try:
            return self.entry_map[entry_id]
        except KeyError:
            raise MemorySystemError(f"unknown transition entry {entry_id!r}") from None

    def signal_vector(self, config: Configuration) -> tuple:
        return tuple(self.signal_of[q] for q in config)

    def uniform_signal(self, config: Configuration, members: Iterable[int] | None = None):
        """The single signal emitted by all of ``members`` (default N), else None."""
        idx = range(len(config)) if members is None else members
        sigs = {self.signal_of[config[i]] for i in idx}
        return sigs.pop() if len(sigs) == 1 else None

    def with_initial(self, initial: Sequence[str]) -> "MemorySystem":
        return MemorySystem(self.states, self.signals, self.signal_of, self.agent_names,
                            self.neighbourhoods, self.transitions, tuple(initial))


# -- operations ---------------------------------------------------------------


def initial_configuration(sys: MemorySystem) -> Configuration:
    return tuple(sys.initial)


def distribution_of(sys: MemorySystem, config: Configuration, neighbourhood: str) -> tuple:
    nb = sys.neighbourhood(neighbourhood)
    counts = [0] * len(sys.signals)
    for i in nb.members:
        counts[sys.signal_index[sys.signal_of[config[i]]]] += 1
    return tuple(counts)


def enabled_transitions(sys: MemorySystem, config: Configuration) -> list[str]:
    """Ids of the entries whose guard equals the induced distribution, in id order."""
    dists: dict[str, tuple] = {}
    out = []
    for e in sys.transitions:
        if e.neighbourhood not in sys.neighbourhood_map:
            continue
        d = dists.get(e.neighbourhood)
        if d is None:
            d = dists[e.neighbourhood] = distribution_of(sys, config, e.neighbourhood)
        if d == e.guard:
            out.append(e.id)
    return out


def apply_transition(sys: MemorySystem, config: Configuration, entry_id: str) -> Configuration:
    e = sys.entry(entry_id)
    if distribution_of(sys, config, e.neighbourhood) != e.guard:
        raise NotEnabledError(f"entry {entry_id!r} is not enabled at {config}")
    rule = e.rule_map
    new = list(config)
    for i in sys.neighbourhood(e.neighbourhood).members:
        q = config[i]
        q2 = rule.get((sys.signal_of[q], q))
        if q2 is not None:
            new[i] = q2
    return tuple(new)


# -- validation ---------------------------------------------------------------


def validate_system(sys: MemorySystem, order: Sequence[str] | None = None) -> ValidationReport:
    """Check well-formedness and classify the system into the known subclasses.

    ``order`` is the agent ordering used for the hierarchy flag (external
    names, lowest first); the canonical agent order is used when omitted.
    """
    violations: list[str] = []
    warnings: list[str] = []
    states = set(sys.states)
    signals = set(sys.signals)

    if not sys.states:
        violations.append("state set is empty")
    if len(states) != len(sys.states):
        violations.append("duplicate state names")
    if not sys.signals:
        violations.append("signal alphabet is empty")
    if len(signals) != len(sys.signals):
        violations.append("duplicate signal names")
    if any(not s for s in sys.signals):
        violations.append("empty signal name")
    if sys.n_agents == 0:
        violations.append("agent set is empty")
    elif sys.n_agents <= 2:
        warnings.append(f"|N| = {sys.n_agents}; the model assumes |N| > 2")

    for q in sys.states:
        if q not in sys.signal_of:
            violations.append(f"signal_of undefined for state {q!r}")
        elif sys.signal_of[q] not in signals:
            violations.append(f"signal_of({q!r}) = {sys.signal_of[q]!r} is not a signal")
    for q in sys.signal_of:
        if q not in states:
            violations.append(f"signal_of mentions unknown state {q!r}")

    for i, q in enumerate(sys.initial):
        if q not in states:
            violations.append(f"initial state {q!r} of agent {sys.agent_names[i]} is not a state")

    if not sys.neighbourhoods:
        violations.append("neighbourhood family is empty")
    seen_names: set[str] = set()
    seen_sets: dict[frozenset, str] = {}
    for nb in sys.neighbourhoods:
        if nb.name in seen_names:
            violations.append(f"duplicate neighbourhood name {nb.name!r}")
        seen_names.add(nb.name)
        if not nb.members:
            violations.append(f"neighbourhood {nb.name!r} is empty")
        if nb.members in seen_sets:
            violations.append(
                f"neighbourhood {nb.name!r} duplicates {seen_sets[nb.members]!r}")
        else:
            seen_sets[nb.members] = nb.name

    seen_ids: set[str] = set()
    for e in sys.transitions:
        if e.id in seen_ids:
            violations.append(f"duplicate transition id {e.id!r}")
        seen_ids.add(e.id)
        nb = sys.neighbourhood_map.get(e.neighbourhood)
        if nb is None:
            violations.append(f"entry {e.id!r}: unknown neighbourhood {e.neighbourhood!r}")
            continue
        if len(e.guard) != len(sys.signals):
            violations.append(
                f"entry {e.id!r}: guard has {len(e.guard)} components, expected {len(sys.signals)}")
        elif any(v < 0 for v in e.guard):
            violations.append(f"entry {e.id!r}: negative guard component")
        elif sum(e.guard) != len(nb):
            violations.append(
                f"entry {e.id!r}: guard/neighbourhood size mismatch "
                f"(sum {sum(e.guard)} != |{nb.name}| = {len(nb)})")
        keys: set[tuple] = set()
        for triple in e.rule:
            if len(triple) != 3:
                violations.append(f"entry {e.id!r}: rule item {triple!r} is not a triple")
                continue
            s, q, q2 = triple
            if s not in signals:
                violations.append(f"entry {e.id!r}: unknown signal {s!r} in rule")
            if q not in states or q2 not in states:
                violations.append(f"entry {e.id!r}: unknown state in rule {triple!r}")
            if (s, q) in keys:
                violations.append(f"entry {e.id!r}: nondeterministic rule for ({s}, {q})")
            keys.add((s, q))
            if q in sys.signal_of and s in signals and sys.signal_of[q] != s:
                warnings.append(f"entry {e.id!r}: rule item {triple!r} can never apply")

    flags = {
        "pairwise": bool(sys.neighbourhoods) and all(len(nb) == 2 for nb in sys.neighbourhoods),
        "size_based": is_size_based(sys),
        "hierarchy": is_hierarchy(sys, order),
        "agent_symmetric": is_agent_symmetric(sys),
    }
    return ValidationReport(tuple(violations), tuple(warnings), flags)


def _behaviour(sys: MemorySystem, nb: Neighbourhood) -> frozenset:
    return frozenset((e.guard, frozenset(e.rule)) for e in sys.transitions
                     if e.neighbourhood == nb.name)


def is_size_based(sys: MemorySystem) -> bool:
    """True when neighbourhoods of equal size carry identical (guard, rule) sets."""
    by_size: dict[int, frozenset] = {}
    for nb in sys.neighbourhoods:
        b = _behaviour(sys, nb)
        if by_size.setdefault(len(nb), b) != b:
            return False
    return True


def is_hierarchy(sys: MemorySystem, order: Sequence[str] | None = None) -> bool:
    if order is None:
        rank = list(range(sys.n_agents))
    else:
        pos = {str(a): r for r, a in enumerate(order)}
        if set(pos) != set(sys.agent_names):
            raise MemorySystemError("hierarchy order must list every agent exactly once")
        rank = [pos[a] for a in sys.agent_names]
    for nb in sys.neighbourhoods:
        ranks = sorted(rank[i] for i in nb.members)
        if ranks != list(range(len(ranks))):
            return False
    return True


def is_agent_symmetric(sys: MemorySystem) -> bool:
    """Sufficient check that every agent permutation is an automorphism.

    Holds when the system is size-based and, for each neighbourhood size
    used, every subset of N of that size is a neighbourhood.
    """
    if not is_size_based(sys):
        return False
    sizes = {len(nb) for nb in sys.neighbourhoods}
    present = {nb.members for nb in sys.neighbourhoods}
    for k in sizes:
        for combo in itertools.combinations(range(sys.n_agents), k):
            if frozenset(combo) not in present:
                return False
    return True
