"""Scheduled simulation of memory systems."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import FINITE, PREFIX, History
from .system import MemorySystem, apply_transition, enabled_transitions, initial_configuration

POLICIES = ("uniform-random", "round-robin", "fairness-forcing")


@dataclass(frozen=True)
class Scheduler:
    """How the next enabled entry is picked.

    ``uniform-random`` draws uniformly among enabled entries.
    ``round-robin`` cycles over all entries in id order and fires the next
    enabled one after the previously fired entry.  ``fairness-forcing``
    draws at random but fires any entry that has stayed enabled without
    firing for ``len(entries)`` consecutive steps (oldest first).
    """

    policy: str = "uniform-random"
    seed: int = 0

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}; choose from {POLICIES}")


def simulate(sys: MemorySystem, sched: Scheduler, max_steps: int) -> History:
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    rng = random.Random(sched.seed)
    ids = [e.id for e in sys.transitions]
    pos = {e: i for i, e in enumerate(ids)}
    window = max(1, len(ids))
    waiting = dict.fromkeys(ids, 0)
    last = -1

    config = initial_configuration(sys)
    configs = [config]
    labels = []
    for _ in range(max_steps):
        enabled = enabled_transitions(sys, config)
        if not enabled:
            return History(FINITE, tuple(configs), tuple(labels))
        if sched.policy == "uniform-random":
            choice = rng.choice(enabled)
        elif sched.policy == "round-robin":
            choice = min(enabled, key=lambda e: (pos[e] - last - 1) % len(ids))
        else:
            starving = [e for e in enabled if waiting[e] >= window - 1]
            if starving:
                choice = max(starving, key=lambda e: (waiting[e], -pos[e]))
            else:
                choice = rng.choice(enabled)
            for e in ids:
                waiting[e] = waiting[e] + 1 if e in enabled and e != choice else 0
        last = pos[choice]
        config = apply_transition(sys, config, choice)
        configs.append(config)
        labels.append(choice)
    if not enabled_transitions(sys, config):
        return History(FINITE, tuple(configs), tuple(labels))
    return History(PREFIX, tuple(configs), tuple(labels))
