import pytest

from memsys.graph import FINITE, PREFIX
from memsys.simulate import POLICIES, Scheduler, simulate
from memsys.system import MemorySystem
from memsys.system import apply_transition


@pytest.mark.parametrize("policy", POLICIES)
def test_replays(pred3, policy):
    h = simulate(pred3, Scheduler(policy, seed=3), 30)
    for src, e, dst in h.steps():
        assert apply_transition(pred3, src, e) == dst


@pytest.mark.parametrize("policy", POLICIES)
def test_deterministic_under_seed(pred3, policy):
    a = simulate(pred3, Scheduler(policy, seed=9), 25)
    b = simulate(pred3, Scheduler(policy, seed=9), 25)
    assert a == b


def test_maj1_reaches_all_g(maj1):
    h = simulate(maj1, Scheduler(seed=1), 5)
    assert h.configs[-1] == ("G", "G", "G")
    assert h.kind == PREFIX


def test_even2_constant(even2):
    h = simulate(even2, Scheduler(seed=1), 3)
    assert set(h.configs) == {("G", "B")} and len(h.configs) == 4


def test_zero_steps(maj1):
    h = simulate(maj1, Scheduler(), 0)
    assert h.configs == (("G", "G", "B"),)


def test_deadlock_gives_finite(maj1):
    dead = MemorySystem(maj1.states, maj1.signals, maj1.signal_of, maj1.agent_names,
                        maj1.neighbourhoods, (), maj1.initial)
    assert simulate(dead, Scheduler(), 10).kind == FINITE


def test_fairness_forcing_fires_everything(pred3):
    h = simulate(pred3.with_initial(("B", "G", "B")), Scheduler("fairness-forcing", 0), 12)
    # from (B,G,B) the pair 1-3 idles; forcing lets some pred entry fire
    assert h.configs[-1] == ("B", "B", "B")


def test_unknown_policy():
    with pytest.raises(ValueError):
        Scheduler("lottery")
