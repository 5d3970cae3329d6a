import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsys.loader import SchemaError, loads_system, system_from_dict, system_to_dict
from memsys.system import (
    MemorySystem,
    MemorySystemError,
    NotEnabledError,
    apply_transition,
    distribution_of,
    enabled_transitions,
    initial_configuration,
    is_agent_symmetric,
    validate_system,
)
from randsys import random_system


def test_fixtures_validate(fixtures):
    for name, sys in fixtures.items():
        report = validate_system(sys)
        assert report.valid, (name, report.violations)


def test_maj1_flags(maj1):
    flags = validate_system(maj1).flags
    assert flags["size_based"] and flags["agent_symmetric"] and not flags["pairwise"]


def test_pred3_is_pairwise(pred3):
    assert validate_system(pred3).flags["pairwise"]


def test_small_population_warning(even2):
    assert any("|N| = 2" in w for w in validate_system(even2).warnings)


def test_distribution_maj1(maj1):
    assert distribution_of(maj1, initial_configuration(maj1), "N") == (2, 1)


def test_enabled_in_id_order(maj1):
    assert enabled_transitions(maj1, ("G", "G", "B")) == ["maj-2g-1b"]
    assert enabled_transitions(maj1, ("G", "G", "G")) == ["maj-3g-0b"]


def test_apply_majority(maj1):
    assert apply_transition(maj1, ("G", "G", "B"), "maj-2g-1b") == ("G", "G", "G")


def test_apply_disabled_raises(maj1):
    with pytest.raises(NotEnabledError):
        apply_transition(maj1, ("G", "G", "B"), "maj-3g-0b")


def test_frame_property_pred3(pred3):
    # agents outside the neighbourhood keep their state
    after = apply_transition(pred3, ("G", "G", "B"), "pred-23")
    assert after == ("G", "B", "B")


def test_guard_sum_violation_reported(data_dir):
    doc = json.loads((data_dir / "maj1.json").read_text())
    doc["transitions"][0]["guard"] = [2, 2]
    report = validate_system(system_from_dict(doc))
    assert not report.valid
    assert any("maj-3g-0b" in v and "size mismatch" in v for v in report.violations)


def test_nondeterministic_rule_reported(maj1):
    doc = system_to_dict(maj1)
    doc["transitions"][0]["rule"].append(["g", "G", "B"])
    report = validate_system(system_from_dict(doc))
    assert any("nondeterministic" in v for v in report.violations)


def test_duplicate_neighbourhood_reported():
    sys = MemorySystem.build(["A"], ["a"], {"A": "a"}, 3, {"I": ["1", "2"], "J": ["2", "1"]}, [],
                             ["A"] * 3)
    assert any("duplicates" in v for v in validate_system(sys).violations)


def test_unknown_agent_raises():
    with pytest.raises(MemorySystemError):
        MemorySystem.build(["A"], ["a"], {"A": "a"}, 2, {"I": ["1", "7"]}, [], ["A", "A"])


def test_schema_rejects_extra_field(maj1):
    doc = system_to_dict(maj1)
    doc["colour"] = "red"
    with pytest.raises(SchemaError):
        system_from_dict(doc)


def test_truncated_json_propagates():
    with pytest.raises(json.JSONDecodeError):
        loads_system('{"states": ["G"')


def test_roundtrip(fixtures):
    for sys in fixtures.values():
        assert system_from_dict(json.loads(json.dumps(system_to_dict(sys)))) == sys


def test_agent_symmetry_needs_all_subsets(pred3):
    assert is_agent_symmetric(pred3)
    doc = system_to_dict(pred3)
    del doc["neighbourhoods"]["I23"]
    doc["transitions"] = [t for t in doc["transitions"] if t["neighbourhood"] != "I23"]
    assert not is_agent_symmetric(system_from_dict(doc))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_distribution_sums_to_neighbourhood_size(seed):
    rng = random.Random(seed)
    sys = random_system(rng)
    config = tuple(rng.choice(sys.states) for _ in range(sys.n_agents))
    for nb in sys.neighbourhoods:
        dist = distribution_of(sys, config, nb.name)
        assert sum(dist) == len(nb)
        assert all(v >= 0 for v in dist)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_step_frame_and_determinism(seed):
    rng = random.Random(seed)
    sys = random_system(rng)
    config = tuple(rng.choice(sys.states) for _ in range(sys.n_agents))
    for e in enabled_transitions(sys, config):
        after = apply_transition(sys, config, e)
        assert after == apply_transition(sys, config, e)
        members = sys.neighbourhood(sys.entry(e).neighbourhood).members
        for i in range(sys.n_agents):
            if i not in members:
                assert after[i] == config[i]
