"""Memory systems: simulation, emergence analysis and temporal model checking."""

__version__ = "0.1.0"

from .emergence import (
    FAIRNESS_MODES,
    BoundTooSmall,
    EmergenceVerdict,
    brute_force_emergence,
    check_emergence,
    fair_terminal_classes,
)
from .graph import (
    BudgetExceeded,
    ConfigurationGraph,
    History,
    UndeterminedError,
    build_graph,
    deadlocks,
    is_eventually_stable,
    scc_decomposition,
)
from .loader import SchemaError, load_system, loads_system, system_from_dict, system_to_dict
from .simulate import POLICIES, Scheduler, simulate
from .system import (
    MemorySystem,
    MemorySystemError,
    Neighbourhood,
    NotEnabledError,
    TransitionEntry,
    ValidationReport,
    apply_transition,
    distribution_of,
    enabled_transitions,
    initial_configuration,
    validate_system,
)

__all__ = [
    "FAIRNESS_MODES", "POLICIES", "BoundTooSmall", "BudgetExceeded", "ConfigurationGraph",
    "EmergenceVerdict", "History", "MemorySystem", "MemorySystemError", "Neighbourhood",
    "NotEnabledError", "SchemaError", "Scheduler", "TransitionEntry", "UndeterminedError",
    "ValidationReport", "apply_transition", "brute_force_emergence", "build_graph",
    "check_emergence", "deadlocks", "distribution_of", "enabled_transitions",
    "fair_terminal_classes", "initial_configuration", "is_eventually_stable", "load_system",
    "loads_system", "scc_decomposition", "simulate", "system_from_dict", "system_to_dict",
    "validate_system",
]
