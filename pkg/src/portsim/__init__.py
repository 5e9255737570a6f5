"""portsim: a deterministic discrete-event simulator of a container terminal."""

from .engine import SimulationResult, simulate, validate_result
from .kpi import KpiReport, build_report
from .policies import PolicySet, compare_policies, run_paired
from .scenario import (
    ScenarioConfig,
    ScenarioError,
    emit_scenario,
    load_builtin_scenario,
    load_scenario,
    load_scenario_file,
)

__version__ = "0.1.0"

__all__ = [
    "KpiReport",
    "PolicySet",
    "ScenarioConfig",
    "ScenarioError",
    "SimulationResult",
    "build_report",
    "compare_policies",
    "emit_scenario",
    "load_builtin_scenario",
    "load_scenario",
    "load_scenario_file",
    "run_paired",
    "simulate",
    "validate_result",
]
