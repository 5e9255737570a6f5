"""Pluggable decision rules: berth choice, crane gang size, truck pick, storage.

Each rule is a pure function of the observable state passed to it, selected by
id from a registry, so a scenario file fully describes an experiment and two
runs with the same inputs decide identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from statistics import mean
from typing import Sequence

from .entities import Quay, Ship, YardBlock


class ConfigError(ValueError):
    """An unknown policy id or out-of-range policy parameter."""


DECISION_POINTS = ("berth", "crane", "truck", "storage")


@dataclass(frozen=True)
class PolicySet:
    """The decision rules and their parameters for one scenario."""

    berth: str = "first-fit"
    crane: str = "proportional-capped"
    max_cranes_per_ship: int = 3
    crane_moves_quantum: int = 150
    truck: str = "longest-idle"
    storage: str = "least-occupancy"
    long_ship_threshold_m: float | None = None


# --- berth rules -----------------------------------------------------------

def berth_first_fit(quay: Quay, ship: Ship, policy: PolicySet) -> float | None:
    """Leftmost position where the ship fits with clearance, else None."""
    return quay.first_fit(ship.length_m)


def berth_long_right(quay: Quay, ship: Ship, policy: PolicySet) -> float | None:
    """First fit, but ships at or above the long-ship threshold moor as far
    right as possible, keeping them within reach of the highest-rail crane."""
    threshold = policy.long_ship_threshold_m
    if threshold is None or ship.length_m < threshold:
        return quay.first_fit(ship.length_m)
    candidates = [quay.length_m - ship.length_m]
    for position, _length, _sid in quay.berthed:
        candidates.append(position - quay.clearance_m - ship.length_m)
    best = None
    for candidate in candidates:
        if candidate < 0 or candidate + ship.length_m > quay.length_m:
            continue
        if all(
            candidate + ship.length_m + quay.clearance_m <= position
            or candidate >= position + length + quay.clearance_m
            for position, length, _sid in quay.berthed
        ):
            if best is None or candidate > best:
                best = candidate
    return best


# --- crane gang-size rules -------------------------------------------------

def crane_proportional_capped(remaining_moves: int, policy: PolicySet) -> int:
    """One crane per `crane_moves_quantum` remaining moves, capped."""
    if remaining_moves <= 0:
        return 0
    desired = math.ceil(remaining_moves / policy.crane_moves_quantum)
    return max(1, min(policy.max_cranes_per_ship, desired))


# --- truck pick rules ------------------------------------------------------

def truck_longest_idle(idle: Sequence[tuple[str, int]]) -> str:
    """Pick the truck idle the longest; ties by id. `idle` is (id, idle_since)."""
    return min(idle, key=lambda item: (item[1], item[0]))[0]


def truck_lowest_id(idle: Sequence[tuple[str, int]]) -> str:
    return min(item[0] for item in idle)


# --- storage rules ---------------------------------------------------------

def storage_least_occupancy(candidates: Sequence[YardBlock], cursor: int) -> YardBlock:
    """Least (occupancy + inbound); ties resolved by candidate order."""
    return min(candidates, key=lambda b: b.occupancy + b.inbound)


def storage_round_robin(candidates: Sequence[YardBlock], cursor: int) -> YardBlock:
    """Cycle through the candidate blocks in order."""
    return candidates[cursor % len(candidates)]


BERTH_POLICIES = {"first-fit": berth_first_fit,
                  "first-fit-long-right": berth_long_right}
CRANE_POLICIES = {"proportional-capped": crane_proportional_capped}
TRUCK_POLICIES = {"longest-idle": truck_longest_idle, "lowest-id": truck_lowest_id}
STORAGE_POLICIES = {
    "least-occupancy": storage_least_occupancy,
    "round-robin": storage_round_robin,
}

_REGISTRIES = {
    "berth": BERTH_POLICIES,
    "crane": CRANE_POLICIES,
    "truck": TRUCK_POLICIES,
    "storage": STORAGE_POLICIES,
}


def resolve_policy(policy_set: PolicySet, decision_point: str):
    """Return the registered rule for one decision point."""
    if decision_point not in DECISION_POINTS:
        raise ConfigError(f"unknown decision point {decision_point!r}")
    policy_id = getattr(policy_set, decision_point)
    registry = _REGISTRIES[decision_point]
    if policy_id not in registry:
        raise ConfigError(
            f"policies.{decision_point}: unknown policy id {policy_id!r} "
            f"(known: {', '.join(sorted(registry))})"
        )
    return registry[policy_id]


def validate_policy_set(policy_set: PolicySet) -> list[str]:
    """All problems with a policy set, as 'key: message' strings."""
    problems = []
    for point in DECISION_POINTS:
        policy_id = getattr(policy_set, point)
        if policy_id not in _REGISTRIES[point]:
            problems.append(
                f"policies.{point}: unknown policy id {policy_id!r} "
                f"(known: {', '.join(sorted(_REGISTRIES[point]))})"
            )
    if policy_set.max_cranes_per_ship < 1:
        problems.append("policies.max_cranes_per_ship: must be >= 1")
    if policy_set.crane_moves_quantum < 1:
        problems.append("policies.crane_moves_quantum: must be >= 1")
    if (
        policy_set.long_ship_threshold_m is not None
        and policy_set.long_ship_threshold_m <= 0
    ):
        problems.append("policies.long_ship_threshold_m: must be > 0 when set")
    return problems


# --- paired comparison -----------------------------------------------------

@dataclass(frozen=True)
class ComparisonResult:
    """Per-seed KPI pairs and their mean deltas (B minus A)."""

    seeds: tuple[int, ...]
    kpis_a: tuple[dict, ...]
    kpis_b: tuple[dict, ...]
    deltas: tuple[dict, ...]
    mean_delta: dict


def run_paired(scenario_a, scenario_b, seeds: Sequence[int]) -> ComparisonResult:
    """Run both scenarios with identical seeds (common random numbers)."""
    from .engine import simulate
    from .kpi import build_report

    if len(seeds) < 2:
        raise ValueError("paired comparison needs at least 2 seeds")
    kpis_a, kpis_b, deltas = [], [], []
    for seed in seeds:
        summary_a = build_report(simulate(scenario_a, seed), scenario_a).scalar_summary()
        summary_b = build_report(simulate(scenario_b, seed), scenario_b).scalar_summary()
        kpis_a.append(summary_a)
        kpis_b.append(summary_b)
        deltas.append({key: summary_b[key] - summary_a[key] for key in summary_a})
    mean_delta = {key: mean(delta[key] for delta in deltas) for key in deltas[0]}
    return ComparisonResult(
        seeds=tuple(seeds),
        kpis_a=tuple(kpis_a),
        kpis_b=tuple(kpis_b),
        deltas=tuple(deltas),
        mean_delta=mean_delta,
    )


def compare_policies(scenario, policies_a: PolicySet, policies_b: PolicySet,
                     seeds: Sequence[int]) -> ComparisonResult:
    """Paired KPI deltas for two policy sets on one scenario."""
    scenario_a = replace(scenario, policies=policies_a)
    scenario_b = replace(scenario, policies=policies_b)
    return run_paired(scenario_a, scenario_b, seeds)
