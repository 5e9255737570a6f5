"""Ship and container generation for one simulated horizon.

Arrival times come from the `arrivals` stream, everything about a ship's
composition (length, box sizes, categories, export delivery times) from the
`ship` stream, so operational policy changes never disturb the generated
workload (common random numbers).

Export boxes destined for a ship are announced landside during a lead window
ending at the ship's arrival, so they are usually stacked in an export block
before loading starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .entities import (
    DISCHARGE_CATEGORIES,
    EXPORT,
    LANDSIDE,
    ON_SHIP,
    Container,
    Ship,
)
from .kernel import ticks_from_minutes
from .randomness import RngStream
from .scenario import ScenarioConfig


@dataclass
class ArrivalPlan:
    """Everything the engine needs to replay one workload."""

    ships: list[Ship] = field(default_factory=list)
    containers: dict[int, Container] = field(default_factory=dict)
    export_arrivals: list[tuple[int, int]] = field(default_factory=list)  # (ticks, container id)
    ship_exports: dict[str, list[int]] = field(default_factory=dict)

    def total_generated_moves(self) -> int:
        return sum(ship.total_moves for ship in self.ships)


def _pick_category(mix: list[tuple[str, float]], total: float, u: float) -> str:
    threshold = u * total
    cumulative = 0.0
    for category, share in mix:
        cumulative += share
        if threshold < cumulative:
            return category
    return mix[-1][0]


def generate_arrivals(
    scenario: ScenarioConfig,
    horizon_ticks: int,
    arrivals_stream: RngStream,
    ship_stream: RngStream,
) -> ArrivalPlan:
    """Generate all ships (and their containers) arriving within the horizon."""
    plan = ArrivalPlan()
    next_container_id = 1

    def new_container(category: str, location: str, ship_id: str, forty: bool) -> Container:
        nonlocal next_container_id
        container = Container(
            id=next_container_id,
            size_ft=40 if forty else 20,
            category=category,
            location=location,
            ship_id=ship_id,
        )
        next_container_id += 1
        plan.containers[container.id] = container
        return container

    lead_ticks = ticks_from_minutes(scenario.arrivals.export_lead_time_h * 60.0)

    if scenario.fixed_ships is not None:
        for index, spec in enumerate(scenario.fixed_ships):
            ship = Ship(
                id=f"S{index + 1:03d}",
                arrival=ticks_from_minutes(spec.arrival_min),
                length_m=spec.length_m,
            )
            if ship.arrival > horizon_ticks:
                continue
            for category, count in spec.manifest:
                for _ in range(count):
                    box = new_container(category, ON_SHIP, ship.id, forty=False)
                    ship.discharge_ids.append(box.id)
            ship.load_demand = spec.load
            exports = []
            window_start = max(0, ship.arrival - lead_ticks)
            for k in range(spec.load):
                box = new_container(EXPORT, LANDSIDE, ship.id, forty=False)
                exports.append(box.id)
                # deterministic, evenly spaced landside deliveries
                when = window_start + (ship.arrival - window_start) * k // max(1, spec.load)
                plan.export_arrivals.append((when, box.id))
            plan.ship_exports[ship.id] = exports
            plan.ships.append(ship)
        plan.export_arrivals.sort()
        return plan

    if scenario.arrivals.interarrival_min is None:
        return plan  # arrival rate zero

    mix = [(c, s) for c, s in scenario.arrivals.category_mix if s > 0]
    mix_total = sum(share for _c, share in mix)
    export_share = dict(mix).get(EXPORT, 0.0) / mix_total if mix_total else 0.0
    discharge_mix = [(c, s) for c, s in mix if c in DISCHARGE_CATEGORIES]
    discharge_total = sum(share for _c, share in discharge_mix)
    forty_share = scenario.arrivals.forty_foot_share

    clock = 0
    index = 0
    while True:
        gap = scenario.arrivals.interarrival_min.sample(arrivals_stream)
        clock += ticks_from_minutes(gap)
        if clock > horizon_ticks:
            break
        index += 1
        length = scenario.arrivals.ship_length_m.sample(ship_stream)
        ship = Ship(id=f"S{index:03d}", arrival=clock, length_m=length)
        moves = max(1, round(length * scenario.arrivals.moves_per_meter))
        load = round(moves * export_share)
        discharge = moves - load

        for _ in range(discharge):
            if discharge_total > 0:
                category = _pick_category(
                    discharge_mix, discharge_total, ship_stream.uniform01())
            else:
                category = DISCHARGE_CATEGORIES[0]
            forty = ship_stream.uniform01() < forty_share
            box = new_container(category, ON_SHIP, ship.id, forty)
            ship.discharge_ids.append(box.id)

        ship.load_demand = load
        exports = []
        window_start = max(0, clock - lead_ticks)
        for _ in range(load):
            forty = ship_stream.uniform01() < forty_share
            box = new_container(EXPORT, LANDSIDE, ship.id, forty)
            exports.append(box.id)
            offset = ship_stream.uniform01()
            plan.export_arrivals.append(
                (window_start + round(offset * (clock - window_start)), box.id))
        plan.ship_exports[ship.id] = exports
        plan.ships.append(ship)

    plan.export_arrivals.sort()
    return plan
