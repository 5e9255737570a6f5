"""Container-terminal domain entities.

Containers move along the quay-to-yard flow: ship -> quay crane -> truck ->
yard crane -> storage block for discharge, and the reverse for export loads.
Locations are tracked on the container itself so every box occupies exactly
one place at any instant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

IMPORT = "import"
EXPORT = "export"
EMPTY = "empty"
REEFER = "reefer"
HAZARDOUS = "hazardous"

CATEGORIES = (IMPORT, EXPORT, EMPTY, REEFER, HAZARDOUS)
DISCHARGE_CATEGORIES = (IMPORT, EMPTY, REEFER, HAZARDOUS)

ON_SHIP = "on-ship"
AT_CRANE = "at-crane"
ON_TRUCK = "on-truck"
IN_BLOCK = "in-block"
DEPARTED = "departed"
LANDSIDE = "landside"  # export container announced but not yet stored

LOCATIONS = (ON_SHIP, AT_CRANE, ON_TRUCK, IN_BLOCK, DEPARTED, LANDSIDE)

# Legal location moves per the terminal flow; exports run the chain backwards.
# Landside export deliveries go straight into a block (external haulage is out
# of scope, so no terminal truck is consumed on that leg).
_FLOW = {
    LANDSIDE: {IN_BLOCK},
    ON_SHIP: {AT_CRANE},           # discharge lift
    AT_CRANE: {ON_TRUCK, ON_SHIP},  # handoff to truck / load lift lands aboard
    ON_TRUCK: {IN_BLOCK, AT_CRANE},
    IN_BLOCK: {ON_TRUCK, DEPARTED},
    DEPARTED: set(),
}


class LocationError(RuntimeError):
    """A container was moved against the terminal flow."""


@dataclass(slots=True)
class Container:
    """A 20 ft or 40 ft box with a flow category and a single location."""

    id: int
    size_ft: int  # 20 or 40
    category: str
    location: str
    ship_id: str | None = None   # carrying ship (discharge) or target ship (export)
    block_id: str | None = None
    carried_by: str | None = None  # truck id of the most recent drayage leg

    def __post_init__(self) -> None:
        if self.size_ft not in (20, 40):
            raise ValueError(f"container size must be 20 or 40 ft, got {self.size_ft}")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown container category {self.category!r}")
        if self.location not in LOCATIONS:
            raise ValueError(f"unknown location {self.location!r}")

    @property
    def teu(self) -> int:
        return 1 if self.size_ft == 20 else 2

    def move_to(self, location: str, block_id: str | None = None) -> None:
        if location not in _FLOW.get(self.location, set()):
            raise LocationError(
                f"container {self.id}: illegal move {self.location} -> {location}"
            )
        self.location = location
        self.block_id = block_id if location == IN_BLOCK else None


@dataclass(slots=True)
class Ship:
    """An arriving vessel: what it discharges, what it loads, and when."""

    id: str
    arrival: int  # ticks
    length_m: float
    discharge_ids: list[int] = field(default_factory=list)
    load_demand: int = 0
    berth_position: float | None = None
    berthed_at: int | None = None
    departed_at: int | None = None

    @property
    def total_moves(self) -> int:
        return len(self.discharge_ids) + self.load_demand

    @property
    def is_berthed(self) -> bool:
        return self.berthed_at is not None and self.departed_at is None


class Quay:
    """A continuous berth line; ships occupy disjoint position intervals."""

    def __init__(self, length_m: float, clearance_m: float) -> None:
        self.length_m = length_m
        self.clearance_m = clearance_m
        self.berthed: list[tuple[float, float, str]] = []  # (position, length, ship id)

    def first_fit(self, ship_length: float) -> float | None:
        """Leftmost feasible position with clearance to both neighbours."""
        candidates = [0.0]
        for position, length, _sid in self.berthed:
            candidates.append(position + length + self.clearance_m)
        for candidate in sorted(candidates):
            if candidate + ship_length > self.length_m:
                continue
            if all(
                candidate + ship_length + self.clearance_m <= position
                or candidate >= position + length + self.clearance_m
                for position, length, _sid in self.berthed
            ):
                return candidate
        return None

    def moor(self, ship: Ship, position: float) -> None:
        entry = (position, ship.length_m, ship.id)
        for other_pos, other_len, other_id in self.berthed:
            if position < other_pos + other_len and other_pos < position + ship.length_m:
                raise LocationError(
                    f"ship {ship.id} at [{position}, {position + ship.length_m}) "
                    f"overlaps {other_id}"
                )
        self.berthed.append(entry)
        self.berthed.sort()
        ship.berth_position = position

    def unmoor(self, ship: Ship) -> None:
        self.berthed = [entry for entry in self.berthed if entry[2] != ship.id]

    def occupied_m(self) -> float:
        return sum(length for _pos, length, _sid in self.berthed)


@dataclass(slots=True)
class YardBlock:
    """A storage area dedicated to one container category."""

    id: str
    category: str
    capacity: int
    distance_class: str
    crane_group: str  # "rtg" (dedicated gantry) or "top_lift" (shared pool)
    occupancy: int = 0
    transactions: int = 0
    inbound: int = 0  # containers en route or queued for stacking

    def has_space(self) -> bool:
        return self.occupancy + self.inbound < self.capacity

    def store_completed(self) -> None:
        self.inbound -= 1
        self.occupancy += 1
        self.transactions += 1
        if not 0 <= self.occupancy <= self.capacity:
            raise LocationError(f"block {self.id} occupancy out of bounds")

    def retrieve_completed(self) -> None:
        if self.occupancy <= 0:
            raise LocationError(f"block {self.id}: retrieve from empty block")
        self.occupancy -= 1
        self.transactions += 1

    def depart(self) -> None:
        if self.occupancy <= 0:
            raise LocationError(f"block {self.id}: departure from empty block")
        self.occupancy -= 1
