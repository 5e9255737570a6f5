"""KPI derivation from flushed meters and final state.

Definitions fixed here:

* working %: busy time / horizon (waiting and idle excluded).
* net moves per hour: completed moves / busy hours; a resource with zero busy
  time reports 0 and carries a zero-activity flag.
* berth occupancy: length-weighted, integral of occupied metres over time
  divided by (quay length x horizon); a plain time-weighted "any ship
  alongside" figure is reported alongside it.
* weekly TEU: TEU moved across the quay divided by the horizon in weeks;
  the annual estimate is exactly 52 x weekly.
* per-category block transactions are averaged over all blocks of the
  category, idle blocks included.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from statistics import mean

from .engine import BerthInterval, SimulationResult
from .entities import CATEGORIES, Ship
from .kernel import ResourceMeter, TICKS_PER_HOUR, TICKS_PER_MINUTE
from .scenario import ScenarioConfig

HOURS_PER_WEEK = 168.0


class ReportingError(RuntimeError):
    """Raised when KPIs are requested from an unflushed meter."""


def _check_flushed(meter: ResourceMeter, horizon_ticks: int) -> None:
    if meter.flushed_at != horizon_ticks:
        raise ReportingError(
            f"meter {meter.resource_id} not flushed at the horizon "
            f"(flushed_at={meter.flushed_at}, horizon={horizon_ticks})")


def utilization(meter: ResourceMeter, horizon_ticks: int) -> float:
    """Busy time as a percentage of the horizon."""
    if horizon_ticks <= 0:
        raise ReportingError("horizon must be positive")
    _check_flushed(meter, horizon_ticks)
    return meter.busy_ticks / horizon_ticks * 100.0


def net_moves_per_hour(meter: ResourceMeter) -> tuple[float, bool]:
    """(moves per busy hour, zero-activity flag)."""
    if meter.busy_ticks == 0:
        return 0.0, True
    return meter.moves / (meter.busy_ticks / TICKS_PER_HOUR), False


def waiting_stats(meter: ResourceMeter) -> tuple[float, float, int]:
    """(total waiting minutes, mean minutes per episode, episode count)."""
    total_min = meter.waiting_ticks / TICKS_PER_MINUTE
    episodes = meter.waiting_episodes
    mean_min = total_min / episodes if episodes else 0.0
    return total_min, mean_min, episodes


def berth_occupancy(history: list[BerthInterval], quay_length_m: float,
                    horizon_ticks: int) -> tuple[float, float]:
    """(length-weighted %, time-weighted any-ship %)."""
    if horizon_ticks <= 0:
        raise ReportingError("horizon must be positive")
    meter_ticks = 0.0
    boundaries: list[tuple[int, int]] = []
    for entry in history:
        start = max(0, entry.berthed_at)
        end = entry.departed_at if entry.departed_at is not None else horizon_ticks
        end = min(end, horizon_ticks)
        if end <= start:
            continue
        meter_ticks += entry.length_m * (end - start)
        boundaries.append((start, 1))
        boundaries.append((end, -1))
    length_weighted = meter_ticks / (quay_length_m * horizon_ticks) * 100.0

    boundaries.sort()
    occupied = 0
    depth = 0
    previous = 0
    for when, delta in boundaries:
        if depth > 0:
            occupied += when - previous
        previous = when
        depth += delta
    time_weighted = occupied / horizon_ticks * 100.0
    return length_weighted, time_weighted


def ship_times(ships: list[Ship]) -> "ShipKpi":
    departed = [s for s in ships if s.departed_at is not None]
    berthed = [s for s in ships if s.berthed_at is not None]
    service_h = [(s.departed_at - s.berthed_at) / TICKS_PER_HOUR for s in departed]
    turnaround_h = [(s.departed_at - s.arrival) / TICKS_PER_HOUR for s in departed]
    return ShipKpi(
        ships_generated=len(ships),
        ships_berthed=len(berthed),
        ships_departed=len(departed),
        mean_service_h=mean(service_h) if service_h else 0.0,
        max_service_h=max(service_h) if service_h else 0.0,
        mean_turnaround_h=mean(turnaround_h) if turnaround_h else 0.0,
        max_turnaround_h=max(turnaround_h) if turnaround_h else 0.0,
    )


def teu_totals(teu_moved: int, horizon_hours: float) -> tuple[float, float]:
    """(weekly TEU, annual TEU estimate); annual is exactly 52 x weekly."""
    weeks = horizon_hours / HOURS_PER_WEEK
    if weeks <= 0:
        raise ReportingError("horizon must be positive")
    weekly = teu_moved / weeks
    return weekly, weekly * 52.0


def block_report(blocks: dict, scenario: ScenarioConfig) -> dict[str, float]:
    """Mean transactions per block within each category (idle blocks count)."""
    averages: dict[str, float] = {}
    for category in CATEGORIES:
        members = [b for b in blocks.values() if b.category == category]
        if members:
            averages[category] = sum(b.transactions for b in members) / len(members)
    return averages


@dataclass(frozen=True)
class CraneKpi:
    crane_id: str
    working_pct: float
    net_moves_per_hour: float
    throughput: int
    waiting_total_min: float
    waiting_mean_min: float
    waiting_episodes: int
    zero_activity: bool


@dataclass(frozen=True)
class YardCraneKpi:
    name: str
    working_pct: float
    net_moves_per_hour: float
    throughput: int
    zero_activity: bool


@dataclass(frozen=True)
class BlockKpi:
    block_id: str
    category: str
    transactions: int
    final_occupancy: int


@dataclass(frozen=True)
class ShipKpi:
    ships_generated: int
    ships_berthed: int
    ships_departed: int
    mean_service_h: float
    max_service_h: float
    mean_turnaround_h: float
    max_turnaround_h: float


@dataclass(frozen=True)
class TruckQueueKpi:
    requests: int
    served: int
    mean_wait_min: float
    time_avg_queue_len: float
    arrival_rate_per_min: float


@dataclass(frozen=True)
class KpiReport:
    scenario_name: str
    schema_version: int
    seed: int
    horizon_hours: float
    quay_cranes: tuple[CraneKpi, ...]
    quay_total_throughput: int
    yard_cranes: tuple[YardCraneKpi, ...]
    blocks: tuple[BlockKpi, ...]
    category_mean_transactions: tuple[tuple[str, float], ...]
    truck_throughput: int
    truck_mean_utilization_pct: float
    berth_occupancy_pct: float
    berth_time_occupancy_pct: float
    ships: ShipKpi
    teu_moved: int
    weekly_teu: float
    annual_teu: float
    moves_discharge: int
    moves_load: int
    generated_moves: int
    truck_queue: TruckQueueKpi
    overflow_events: int

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["quay_cranes"] = [asdict(c) for c in self.quay_cranes]
        doc["yard_cranes"] = [asdict(c) for c in self.yard_cranes]
        doc["blocks"] = [asdict(b) for b in self.blocks]
        doc["category_mean_transactions"] = dict(self.category_mean_transactions)
        return doc

    def scalar_summary(self) -> dict[str, float]:
        """Flat numeric KPIs used for replication summaries and comparisons."""
        waiting = [c.waiting_total_min for c in self.quay_cranes]
        working = [c.working_pct for c in self.quay_cranes]
        return {
            "weekly_teu": self.weekly_teu,
            "annual_teu": self.annual_teu,
            "teu_moved": float(self.teu_moved),
            "quay_total_throughput": float(self.quay_total_throughput),
            "truck_throughput": float(self.truck_throughput),
            "moves_discharge": float(self.moves_discharge),
            "moves_load": float(self.moves_load),
            "berth_occupancy_pct": self.berth_occupancy_pct,
            "berth_time_occupancy_pct": self.berth_time_occupancy_pct,
            "mean_crane_working_pct": mean(working) if working else 0.0,
            "mean_crane_waiting_total_min": mean(waiting) if waiting else 0.0,
            "mean_service_h": self.ships.mean_service_h,
            "mean_turnaround_h": self.ships.mean_turnaround_h,
            "ships_berthed": float(self.ships.ships_berthed),
            "ships_departed": float(self.ships.ships_departed),
            "truck_mean_utilization_pct": self.truck_mean_utilization_pct,
            "overflow_events": float(self.overflow_events),
        }


def _crane_kpi(meter: ResourceMeter, horizon_ticks: int) -> CraneKpi:
    nmph, zero = net_moves_per_hour(meter)
    total_min, mean_min, episodes = waiting_stats(meter)
    return CraneKpi(
        crane_id=meter.resource_id,
        working_pct=utilization(meter, horizon_ticks),
        net_moves_per_hour=nmph,
        throughput=meter.moves,
        waiting_total_min=total_min,
        waiting_mean_min=mean_min,
        waiting_episodes=episodes,
        zero_activity=zero,
    )


def build_report(result: SimulationResult, scenario: ScenarioConfig) -> KpiReport:
    horizon_ticks = result.horizon_ticks
    horizon_hours = horizon_ticks / TICKS_PER_HOUR

    cranes = tuple(_crane_kpi(result.crane_meters[cid], horizon_ticks)
                   for cid in sorted(result.crane_meters))

    yard_rows: list[YardCraneKpi] = []
    for block_id, meter in result.rtg_meters.items():
        block = result.blocks[block_id]
        nmph, zero = net_moves_per_hour(meter)
        yard_rows.append(YardCraneKpi(
            name=f"Gantry Crane {block.category.capitalize()} - Yard {block_id}",
            working_pct=utilization(meter, horizon_ticks),
            net_moves_per_hour=nmph,
            throughput=meter.moves,
            zero_activity=zero,
        ))
    if result.top_lift_meters:
        group_busy = sum(m.busy_ticks for m in result.top_lift_meters)
        group_moves = sum(m.moves for m in result.top_lift_meters)
        for meter in result.top_lift_meters:
            _check_flushed(meter, horizon_ticks)
        capacity_ticks = horizon_ticks * len(result.top_lift_meters)
        group_nmph = (group_moves / (group_busy / TICKS_PER_HOUR)
                      if group_busy else 0.0)
        served = sorted({b.id for b in result.blocks.values()
                         if b.crane_group == "top_lift"})
        yard_rows.append(YardCraneKpi(
            name="Heavy Top Lift & Empty Handler Spreader - "
                 f"({', '.join(served)}) Yards",
            working_pct=group_busy / capacity_ticks * 100.0,
            net_moves_per_hour=group_nmph,
            throughput=group_moves,
            zero_activity=group_busy == 0,
        ))

    block_rows = tuple(
        BlockKpi(block.id, block.category, block.transactions, block.occupancy)
        for block in result.blocks.values())
    averages = block_report(result.blocks, scenario)

    length_pct, time_pct = berth_occupancy(
        result.berth_history, scenario.quay_length_m, horizon_ticks)

    weekly, annual = teu_totals(result.teu_moved, horizon_hours)

    truck_util = [utilization(m, horizon_ticks) for m in result.truck_meters.values()]

    qs = result.queue_stats
    truck_queue = TruckQueueKpi(
        requests=qs.requests,
        served=qs.served,
        mean_wait_min=(qs.wait_sum / TICKS_PER_MINUTE / qs.served) if qs.served else 0.0,
        time_avg_queue_len=qs.length_integral / horizon_ticks,
        arrival_rate_per_min=qs.requests / (horizon_ticks / TICKS_PER_MINUTE),
    )

    return KpiReport(
        scenario_name=scenario.name,
        schema_version=scenario.schema_version,
        seed=result.seed,
        horizon_hours=horizon_hours,
        quay_cranes=cranes,
        quay_total_throughput=sum(c.throughput for c in cranes),
        yard_cranes=tuple(yard_rows),
        blocks=block_rows,
        category_mean_transactions=tuple(sorted(averages.items())),
        truck_throughput=result.truck_throughput(),
        truck_mean_utilization_pct=mean(truck_util) if truck_util else 0.0,
        berth_occupancy_pct=length_pct,
        berth_time_occupancy_pct=time_pct,
        ships=ship_times(result.ships),
        teu_moved=result.teu_moved,
        weekly_teu=weekly,
        annual_teu=annual,
        moves_discharge=result.moves_discharge,
        moves_load=result.moves_load,
        generated_moves=result.generated_moves,
        truck_queue=truck_queue,
        overflow_events=result.overflow_events,
    )
