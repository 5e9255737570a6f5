"""The terminal process network: berthing, quay cranes, trucks, yard cranes.

One `simulate()` call replays one seeded scenario: ships berth on the
continuous quay (first fit, FCFS queue), quay cranes work a shared per-ship
move pool, trucks shuttle boxes between quay and yard blocks, and yard cranes
stack or dig them.  A crane that finishes a lift with no truck available goes
into the `waiting` state until one frees up; that time is what the waiting
KPIs measure.

Counting convention: a move is counted at the instant the container crosses
the quay line (lands on a truck for discharge, lands on the ship for a load).
The quay crane and the truck that carried the box are credited at that same
instant, in their own meters, which is why total crane throughput and total
truck throughput agree exactly at any horizon cut.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .arrivals import ArrivalPlan, generate_arrivals
from .entities import (
    AT_CRANE,
    DEPARTED,
    EXPORT,
    IN_BLOCK,
    ON_SHIP,
    ON_TRUCK,
    Container,
    LocationError,
    Quay,
    Ship,
    YardBlock,
)
from .kernel import (
    BUSY,
    IDLE,
    WAITING,
    EventCalendar,
    ResourceMeter,
    ticks_from_hours,
    ticks_from_minutes,
)
from .policies import resolve_policy
from .randomness import RngStream
from .scenario import ScenarioConfig

STREAM_NAMES = ("arrivals", "ship", "quay-cycle", "truck-travel", "yard-cycle", "dwell")


def make_streams(seed: int) -> dict[str, RngStream]:
    return {name: RngStream(name, seed) for name in STREAM_NAMES}


@dataclass(slots=True)
class BerthInterval:
    ship_id: str
    position: float
    length_m: float
    berthed_at: int
    departed_at: int | None = None


@dataclass(slots=True)
class QueueStats:
    """Truck-request queue measurements for the Little's-law check."""

    requests: int = 0
    served: int = 0
    wait_sum: int = 0       # ticks waited by served requests
    length_integral: int = 0  # integral of queue length over time, in ticks
    _length: int = 0
    _last_change: int = 0

    def enqueue(self, at: int) -> None:
        self.length_integral += self._length * (at - self._last_change)
        self._length += 1
        self._last_change = at

    def dequeue(self, at: int, created: int) -> None:
        self.length_integral += self._length * (at - self._last_change)
        self._length -= 1
        self._last_change = at
        self.wait_sum += at - created
        self.served += 1

    def close(self, at: int) -> None:
        self.length_integral += self._length * (at - self._last_change)
        self._last_change = at


@dataclass
class SimulationResult:
    scenario: ScenarioConfig
    seed: int
    horizon_ticks: int
    ships: list[Ship]
    containers: dict[int, Container]
    blocks: dict[str, YardBlock]
    crane_meters: dict[str, ResourceMeter]
    truck_meters: dict[str, ResourceMeter]
    rtg_meters: dict[str, ResourceMeter]
    top_lift_meters: list[ResourceMeter]
    berth_history: list[BerthInterval]
    queue_stats: QueueStats
    teu_moved: int
    moves_discharge: int
    moves_load: int
    overflow_events: int
    generated_moves: int
    assignment_log: list[list]

    @property
    def quay_moves(self) -> int:
        return self.moves_discharge + self.moves_load

    def crane_throughput(self) -> int:
        return sum(m.moves for m in self.crane_meters.values())

    def truck_throughput(self) -> int:
        return sum(m.moves for m in self.truck_meters.values())


class _ShipRun:
    """Operational state of one berthed ship."""

    __slots__ = ("ship", "discharge", "manifest_len", "discharged_done",
                 "loads_total", "loads_started", "loads_lifted", "staged", "gang")

    def __init__(self, ship: Ship, discharge: deque[Container], loads_total: int):
        self.ship = ship
        self.discharge = discharge
        self.manifest_len = len(discharge)
        self.discharged_done = 0
        self.loads_total = loads_total
        self.loads_started = 0
        self.loads_lifted = 0
        self.staged: deque[Container] = deque()
        self.gang: list[str] = []

    @property
    def complete(self) -> bool:
        return (self.discharged_done == self.manifest_len
                and self.loads_lifted == self.loads_total)

    def pullable_work(self) -> int:
        return len(self.discharge) + (self.loads_total - self.loads_started)

    def remaining_moves(self) -> int:
        return (self.manifest_len - self.discharged_done
                + self.loads_total - self.loads_lifted)


class _Engine:
    def __init__(self, scenario: ScenarioConfig, seed: int, plan: ArrivalPlan,
                 horizon: int, streams: dict[str, RngStream]):
        self.scenario = scenario
        self.seed = seed
        self.plan = plan
        self.horizon = horizon
        self.streams = streams
        self.cal = EventCalendar()

        self.quay = Quay(scenario.quay_length_m, scenario.berth_clearance_m)
        self.blocks: dict[str, YardBlock] = {
            spec.id: YardBlock(spec.id, spec.category, spec.capacity,
                               spec.distance_class, spec.crane_group)
            for spec in scenario.blocks
        }
        self.block_order = [spec.id for spec in scenario.blocks]

        self.crane_ids = [f"QC{i:02d}" for i in range(1, scenario.quay_cranes + 1)]
        self.crane_meters = {cid: ResourceMeter(cid) for cid in self.crane_ids}
        self.crane_ship: dict[str, str | None] = {cid: None for cid in self.crane_ids}
        threshold = scenario.policies.long_ship_threshold_m
        self.dedicated_crane = (
            self.crane_ids[-1] if threshold is not None and self.crane_ids else None)

        self.truck_ids = [f"T{i:02d}" for i in range(1, scenario.trucks + 1)]
        self.truck_meters = {tid: ResourceMeter(tid) for tid in self.truck_ids}
        self.idle_trucks: list[str] = list(self.truck_ids)
        # the dedicated long-ship crane's requests jump this queue, so the
        # premium berth keeps its service level when tractors run short
        self.truck_requests: deque[tuple] = deque()
        self.truck_requests_high: deque[tuple] = deque()
        self.queue_stats = QueueStats()

        self.rtg_meters: dict[str, ResourceMeter] = {}
        self.rtg_queues: dict[str, deque] = {}
        for spec in scenario.blocks:
            if spec.crane_group == "rtg":
                self.rtg_meters[spec.id] = ResourceMeter(f"RTG-{spec.id}")
                self.rtg_queues[spec.id] = deque()
        self.top_meters = [ResourceMeter(f"TL{i:02d}")
                           for i in range(1, scenario.top_lift_group + 1)]
        self.top_idle = list(range(len(self.top_meters)))
        self.top_queue: deque = deque()

        self.runs: dict[str, _ShipRun] = {}
        self.berth_queue: deque[Ship] = deque()
        self.berth_history: list[BerthInterval] = []
        self._open_intervals: dict[str, BerthInterval] = {}

        self.dest_block: dict[int, str] = {}
        self.storage_cursor: dict[str, int] = {}
        self.overflow_discharge: dict[str, deque] = {}
        self.overflow_landside: dict[str, deque] = {}
        self.overflow_events = 0

        self.teu_moved = 0
        self.moves_discharge = 0
        self.moves_load = 0
        # cranes holding a discharged box that still awaits a truck; they may
        # not pick up new work until the handoff happens
        self.crane_blocked: set[str] = set()
        # (crane, ship, berth position, start, end) per assignment episode,
        # for the non-crossing audit
        self.assignment_log: list[list] = []
        self._open_assignment: dict[str, list] = {}
        self._reassign_pending = False

        self._berth_rule = resolve_policy(scenario.policies, "berth")
        self._crane_rule = resolve_policy(scenario.policies, "crane")
        self._truck_rule = resolve_policy(scenario.policies, "truck")
        self._storage_rule = resolve_policy(scenario.policies, "storage")
        self._travel = scenario.durations.travel()
        self._regular_cycle = scenario.durations.quay_cycle_min
        self._dedicated_cycle = (scenario.durations.dedicated_quay_cycle_min
                                 or scenario.durations.quay_cycle_min)

    # --- run loop -----------------------------------------------------------

    def run(self) -> SimulationResult:
        for when, container_id in self.plan.export_arrivals:
            self.cal.schedule(when, ("export", self.plan.containers[container_id]))
        for ship in self.plan.ships:
            self.cal.schedule(ship.arrival, ("ship", ship))

        while True:
            next_time = self.cal.peek_time()
            if next_time is None or next_time > self.horizon:
                break
            time, payload = self.cal.next_event()
            self._dispatch(time, payload)
            while self._reassign_pending:
                self._reassign_pending = False
                self._reassign_cranes(time)

        for meter in self.crane_meters.values():
            meter.flush(self.horizon)
        for meter in self.truck_meters.values():
            meter.flush(self.horizon)
        for meter in self.rtg_meters.values():
            meter.flush(self.horizon)
        for meter in self.top_meters:
            meter.flush(self.horizon)
        self.queue_stats.close(self.horizon)
        for episode in self._open_assignment.values():
            episode[4] = self.horizon

        return SimulationResult(
            scenario=self.scenario,
            seed=self.seed,
            horizon_ticks=self.horizon,
            ships=self.plan.ships,
            containers=self.plan.containers,
            blocks=self.blocks,
            crane_meters=self.crane_meters,
            truck_meters=self.truck_meters,
            rtg_meters=self.rtg_meters,
            top_lift_meters=self.top_meters,
            berth_history=self.berth_history,
            queue_stats=self.queue_stats,
            teu_moved=self.teu_moved,
            moves_discharge=self.moves_discharge,
            moves_load=self.moves_load,
            overflow_events=self.overflow_events,
            generated_moves=self.plan.total_generated_moves(),
            assignment_log=self.assignment_log,
        )

    def _dispatch(self, t: int, payload: tuple) -> None:
        kind = payload[0]
        if kind == "lift":
            self._on_lift_done(t, payload[1], payload[2], payload[3])
        elif kind == "truck_done":
            self._on_truck_free(t, payload[1])
        elif kind == "store_arrive":
            self._on_store_arrive(t, payload[1])
        elif kind == "yard_done":
            self._on_yard_done(t, payload[1], payload[2])
        elif kind == "load_arrive":
            self._on_load_arrive(t, payload[1], payload[2])
        elif kind == "dwell":
            self._on_dwell_out(t, payload[1])
        elif kind == "ship":
            self._on_ship_arrival(t, payload[1])
        elif kind == "export":
            self._on_export_arrival(t, payload[1])
        else:  # pragma: no cover
            raise RuntimeError(f"unknown event {kind!r}")

    # --- berthing -----------------------------------------------------------

    def _on_ship_arrival(self, t: int, ship: Ship) -> None:
        position = self._berth_rule(self.quay, ship, self.scenario.policies)
        if position is None:
            self.berth_queue.append(ship)
            return
        self._moor(t, ship, position)
        self._reassign_pending = True

    def _moor(self, t: int, ship: Ship, position: float) -> None:
        self.quay.moor(ship, position)
        ship.berthed_at = t
        interval = BerthInterval(ship.id, position, ship.length_m, t)
        self.berth_history.append(interval)
        self._open_intervals[ship.id] = interval
        discharge = deque(self.plan.containers[cid] for cid in ship.discharge_ids)
        run = _ShipRun(ship, discharge, ship.load_demand)
        self.runs[ship.id] = run
        if run.complete:  # a ship with no work berths and departs immediately
            self._depart_ship(t, run)
            return
        # exports already stacked can be dug out right away
        for container_id in self.plan.ship_exports.get(ship.id, ()):
            box = self.plan.containers[container_id]
            if box.location == IN_BLOCK:
                self._enqueue_yard(t, self.blocks[box.block_id], ("retrieve", box))

    def _depart_ship(self, t: int, run: _ShipRun) -> None:
        ship = run.ship
        ship.departed_at = t
        for crane_id in run.gang:
            self.crane_ship[crane_id] = None
            self.crane_meters[crane_id].transition(IDLE, t)
            self._open_assignment.pop(crane_id)[4] = t
        run.gang.clear()
        del self.runs[ship.id]
        self.quay.unmoor(ship)
        self._open_intervals.pop(ship.id).departed_at = t
        while self.berth_queue:
            head = self.berth_queue[0]
            position = self._berth_rule(self.quay, head, self.scenario.policies)
            if position is None:
                break  # strict FCFS: later ships do not overtake the head
            self.berth_queue.popleft()
            self._moor(t, head, position)
        self._reassign_pending = True

    # --- crane assignment ---------------------------------------------------

    def _is_long(self, ship: Ship) -> bool:
        threshold = self.scenario.policies.long_ship_threshold_m
        return threshold is not None and ship.length_m >= threshold

    def _non_crossing_ok(self, crane_id: str, ship: Ship) -> bool:
        crane_index = self.crane_ids.index(crane_id)
        for other_id, other_ship_id in self.crane_ship.items():
            if other_ship_id is None or other_ship_id == ship.id:
                continue
            other_ship = self.runs[other_ship_id].ship
            left_of = other_ship.berth_position < ship.berth_position
            if left_of != (self.crane_ids.index(other_id) < crane_index):
                return False
        return True

    def _candidate_cranes(self, ship: Ship) -> list[str]:
        total = len(self.crane_ids)
        if total == 0:
            return []
        center = ship.berth_position + ship.length_m / 2.0
        ideal = center / self.quay.length_m * (total - 1)
        # prefer the least-worked crane, then the one nearest the ship; the
        # first keeps per-crane load even, the second limits crossing conflicts
        regular = [cid for cid in self.crane_ids if cid != self.dedicated_crane]
        regular.sort(key=lambda cid: (self.crane_meters[cid].moves,
                                      abs(self.crane_ids.index(cid) - ideal),
                                      self.crane_ids.index(cid)))
        if self.dedicated_crane is not None and self._is_long(ship):
            return [self.dedicated_crane] + regular
        return regular

    def _reassign_cranes(self, t: int) -> None:
        ordered = sorted(self.runs.values(),
                         key=lambda run: (run.ship.berthed_at, run.ship.id))
        for run in ordered:
            if run.pullable_work() <= 0:
                continue
            desired = self._crane_rule(run.remaining_moves(), self.scenario.policies)
            while len(run.gang) < desired:
                chosen = None
                for candidate in self._candidate_cranes(run.ship):
                    if self.crane_ship[candidate] is None \
                            and self._non_crossing_ok(candidate, run.ship):
                        chosen = candidate
                        break
                if chosen is None:
                    break
                self.crane_ship[chosen] = run.ship.id
                run.gang.append(chosen)
                run.gang.sort(key=self.crane_ids.index)
                episode = [chosen, run.ship.id, run.ship.berth_position, t, None]
                self.assignment_log.append(episode)
                self._open_assignment[chosen] = episode
                self._start_crane_job(t, chosen)

    def _start_crane_job(self, t: int, crane_id: str) -> None:
        run = self.runs[self.crane_ship[crane_id]]
        meter = self.crane_meters[crane_id]
        if run.discharge:
            box = run.discharge.popleft()
            box.move_to(AT_CRANE)
            meter.transition(BUSY, t)
            self._schedule_lift(t, crane_id, box, "discharge")
        elif run.staged:
            box = run.staged.popleft()
            box.move_to(AT_CRANE)
            run.loads_started += 1
            meter.transition(BUSY, t)
            self._schedule_lift(t, crane_id, box, "load")
        elif run.loads_started < run.loads_total:
            meter.transition(WAITING, t)  # export boxes still on their way
        else:
            self.crane_ship[crane_id] = None
            run.gang.remove(crane_id)
            meter.transition(IDLE, t)
            self._open_assignment.pop(crane_id)[4] = t
            self._reassign_pending = True

    def _schedule_lift(self, t: int, crane_id: str, box: Container, op: str) -> None:
        dist = (self._dedicated_cycle if crane_id == self.dedicated_crane
                else self._regular_cycle)
        duration = ticks_from_minutes(dist.sample(self.streams["quay-cycle"]))
        self.cal.schedule(t + duration, ("lift", crane_id, box, op))

    def _on_lift_done(self, t: int, crane_id: str, box: Container, op: str) -> None:
        run = self.runs[self.crane_ship[crane_id]]
        if op == "discharge":
            self._request_truck(t, ("discharge", box, crane_id, t))
        else:
            box.move_to(ON_SHIP)
            self._count_load_move(box, crane_id)
            run.loads_lifted += 1
            self._after_crane_move(t, crane_id, run)

    def _after_crane_move(self, t: int, crane_id: str, run: _ShipRun) -> None:
        if run.complete:
            self._depart_ship(t, run)
        else:
            self._start_crane_job(t, crane_id)

    # --- trucks -------------------------------------------------------------

    def _request_priority(self, request: tuple) -> bool:
        if self.dedicated_crane is None:
            return False
        if request[0] == "discharge":
            return request[2] == self.dedicated_crane
        run = self.runs.get(request[1].ship_id)
        return run is not None and self.dedicated_crane in run.gang

    def _request_truck(self, t: int, request: tuple) -> None:
        self.queue_stats.requests += 1
        if self.idle_trucks:
            truck_id = self._truck_rule(
                [(tid, self.truck_meters[tid].entered_at) for tid in self.idle_trucks])
            self.idle_trucks.remove(truck_id)
            self.queue_stats.served += 1
            self._serve_request(t, request, truck_id)
        else:
            self.queue_stats.enqueue(t)
            if self._request_priority(request):
                self.truck_requests_high.append(request)
            else:
                self.truck_requests.append(request)
            if request[0] == "discharge":
                self.crane_meters[request[2]].transition(WAITING, t)
                self.crane_blocked.add(request[2])

    def _on_truck_free(self, t: int, truck_id: str) -> None:
        self.truck_meters[truck_id].transition(IDLE, t)
        self._take_next_request(t, truck_id)

    def _take_next_request(self, t: int, truck_id: str) -> None:
        if self.truck_requests_high:
            request = self.truck_requests_high.popleft()
        elif self.truck_requests:
            request = self.truck_requests.popleft()
        else:
            self.idle_trucks.append(truck_id)
            return
        self.queue_stats.dequeue(t, request[3])
        self._serve_request(t, request, truck_id)

    def _serve_request(self, t: int, request: tuple, truck_id: str) -> None:
        kind, box = request[0], request[1]
        if kind == "discharge":
            crane_id = request[2]
            self.crane_blocked.discard(crane_id)
            self._discharge_handoff(t, crane_id, box, truck_id)
            self._after_crane_move(t, crane_id, self.runs[self.crane_ship[crane_id]])
        else:  # load: drive out empty, come back with the box
            self.truck_meters[truck_id].transition(BUSY, t)
            block = self.blocks[request[2]]
            legs = self._travel_ticks(block) + self._travel_ticks(block)
            self.cal.schedule(t + legs, ("load_arrive", box, truck_id))

    def _travel_ticks(self, block: YardBlock) -> int:
        dist = self._travel[block.distance_class]
        return ticks_from_minutes(dist.sample(self.streams["truck-travel"]))

    def _discharge_handoff(self, t: int, crane_id: str, box: Container,
                           truck_id: str) -> None:
        box.move_to(ON_TRUCK)
        box.carried_by = truck_id
        self.crane_meters[crane_id].count_move()
        self.truck_meters[truck_id].count_move()
        self.teu_moved += box.teu
        self.moves_discharge += 1
        run = self.runs[self.crane_ship[crane_id]]
        run.discharged_done += 1
        self.truck_meters[truck_id].transition(BUSY, t)
        block = self._select_block(box.category)
        if block is None:
            self.overflow_events += 1
            self.overflow_discharge.setdefault(box.category, deque()).append(
                (box, truck_id))
            return
        block.inbound += 1
        self.dest_block[box.id] = block.id
        leg_out = self._travel_ticks(block)
        leg_back = self._travel_ticks(block)
        self.cal.schedule(t + leg_out, ("store_arrive", box))
        self.cal.schedule(t + leg_out + leg_back, ("truck_done", truck_id))

    # --- yard ---------------------------------------------------------------

    def _select_block(self, category: str) -> YardBlock | None:
        candidates = [self.blocks[bid] for bid in self.block_order
                      if self.blocks[bid].category == category
                      and self.blocks[bid].has_space()]
        if not candidates:
            return None
        cursor = self.storage_cursor.get(category, 0)
        self.storage_cursor[category] = cursor + 1
        return self._storage_rule(candidates, cursor)

    def _on_store_arrive(self, t: int, box: Container) -> None:
        block = self.blocks[self.dest_block[box.id]]
        self._enqueue_yard(t, block, ("store", box))

    def _enqueue_yard(self, t: int, block: YardBlock, job: tuple) -> None:
        job = (job[0], job[1], block.id)
        if block.crane_group == "rtg":
            meter = self.rtg_meters[block.id]
            if meter.state == IDLE and not self.rtg_queues[block.id]:
                self._start_yard_job(t, ("rtg", block.id), job)
            else:
                self.rtg_queues[block.id].append(job)
        else:
            if self.top_idle:
                unit = min(self.top_idle,
                           key=lambda i: (self.top_meters[i].entered_at, i))
                self.top_idle.remove(unit)
                self._start_yard_job(t, ("top", unit), job)
            else:
                self.top_queue.append(job)

    def _yard_meter(self, unit_key: tuple) -> ResourceMeter:
        if unit_key[0] == "rtg":
            return self.rtg_meters[unit_key[1]]
        return self.top_meters[unit_key[1]]

    def _start_yard_job(self, t: int, unit_key: tuple, job: tuple) -> None:
        self._yard_meter(unit_key).transition(BUSY, t)
        duration = ticks_from_minutes(
            self.scenario.durations.yard_cycle_min.sample(self.streams["yard-cycle"]))
        self.cal.schedule(t + duration, ("yard_done", unit_key, job))

    def _on_yard_done(self, t: int, unit_key: tuple, job: tuple) -> None:
        op, box, block_id = job
        block = self.blocks[block_id]
        meter = self._yard_meter(unit_key)
        meter.count_move()
        if op == "store":
            block.store_completed()
            self.dest_block.pop(box.id, None)
            box.move_to(IN_BLOCK, block_id)
            if box.category == EXPORT:
                run = self.runs.get(box.ship_id)
                if run is not None:
                    self._enqueue_yard(t, block, ("retrieve", box))
            else:
                dwell = ticks_from_minutes(
                    self.scenario.durations.import_dwell_min.sample(
                        self.streams["dwell"]))
                self.cal.schedule(t + dwell, ("dwell", box))
        else:  # retrieve: box now sits on the block apron awaiting a truck
            block.retrieve_completed()
            self._request_truck(t, ("load", box, block_id, t))
            self._retry_overflow(t, block.category)
        # next job for this unit
        if unit_key[0] == "rtg":
            queue = self.rtg_queues[block_id]
            if queue:
                self._start_yard_job(t, unit_key, queue.popleft())
            else:
                meter.transition(IDLE, t)
        else:
            if self.top_queue:
                self._start_yard_job(t, unit_key, self.top_queue.popleft())
            else:
                meter.transition(IDLE, t)
                self.top_idle.append(unit_key[1])

    def _on_load_arrive(self, t: int, box: Container, truck_id: str) -> None:
        box.move_to(ON_TRUCK)
        box.carried_by = truck_id
        self.truck_meters[truck_id].transition(IDLE, t)
        self._take_next_request(t, truck_id)
        run = self.runs.get(box.ship_id)
        if run is None:
            raise LocationError(
                f"export container {box.id} arrived for unberthed ship {box.ship_id}")
        run.staged.append(box)
        for crane_id in run.gang:
            if (run.staged and crane_id not in self.crane_blocked
                    and self.crane_meters[crane_id].state == WAITING):
                self._start_crane_job(t, crane_id)

    def _on_export_arrival(self, t: int, box: Container) -> None:
        block = self._select_block(EXPORT)
        if block is None:
            self.overflow_events += 1
            self.overflow_landside.setdefault(EXPORT, deque()).append(box)
            return
        block.inbound += 1
        self.dest_block[box.id] = block.id
        self._enqueue_yard(t, block, ("store", box))

    def _on_dwell_out(self, t: int, box: Container) -> None:
        if box.location != IN_BLOCK:
            return
        block = self.blocks[box.block_id]
        box.move_to(DEPARTED)
        block.depart()
        self._retry_overflow(t, block.category)

    def _retry_overflow(self, t: int, category: str) -> None:
        held = self.overflow_discharge.get(category)
        while held:
            block = self._select_block(category)
            if block is None:
                break
            box, truck_id = held.popleft()
            block.inbound += 1
            self.dest_block[box.id] = block.id
            leg_out = self._travel_ticks(block)
            leg_back = self._travel_ticks(block)
            self.cal.schedule(t + leg_out, ("store_arrive", box))
            self.cal.schedule(t + leg_out + leg_back, ("truck_done", truck_id))
        waiting = self.overflow_landside.get(category)
        while waiting:
            block = self._select_block(category)
            if block is None:
                break
            box = waiting.popleft()
            block.inbound += 1
            self.dest_block[box.id] = block.id
            self._enqueue_yard(t, block, ("store", box))

    # load moves are counted when the box lands on the ship
    def _count_load_move(self, box: Container, crane_id: str) -> None:
        self.crane_meters[crane_id].count_move()
        if box.carried_by is not None:
            self.truck_meters[box.carried_by].count_move()
        self.teu_moved += box.teu
        self.moves_load += 1


def simulate(scenario: ScenarioConfig, seed: int,
             horizon_hours: float | None = None) -> SimulationResult:
    """Run one seeded replication of a scenario."""
    horizon = ticks_from_hours(
        horizon_hours if horizon_hours is not None else scenario.horizon_hours)
    streams = make_streams(seed)
    plan = generate_arrivals(scenario, horizon, streams["arrivals"], streams["ship"])
    return _Engine(scenario, seed, plan, horizon, streams).run()


def validate_result(result: SimulationResult) -> list[str]:
    """Check the run-level invariants; returns a list of violations."""
    problems: list[str] = []
    horizon = result.horizon_ticks

    crane_total = result.crane_throughput()
    truck_total = result.truck_throughput()
    if crane_total != truck_total:
        problems.append(
            f"flow conservation: crane throughput {crane_total} != "
            f"truck throughput {truck_total}")
    if crane_total != result.quay_moves:
        problems.append(
            f"flow conservation: crane throughput {crane_total} != "
            f"quay moves {result.quay_moves}")

    # a box mid-lift (at-crane) has not crossed the quay line yet, so it is
    # neither counted as a move nor in transit
    stored = sum(1 for c in result.containers.values()
                 if c.location == IN_BLOCK and c.category != EXPORT)
    departed = sum(1 for c in result.containers.values()
                   if c.location == DEPARTED)
    in_transit = sum(1 for c in result.containers.values()
                     if c.location == ON_TRUCK and c.category != EXPORT)
    if result.moves_discharge != stored + departed + in_transit:
        problems.append(
            f"discharge conservation: {result.moves_discharge} moved != "
            f"{stored} stored + {departed} departed + {in_transit} in transit")

    all_meters = (list(result.crane_meters.values())
                  + list(result.truck_meters.values())
                  + list(result.rtg_meters.values())
                  + list(result.top_lift_meters))
    for meter in all_meters:
        if meter.total_ticks() != horizon:
            problems.append(
                f"meter conservation: {meter.resource_id} accounts "
                f"{meter.total_ticks()} of {horizon} ticks")
        if meter.moves < 0:
            problems.append(f"negative move counter on {meter.resource_id}")

    for block in result.blocks.values():
        if not 0 <= block.occupancy <= block.capacity:
            problems.append(
                f"block {block.id} occupancy {block.occupancy} outside "
                f"[0, {block.capacity}]")
        if block.transactions < 0:
            problems.append(f"block {block.id} negative transactions")

    # berthed intervals must be disjoint and inside the quay at all times;
    # at equal times departures free their stretch before arrivals take it
    open_intervals: list[tuple[float, float, str]] = []
    events = []
    for entry in result.berth_history:
        events.append((entry.berthed_at, 1, entry))
        events.append((entry.departed_at if entry.departed_at is not None
                       else horizon + 1, 0, entry))
    events.sort(key=lambda item: (item[0], item[1]))
    for _when, what, entry in events:
        if what == 0:
            open_intervals = [iv for iv in open_intervals if iv[2] != entry.ship_id]
            continue
        if entry.position < 0 or entry.position + entry.length_m \
                > result.scenario.quay_length_m + 1e-9:
            problems.append(f"ship {entry.ship_id} berthed outside the quay")
        for start, length, other in open_intervals:
            if entry.position < start + length and start < entry.position + entry.length_m:
                problems.append(
                    f"quay overlap between {entry.ship_id} and {other}")
        open_intervals.append((entry.position, entry.length_m, entry.ship_id))

    for ship in result.ships:
        if ship.berthed_at is not None and ship.berthed_at < ship.arrival:
            problems.append(f"ship {ship.id} berthed before arrival")
        if ship.departed_at is not None and (
                ship.berthed_at is None or ship.departed_at < ship.berthed_at):
            problems.append(f"ship {ship.id} departed before berthing")

    # non-crossing: concurrently assigned cranes must follow quay order
    crane_order = {meter_id: index
                   for index, meter_id in enumerate(sorted(result.crane_meters))}
    episodes = sorted(result.assignment_log, key=lambda e: e[3])
    active: list[list] = []
    for episode in episodes:
        crane_id, ship_id, position, start, end = episode
        active = [e for e in active if e[4] > start]
        for other in active:
            if other[1] == ship_id:
                continue
            if (position < other[2]) != (crane_order[crane_id] < crane_order[other[0]]):
                problems.append(
                    f"crane crossing: {crane_id}@{position} vs {other[0]}@{other[2]}")
        active.append(episode)

    return problems
