"""Deterministic discrete-event core: clock, event calendar, resource meters.

Simulation time is kept as an integer count of ticks (1 tick = 1 microminute,
so one minute is 1,000,000 ticks).  Keeping time integral makes event ordering
and busy-time accounting exact: state-time accumulators telescope without
floating-point drift, and two runs with the same inputs replay the same event
sequence bit for bit on any platform.

The calendar pops events in (time, insertion sequence) order, so ties are
broken first-in-first-out and never by payload identity.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, Iterator

TICKS_PER_MINUTE = 1_000_000
TICKS_PER_HOUR = 60 * TICKS_PER_MINUTE


def ticks_from_minutes(minutes: float) -> int:
    """Quantize a duration or instant given in minutes to integer ticks."""
    return round(minutes * TICKS_PER_MINUTE)


def ticks_from_hours(hours: float) -> int:
    return round(hours * TICKS_PER_HOUR)


def minutes_from_ticks(t: int) -> float:
    return t / TICKS_PER_MINUTE


def hours_from_ticks(t: int) -> float:
    return t / TICKS_PER_HOUR


class SchedulingInPastError(ValueError):
    """Raised when an event is scheduled before the calendar clock."""


class TimeReversalError(ValueError):
    """Raised when a meter is asked to account time before its state entry."""


@dataclass(frozen=True, slots=True)
class Event:
    """A scheduled work item.

    ``id`` is unique per calendar and issued in monotone order; ``seq`` is the
    insertion sequence number used for FIFO tie-breaking at equal times.  The
    payload is opaque to the kernel.
    """

    id: int
    time: int
    seq: int
    payload: Any


class EventCalendar:
    """Time-ordered event queue with a monotone clock.

    Cancellation is lazy: cancelled ids are skipped on pop.  The pop order is
    a total order over (time, seq), so any interleaving of schedule/cancel
    calls replays identically.
    """

    def __init__(self) -> None:
        self.clock: int = 0
        self._heap: list[tuple[int, int, int, Any]] = []
        self._next_id = 0
        self._next_seq = 0
        self._pending: set[int] = set()

    def __len__(self) -> int:
        return len(self._pending)

    def schedule(self, time: int, payload: Any) -> int:
        """Enqueue ``payload`` at ``time`` (ticks); returns the event id."""
        if time < self.clock:
            raise SchedulingInPastError(
                f"cannot schedule at t={time} before clock t={self.clock}"
            )
        event_id = self._next_id
        self._next_id += 1
        seq = self._next_seq
        self._next_seq += 1
        heapq.heappush(self._heap, (time, seq, event_id, payload))
        self._pending.add(event_id)
        return event_id

    def cancel(self, event_id: int) -> bool:
        """Drop a pending event.  False if unknown or already popped."""
        if event_id in self._pending:
            self._pending.discard(event_id)
            return True
        return False

    def next_event(self) -> tuple[int, Any] | None:
        """Pop the earliest event, advance the clock to it; None when empty."""
        while self._heap:
            time, _seq, event_id, payload = heapq.heappop(self._heap)
            if event_id not in self._pending:
                continue  # cancelled
            self._pending.discard(event_id)
            self.clock = time
            return time, payload
        return None

    def peek_time(self) -> int | None:
        """Time of the earliest pending event without popping it."""
        while self._heap:
            time, _seq, event_id, _payload = self._heap[0]
            if event_id in self._pending:
                return time
            heapq.heappop(self._heap)
        return None

    def drain(self) -> Iterator[tuple[int, Any]]:
        """Iterate next_event() until the calendar is empty."""
        while True:
            item = self.next_event()
            if item is None:
                return
            yield item


IDLE = "idle"
BUSY = "busy"
WAITING = "waiting"

METER_STATES = (IDLE, BUSY, WAITING)


class ResourceMeter:
    """State-time and move accounting for one piece of equipment.

    Tracks accumulated ticks in each of idle/busy/waiting plus a completed
    move counter.  Because time is integral the conservation identity
    ``sum(accumulators) == flush_time - created_at`` holds exactly after a
    flush.
    """

    __slots__ = (
        "resource_id",
        "state",
        "created_at",
        "entered_at",
        "acc",
        "moves",
        "waiting_episodes",
        "flushed_at",
    )

    def __init__(self, resource_id: str, at: int = 0, state: str = IDLE) -> None:
        if state not in METER_STATES:
            raise ValueError(f"unknown meter state {state!r}")
        self.resource_id = resource_id
        self.state = state
        self.created_at = at
        self.entered_at = at
        self.acc: dict[str, int] = {IDLE: 0, BUSY: 0, WAITING: 0}
        self.moves = 0
        self.waiting_episodes = 0
        self.flushed_at: int | None = None

    def transition(self, new_state: str, at: int) -> None:
        """Accrue time since the last state entry, then enter ``new_state``."""
        if new_state not in METER_STATES:
            raise ValueError(f"unknown meter state {new_state!r}")
        if at < self.entered_at:
            raise TimeReversalError(
                f"{self.resource_id}: transition at t={at} before state entry "
                f"t={self.entered_at}"
            )
        self.acc[self.state] += at - self.entered_at
        if new_state == WAITING and self.state != WAITING:
            self.waiting_episodes += 1
        self.state = new_state
        self.entered_at = at
        self.flushed_at = None

    def count_move(self, n: int = 1) -> None:
        """Record ``n`` completed moves; the counter never decreases."""
        if n < 0:
            raise ValueError("move count increment must be non-negative")
        self.moves += n

    def flush(self, at: int) -> None:
        """Accrue time up to ``at`` without changing state."""
        if at < self.entered_at:
            raise TimeReversalError(
                f"{self.resource_id}: flush at t={at} before state entry "
                f"t={self.entered_at}"
            )
        self.acc[self.state] += at - self.entered_at
        self.entered_at = at
        self.flushed_at = at

    @property
    def busy_ticks(self) -> int:
        return self.acc[BUSY]

    @property
    def waiting_ticks(self) -> int:
        return self.acc[WAITING]

    @property
    def idle_ticks(self) -> int:
        return self.acc[IDLE]

    def total_ticks(self) -> int:
        return self.acc[IDLE] + self.acc[BUSY] + self.acc[WAITING]
