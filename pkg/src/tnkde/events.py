"""Timestamped events pre-matched to edges, with dual position/time ordering."""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .network import RoadNetwork


class EventError(ValueError):
    """Malformed event input."""


@dataclass(frozen=True)
class Event:
    edge_id: str
    offset: float  # meters from endpoint a
    time: int  # abstract seconds


class EdgeEventStore:
    """Events on one edge, ordered both by spatial offset and by time.

    `events` preserves input order; `position_order` and `time_order` are
    permutations of event indices, stable in input order for ties. Immutable
    after ingest.
    """

    def __init__(self, edge_id: str, events: list[Event]):
        self.edge_id = edge_id
        self.events: tuple[Event, ...] = tuple(events)
        idx = range(len(events))
        self.position_order: tuple[int, ...] = tuple(
            sorted(idx, key=lambda i: events[i].offset)
        )
        self.time_order: tuple[int, ...] = tuple(
            sorted(idx, key=lambda i: events[i].time)
        )
        self.times_sorted: tuple[int, ...] = tuple(
            events[i].time for i in self.time_order
        )
        self.n = len(events)
        self.min_time: int = min((e.time for e in events), default=0)
        self.max_offset: float = max((e.offset for e in events), default=0.0)
        self.min_offset: float = min((e.offset for e in events), default=0.0)

    def by_time(self) -> list[Event]:
        return [self.events[i] for i in self.time_order]

    def by_position(self) -> list[Event]:
        return [self.events[i] for i in self.position_order]


def ingest_events(records, net: RoadNetwork) -> dict[str, EdgeEventStore]:
    """Group (edge id, offset, timestamp) records into per-edge stores.

    Offsets must lie within the edge length; timestamps must be finite
    integers. Equal offsets and equal timestamps keep input order.
    """
    grouped: dict[str, list[Event]] = {}
    for rec in records:
        eid = str(rec[0])
        edge = net.edge_by_id.get(eid)
        if edge is None:
            raise EventError(f"event references unknown edge {eid!r}")
        offset = float(rec[1])
        if not math.isfinite(offset) or offset < 0 or offset > edge.length:
            raise EventError(
                f"event offset {offset!r} outside edge {eid!r} of length {edge.length}"
            )
        t = rec[2]
        if isinstance(t, float):
            if not math.isfinite(t) or t != int(t):
                raise EventError(f"non-integer timestamp {t!r} on edge {eid!r}")
            t = int(t)
        grouped.setdefault(eid, []).append(Event(eid, offset, int(t)))
    return {eid: EdgeEventStore(eid, evs) for eid, evs in grouped.items()}


def temporal_window(store: EdgeEventStore, t: int, b_t: float) -> tuple[int, int, int]:
    """Resolve [t - b_t, t + b_t] to 1-based inclusive indices into time order.

    Returns (lo, hi, split) where split is the last index with t_i < t, so
    lo..split is the strictly-earlier half and split+1..hi the t_i >= t half.
    Both window ends are inclusive; an empty window has hi < lo.
    """
    if b_t <= 0:
        raise EventError(f"nonpositive temporal bandwidth {b_t!r}")
    times = store.times_sorted
    lo = bisect_left(times, t - b_t) + 1
    hi = bisect_right(times, t + b_t)
    split = bisect_left(times, t)
    return lo, hi, split
