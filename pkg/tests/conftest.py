"""Shared helpers: random instance construction and brute-force references."""
from __future__ import annotations

import random
import sys

from tnkde.aggindex import SIDE_A, _side_distance
from tnkde.events import EdgeEventStore, ingest_events
from tnkde.network import RoadNetwork, load_graph
from tnkde.synth import generate_synthetic


def make_instance(seed: int, n_vertices: int, n_edges: int, n_events: int,
                  horizon: int = 1000, cluster_fraction: float = 0.7
                  ) -> tuple[RoadNetwork, dict[str, EdgeEventStore]]:
    """Random connected instance with the edge count clamped to feasibility."""
    n_edges = max(n_vertices - 1,
                  min(n_edges, n_vertices * (n_vertices - 1) // 2))
    graph, events = generate_synthetic(
        seed=seed, n_vertices=n_vertices, n_edges=n_edges, n_events=n_events,
        horizon=horizon, cluster_fraction=cluster_fraction)
    net = load_graph(graph)
    return net, ingest_events(events, net)


def single_edge_store(rng: random.Random, n: int, length: float = 100.0,
                      horizon: int = 1000, sorted_times: bool = False
                      ) -> tuple[RoadNetwork, EdgeEventStore]:
    """One-edge network with n random events, for index-level tests."""
    net = load_graph([("e0", "u", "v", length, None)])
    times = sorted(rng.randint(0, horizon) for _ in range(n)) \
        if sorted_times else [rng.randint(0, horizon) for _ in range(n)]
    records = [("e0", round(rng.uniform(0.0, length), 3), t) for t in times]
    stores = ingest_events(records, net)
    return net, stores["e0"]


def brute_vector(store: EdgeEventStore, basis, t_lo: int, t_hi: int,
                 bound, side: str = SIDE_A,
                 edge_length: float = 100.0) -> tuple[float, ...]:
    """Reference aggregation: scan the time-ordered window directly."""
    acc = [0.0] * (basis.size + 1)
    for i in store.time_order[t_lo - 1:t_hi]:
        ev = store.events[i]
        v = _side_distance(ev.offset, side, edge_length)
        if bound.admits(v):
            acc[0] += 1.0
            for k, x in enumerate(basis.event_vector(v, ev.time)):
                acc[k + 1] += x
    return tuple(acc)


def close(a: float, b: float, rel: float = 1e-9, abs_floor: float = 1e-12) -> bool:
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_floor)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
