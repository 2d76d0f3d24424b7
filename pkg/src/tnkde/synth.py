"""Reproducible synthetic road networks and clustered event sets."""
from __future__ import annotations

import math
import random


def generate_synthetic(seed: int, n_vertices: int, n_edges: int,
                       n_events: int, horizon: int,
                       cluster_fraction: float = 0.7):
    """Build a connected random graph and an event set, deterministically.

    The graph is a random spanning tree plus random extra edges; lengths are
    uniform in [50, 250] meters. Events mix point clusters (hotspot edges
    with tight offset spread) with a uniform background; timestamps are
    uniform integers in [0, horizon].

    Returns (graph_records, event_records) matching the CSV row shapes.
    """
    if n_vertices < 2:
        raise ValueError("need at least 2 vertices")
    if n_edges < n_vertices - 1:
        raise ValueError(
            f"{n_edges} edges cannot connect {n_vertices} vertices")
    if n_events < 0 or horizon < 0:
        raise ValueError("event count and horizon must be nonnegative")
    rng = random.Random(seed)
    names = [f"v{i}" for i in range(n_vertices)]
    order = list(range(n_vertices))
    rng.shuffle(order)

    graph_records = []
    pairs = set()

    def add_edge(i, j):
        eid = f"e{len(graph_records)}"
        length = round(rng.uniform(50.0, 250.0), 3)
        graph_records.append((eid, names[i], names[j], length))
        pairs.add((min(i, j), max(i, j)))

    for k in range(1, n_vertices):
        add_edge(order[k], order[rng.randrange(k)])
    attempts = 0
    while len(graph_records) < n_edges and attempts < 50 * n_edges:
        attempts += 1
        i, j = rng.randrange(n_vertices), rng.randrange(n_vertices)
        if i == j or (min(i, j), max(i, j)) in pairs:
            continue
        add_edge(i, j)
    if len(graph_records) < n_edges:
        raise ValueError(
            f"cannot place {n_edges} distinct edges on {n_vertices} vertices")

    n_hot = max(1, len(graph_records) // 50)
    hotspots = [(rng.randrange(len(graph_records)),
                 rng.random()) for _ in range(n_hot)]
    event_records = []
    for _ in range(n_events):
        if rng.random() < cluster_fraction:
            pos, frac = hotspots[rng.randrange(n_hot)]
            eid, _, _, length = graph_records[pos]
            offset = min(max(rng.gauss(frac * length, length * 0.05), 0.0),
                         length)
        else:
            pos = rng.randrange(len(graph_records))
            eid, _, _, length = graph_records[pos]
            offset = rng.uniform(0.0, length)
        t = rng.randint(0, horizon) if horizon else 0
        event_records.append((eid, round(offset, 3), t))
    return graph_records, event_records


def write_graph_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("edge_id,from,to,length_m\n")
        for eid, a, b, length in records:
            fh.write(f"{eid},{a},{b},{length}\n")


def write_events_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("edge_id,offset_m,timestamp\n")
        for eid, offset, t in records:
            fh.write(f"{eid},{offset},{t}\n")


def graph_diameter_hint(n_vertices: int) -> int:
    """Rough spanning-tree depth estimate, handy for picking bandwidths."""
    return max(2, int(2 * math.sqrt(n_vertices)))
