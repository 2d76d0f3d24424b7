"""Brute-force reference densities, independent of every index code path.

The lixel center is treated as a temporary vertex splitting its edge, so
shortest distances are exact even for paths that stay inside the edge. This
module keeps its own Dijkstra on purpose: it validates the shared-path
shortcuts elsewhere and must not depend on them.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .events import EdgeEventStore
from .kernels import kernel_value
from .network import Lixel, RoadNetwork


@dataclass
class OracleResult:
    lixel: Lixel
    density: float
    contributions: list[tuple[int, float, float, float]] = field(default_factory=list)
    # (event index within its store, spatial distance, temporal gap, f value)


def _distances_from_point(net: RoadNetwork, edge_id: str, offset: float) -> list[float]:
    """Exact shortest distance from an interior edge point to every vertex."""
    edge = net.edge_by_id[edge_id]
    ia, ib = net.endpoint_indices(edge)
    dist = [math.inf] * len(net.vertices)
    dist[ia] = offset
    dist[ib] = edge.length - offset
    heap = [(dist[ia], ia), (dist[ib], ib)]
    heapq.heapify(heap)
    done = [False] * len(net.vertices)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w, _ in net.adjacency[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def brute_force_density(q: Lixel, t: int, b_s: float, b_t: float,
                        stores: dict[str, EdgeEventStore], net: RoadNetwork,
                        spatial_kernel: str, temporal_kernel: str) -> OracleResult:
    """Sum K_s(d/b_s) * K_t(|t - t_i|/b_t) over every in-range event.

    Events beyond either bandwidth contribute exactly zero; distances come
    from a dedicated shortest-path search, never from shared-path shortcuts.
    """
    dist = _distances_from_point(net, q.edge_id, q.center)
    own_edge = net.edge_by_id[q.edge_id]
    result = OracleResult(q, 0.0)
    for eid, store in stores.items():
        edge = net.edge_by_id[eid]
        ia, ib = net.endpoint_indices(edge)
        for i, ev in enumerate(store.events):
            gap = abs(t - ev.time)
            if gap > b_t:
                continue
            d = min(dist[ia] + ev.offset, dist[ib] + (edge.length - ev.offset))
            if eid == q.edge_id:
                d = min(d, abs(q.center - ev.offset))
            if d > b_s:
                continue
            f = kernel_value(spatial_kernel, d / b_s) * kernel_value(
                temporal_kernel, gap / b_t)
            result.density += f
            result.contributions.append((i, d, gap, f))
    return result
