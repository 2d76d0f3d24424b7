"""Road network graph, bounded shortest paths, lixel generation and shared distances.

Edges are abstract weighted segments; vertex and edge ids are opaque strings
mapped to dense integer indices at load time. The optional geometry attached
to an edge is carried through for export only and never enters any distance
computation.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass


class GraphError(ValueError):
    """Malformed graph input."""


@dataclass(frozen=True)
class Edge:
    id: str
    a: str
    b: str
    length: float
    geometry: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class Lixel:
    """A fixed-length segment of an edge; densities are reported at its center."""

    edge_id: str
    index: int  # 1-based within the edge
    center: float  # offset of the center from endpoint a, meters
    length: float


class RoadNetwork:
    """Undirected weighted graph with dense internal indexing.

    Immutable after construction; safe for concurrent reads.
    """

    def __init__(self, edges: list[Edge]):
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.edge_by_id: dict[str, Edge] = {}
        self.vertex_index: dict[str, int] = {}
        vertices: list[str] = []
        for e in self.edges:
            if e.id in self.edge_by_id:
                raise GraphError(f"duplicate edge id {e.id!r}")
            self.edge_by_id[e.id] = e
            for v in (e.a, e.b):
                if v not in self.vertex_index:
                    self.vertex_index[v] = len(vertices)
                    vertices.append(v)
        self.vertices: tuple[str, ...] = tuple(vertices)
        # adjacency[i] = list of (neighbor dense index, edge length, edge position)
        self.adjacency: list[list[tuple[int, float, int]]] = [
            [] for _ in self.vertices
        ]
        for pos, e in enumerate(self.edges):
            ia, ib = self.vertex_index[e.a], self.vertex_index[e.b]
            self.adjacency[ia].append((ib, e.length, pos))
            self.adjacency[ib].append((ia, e.length, pos))

    def endpoint_indices(self, edge: Edge) -> tuple[int, int]:
        return self.vertex_index[edge.a], self.vertex_index[edge.b]


def load_graph(records) -> RoadNetwork:
    """Build a RoadNetwork from (edge id, a, b, length[, geometry]) records.

    Rejects duplicate ids, self-loops and nonpositive or non-finite lengths.
    Directed input rows are treated as undirected edges.
    """
    edges = []
    for rec in records:
        eid, a, b = str(rec[0]), str(rec[1]), str(rec[2])
        length = float(rec[3])
        geometry = tuple(tuple(p) for p in rec[4]) if len(rec) > 4 and rec[4] else None
        if a == b:
            raise GraphError(f"edge {eid!r}: self-loop on vertex {a!r}")
        if not math.isfinite(length) or length <= 0:
            raise GraphError(f"edge {eid!r}: nonpositive length {length!r}")
        edges.append(Edge(eid, a, b, length, geometry))
    return RoadNetwork(edges)


class DistanceTable:
    """Shortest distances from one source vertex, bounded by a radius.

    Vertices farther than the radius are absent. Immutable after construction.
    """

    def __init__(self, net: RoadNetwork, source: str, radius: float,
                 dense: dict[int, float]):
        self._net = net
        self.source = source
        self.radius = radius
        self._dense = dense

    @property
    def distances(self) -> dict[str, float]:
        return {self._net.vertices[i]: d for i, d in self._dense.items()}

    def get(self, vertex: str, default: float = math.inf) -> float:
        i = self._net.vertex_index.get(vertex)
        if i is None:
            return default
        return self._dense.get(i, default)

    def get_index(self, i: int, default: float = math.inf) -> float:
        return self._dense.get(i, default)

    def __contains__(self, vertex: str) -> bool:
        i = self._net.vertex_index.get(vertex)
        return i is not None and i in self._dense

    def indices(self):
        return self._dense.keys()


def bounded_dijkstra(net: RoadNetwork, source: str, radius: float) -> DistanceTable:
    """Exact shortest distances from `source` to all vertices within `radius`.

    Heap ties are broken by the smaller dense vertex index, so the result is
    deterministic regardless of insertion order.
    """
    if source not in net.vertex_index:
        raise GraphError(f"unknown source vertex {source!r}")
    if radius < 0:
        raise GraphError(f"negative radius {radius!r}")
    src = net.vertex_index[source]
    dist: dict[int, float] = {src: 0.0}
    done: set[int] = set()
    heap: list[tuple[float, int]] = [(0.0, src)]
    adjacency = net.adjacency
    while heap:
        d, u = heapq.heappop(heap)
        if u in done or d > dist.get(u, math.inf):
            continue
        done.add(u)
        for v, w, _ in adjacency[u]:
            nd = d + w
            if nd <= radius and nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return DistanceTable(net, source, radius, dist)


def edge_lixels(edge: Edge, g: float) -> list[Lixel]:
    """Divide one edge into ceil(length/g) lixels of length g.

    The last lixel may be shorter; its center is the midpoint of its own
    segment, so lixel lengths always sum to the edge length exactly.
    """
    if g <= 0:
        raise GraphError(f"nonpositive lixel length {g!r}")
    n = max(1, math.ceil(edge.length / g))
    out = []
    for i in range(1, n + 1):
        start = (i - 1) * g
        end = min(i * g, edge.length)
        out.append(Lixel(edge.id, i, (start + end) / 2.0, end - start))
    return out


def generate_lixels(net: RoadNetwork, g: float) -> list[Lixel]:
    out: list[Lixel] = []
    for e in net.edges:
        out.extend(edge_lixels(e, g))
    return out


def sps_distance(q: Lixel, target: str, table_a: DistanceTable,
                 table_b: DistanceTable, edge_length: float) -> float:
    """Shared-shortest-path distance from a lixel center to a vertex.

    The path leaves the lixel's edge through one of its endpoints, so the
    distance is the better of the two endpoint routes. Returns +inf when both
    endpoints are outside the tables' radius.
    """
    da = table_a.get(target)
    db = table_b.get(target)
    return min(q.center + da, (edge_length - q.center) + db)
