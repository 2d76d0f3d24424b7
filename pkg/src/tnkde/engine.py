"""The TN-KDE query engine: per-lixel density assembly across edges,
aggregation boundaries, lixel sharing, and batch orchestration.

Density semantics: F(q) sums, over every edge carrying events, the
contributions of its two endpoint directions and two temporal halves. The
breakpoint rule assigns each event to exactly one endpoint direction and the
inclusive temporal window assigns it to exactly one half, so every in-range
event is counted exactly once. Events on the query lixel's own edge are
evaluated per event with the direct along-edge distance included.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import aggindex
from .aggindex import (EARLIER, LATER, SIDE_A, SIDE_B, SpatialBound,
                       build_ada, build_dynamic_forest, build_range_forest,
                       required_depth)
from .events import EdgeEventStore, temporal_window
from .kernels import (SUPPORTED_KINDS, KernelError, PairedBasis, kernel_value)
from .network import (DistanceTable, Edge, RoadNetwork, bounded_dijkstra,
                      edge_lixels)

METHODS = ("sps", "ada", "rfs", "drfs")

_INF = math.inf


@dataclass(frozen=True)
class QuerySpec:
    t: int
    b_s: float
    b_t: float
    g: float
    method: str = "rfs"
    spatial_kernel: str = "triangular"
    temporal_kernel: str = "triangular"
    lixel_sharing: bool = False
    depth: int = 0  # drfs layers; 0 = deep enough for exact answers
    quantize: int = 0  # drfs H_0; 0 = full depth

    def validate(self) -> None:
        if self.b_s <= 0 or self.b_t <= 0 or self.g <= 0:
            raise ValueError("b_s, b_t and g must be positive")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        for kind in (self.spatial_kernel, self.temporal_kernel):
            if kind not in SUPPORTED_KINDS:
                if kind == "gaussian":
                    raise KernelError(
                        "gaussian kernel is not supported: no exact finite "
                        "decomposition exists")
                raise KernelError(f"unsupported kernel kind {kind!r}")
        if self.depth and self.quantize and not 1 <= self.quantize <= self.depth:
            raise ValueError("quantized depth must satisfy 1 <= H_0 <= H")


@dataclass
class DensityField:
    spec: QuerySpec
    lixels: list
    values: list[float]

    def rows(self):
        order = sorted(range(len(self.lixels)),
                       key=lambda i: (self.lixels[i].edge_id, self.lixels[i].index))
        for i in order:
            lx = self.lixels[i]
            yield lx.edge_id, lx.index, lx.center, self.values[i]


@dataclass
class EdgeClassification:
    """Partition of a source edge's candidate edges for lixel sharing."""

    dominated: dict[str, str] = field(default_factory=dict)  # edge id -> side
    out_of_bandwidth: list[str] = field(default_factory=list)
    remaining: list[str] = field(default_factory=list)


class DifferenceAccumulator:
    """Second-order difference slots over the lixels of one source edge.

    Piecewise-arithmetic sequences are added with O(1) updates each and
    recovered by two prefix-summation passes, which is pure addition and
    therefore exact up to float associativity.
    """

    def __init__(self, n: int):
        self.n = n
        self.d2 = [0.0] * (n + 2)

    def add_linear(self, lo: int, hi: int, start: float, step: float) -> None:
        """Add start, start+step, ... on 0-based inclusive [lo, hi]."""
        if hi < lo:
            return
        d2 = self.d2
        d2[lo] += start
        d2[lo + 1] += step - start
        last = start + (hi - lo) * step
        d2[hi + 1] -= step + last
        d2[hi + 2] += last

    def add_point(self, i: int, value: float) -> None:
        self.add_linear(i, i, value, 0.0)

    def recover(self) -> list[float]:
        first = 0.0
        out = []
        acc = 0.0
        for i in range(self.n):
            first += self.d2[i]
            acc += first
            out.append(acc)
        return out


def recover_from_differences(acc: DifferenceAccumulator) -> list[float]:
    return acc.recover()


def aggregation_boundary(u_near: float, u_far: float, edge_length: float,
                         b_s: float) -> float:
    """Largest admissible event distance from the near endpoint.

    Bounded by the spatial bandwidth and by the breakpoint past which events
    are closer to the far endpoint; negative means the side is empty.
    """
    return min(b_s - u_near, (-u_near + u_far + edge_length) / 2.0)


class Engine:
    """Executes TN-KDE queries over one network and event set.

    Distance tables, lixels and forest indexes are cached across queries;
    ADA indexes are deliberately rebuilt for every query window. All caches
    are read-only during per-edge work, so source edges may be processed in
    parallel.
    """

    def __init__(self, net: RoadNetwork, stores: dict[str, EdgeEventStore],
                 threads: int = 1):
        self.net = net
        self.stores = stores
        self.threads = max(1, threads)
        self._tables: dict[str, DistanceTable] = {}
        self._table_radius = 0.0
        self._candidates: dict[str, list] = {}
        self._lixels: dict[float, dict[str, list]] = {}
        self._bases: dict[tuple, PairedBasis] = {}
        self._forests: dict[tuple, object] = {}
        self._dyn: dict[tuple, object] = {}
        self._max_edge_len = max((e.length for e in net.edges), default=0.0)
        self.stats: Counter = Counter()
        self.edge_probe_counts: dict[str, int] = {}
        self.last_classification: dict[str, EdgeClassification] = {}

    # -- caches ------------------------------------------------------------

    def _ensure_radius(self, specs) -> None:
        radius = max(s.b_s for s in specs) + self._max_edge_len
        if radius > self._table_radius:
            self._tables.clear()
            self._candidates.clear()
            self._table_radius = radius

    def _table(self, vertex: str) -> DistanceTable:
        tbl = self._tables.get(vertex)
        if tbl is None:
            tbl = bounded_dijkstra(self.net, vertex, self._table_radius)
            self._tables[vertex] = tbl
            self.stats["dijkstra_runs"] += 1
        return tbl

    def _edge_lixels(self, g: float, edge_id: str):
        per_edge = self._lixels.get(g)
        if per_edge is None:
            per_edge = {e.id: edge_lixels(e, g) for e in self.net.edges}
            self._lixels[g] = per_edge
        return per_edge[edge_id]

    def _paired(self, spec: QuerySpec, edge_id: str) -> PairedBasis:
        origin = self.stores[edge_id].min_time
        key = (spec.spatial_kernel, spec.b_s, spec.temporal_kernel, spec.b_t,
               origin)
        basis = self._bases.get(key)
        if basis is None:
            basis = PairedBasis(spec.spatial_kernel, spec.b_s,
                                spec.temporal_kernel, spec.b_t, origin)
            self._bases[key] = basis
        return basis

    def _forest(self, spec: QuerySpec, edge: Edge, side: str):
        basis = self._paired(spec, edge.id)
        key = (edge.id, side) + basis.index_key()
        forest = self._forests.get(key)
        if forest is None:
            forest = build_range_forest(self.stores[edge.id], basis, side,
                                        edge.length)
            self._forests[key] = forest
            self.stats["index_builds"] += 1
        return forest

    def _dyn_forest(self, spec: QuerySpec, edge: Edge, side: str):
        basis = self._paired(spec, edge.id)
        store = self.stores[edge.id]
        depth = spec.depth or required_depth(store, edge.length)
        key = (edge.id, side, depth) + basis.index_key()
        forest = self._dyn.get(key)
        if forest is None:
            forest = build_dynamic_forest(store, basis, depth, edge.length, side)
            self._dyn[key] = forest
            self.stats["index_builds"] += 1
        return forest

    # -- per-query context -------------------------------------------------

    def _new_ctx(self, spec: QuerySpec) -> dict:
        return {"spec": spec, "windows": {}, "ada": {}, "win_events": {},
                "totals": {}}

    def _window(self, ctx, edge_id: str):
        win = ctx["windows"].get(edge_id)
        if win is None:
            spec = ctx["spec"]
            win = temporal_window(self.stores[edge_id], spec.t, spec.b_t)
            ctx["windows"][edge_id] = win
        return win

    def _window_events(self, ctx, edge_id: str):
        evs = ctx["win_events"].get(edge_id)
        if evs is None:
            store = self.stores[edge_id]
            lo, hi, _ = self._window(ctx, edge_id)
            evs = [(store.events[i].offset, store.events[i].time)
                   for i in store.time_order[lo - 1:hi]]
            ctx["win_events"][edge_id] = evs
        return evs

    def _probe(self, ctx, edge: Edge, half: str, bound: SpatialBound,
               partial_full: bool = False) -> tuple:
        """Aggregated vector of in-window events on one temporal half whose
        distance from edge endpoint a falls within the bound."""
        spec = ctx["spec"]
        lo, hi, split = self._window(ctx, edge.id)
        t_lo, t_hi = (lo, split) if half == EARLIER else (split + 1, hi)
        basis = self._paired(spec, edge.id)
        if t_lo > t_hi:
            return (0.0,) * (basis.size + 1)
        if spec.method == "ada":
            idx = ctx["ada"].get(edge.id)
            if idx is None:
                idx = build_ada(self.stores[edge.id], (lo, hi, split), basis,
                                edge.length)
                ctx["ada"][edge.id] = idx
                self.stats["index_builds"] += 1
            return idx.query(bound, SIDE_A, half)
        if spec.method == "rfs":
            forest = self._forest(spec, edge, SIDE_A)
            vec = forest.query(t_lo, t_hi, bound)
            self.stats["forest_visits"] += forest.last_visits
            self.stats["forest_queries"] += 1
            return vec
        if spec.method == "drfs":
            forest = self._dyn_forest(spec, edge, SIDE_A)
            h0 = spec.quantize or None
            return forest.query(t_lo, t_hi, bound, h0, partial_full)
        raise ValueError(f"method {spec.method!r} has no aggregation index")

    def _window_total(self, ctx, edge: Edge, half: str) -> tuple:
        """Whole-edge window vector, cached per query (lixel-independent)."""
        key = (edge.id, half)
        vec = ctx["totals"].get(key)
        if vec is None:
            vec = self._probe(ctx, edge, half, SpatialBound(_INF, True))
            ctx["totals"][key] = vec
        return vec

    def _edge_window_vector(self, ctx, edge: Edge, half: str) -> tuple:
        """Whole-edge aggregated vector for one window half (LS root probe)."""
        spec = ctx["spec"]
        basis = self._paired(spec, edge.id)
        if spec.method == "sps":
            store = self.stores[edge.id]
            lo, hi, split = self._window(ctx, edge.id)
            t_lo, t_hi = (lo, split) if half == EARLIER else (split + 1, hi)
            acc = (0.0,) * (basis.size + 1)
            for i in store.time_order[t_lo - 1:t_hi]:
                ev = store.events[i]
                acc = aggindex._vadd(acc, (1.0,) + tuple(
                    basis.event_vector(ev.offset, ev.time)))
            return acc
        return self._window_total(ctx, edge, half)

    # -- density assembly --------------------------------------------------

    def _target_contribution(self, ctx, edge: Edge, u_c: float, u_d: float,
                             forced_side: str | None = None) -> float:
        """Contribution of one target edge to one lixel's density."""
        spec = ctx["spec"]
        basis = self._paired(spec, edge.id)
        t = spec.t
        total = 0.0
        len_e = edge.length
        bw_c = spec.b_s - u_c
        bp_c = (-u_c + u_d + len_e) / 2.0 if u_c < _INF else -_INF
        # Side c takes offsets up to r_c; side d takes the complement of an
        # excluded prefix in the same side-a index, evaluated through the
        # reflected query vector at w = u_d + len. Using one index for both
        # sides makes the partition float-exact: a boundary event lands on
        # exactly one side no matter how the bound arithmetic rounds.
        # When the breakpoint binds the excluded prefix is side c itself
        # (everything past it is in bandwidth via v_d); when the bandwidth
        # binds the two sides are separated by an out-of-bandwidth gap and
        # the prefix is the via-d bandwidth cut.
        breakpoint_binds = u_c < _INF and bp_c <= bw_c
        r_c = min(bw_c, bp_c)
        if forced_side == SIDE_A:
            r_c, breakpoint_binds = bw_c, False
        side_c_on = forced_side != SIDE_B and u_c < _INF and r_c >= 0
        side_d_on = forced_side is None and u_d < _INF
        bw_d = spec.b_s - u_d
        if breakpoint_binds:
            excluded = SpatialBound(r_c, True) if r_c >= 0 else None
        elif bw_d >= 0:
            excluded = SpatialBound(len_e - bw_d, False)
        else:
            side_d_on = False
            excluded = None
        # Quantized queries must over-approximate the excluded prefix (so the
        # complement under-approximates); exact queries can reuse side c's
        # probe for it.
        exact = spec.method != "drfs" or not spec.quantize
        for half in (EARLIER, LATER):
            vec_c = None
            if side_c_on:
                vec_c = self._probe(ctx, edge, half, SpatialBound(r_c, True))
                if vec_c[0]:
                    q = basis.query_vector(u_c, t, half)
                    total += sum(a * b for a, b in zip(q, vec_c[1:]))
            if side_d_on:
                vec = self._window_total(ctx, edge, half)
                if excluded is not None:
                    if breakpoint_binds and vec_c is not None and exact:
                        out = vec_c
                    else:
                        out = self._probe(ctx, edge, half, excluded,
                                          partial_full=True)
                    vec = tuple(a - b for a, b in zip(vec, out))
                if vec[0]:
                    q = basis.query_vector(u_d + len_e, t, half,
                                           reflected=True)
                    total += sum(a * b for a, b in zip(q, vec[1:]))
        return total

    def _sps_contribution(self, ctx, edge: Edge, u_c: float, u_d: float) -> float:
        spec = ctx["spec"]
        total = 0.0
        len_e = edge.length
        b_s, b_t, t = spec.b_s, spec.b_t, spec.t
        ks, kt = spec.spatial_kernel, spec.temporal_kernel
        for off, time in self._window_events(ctx, edge.id):
            d = min(u_c + off, u_d + (len_e - off))
            if d <= b_s:
                total += kernel_value(ks, d / b_s) * kernel_value(
                    kt, abs(t - time) / b_t)
        return total

    def _same_edge_contribution(self, ctx, edge: Edge, center: float,
                                d_ab: float) -> float:
        spec = ctx["spec"]
        total = 0.0
        len_e = edge.length
        b_s, b_t, t = spec.b_s, spec.b_t, spec.t
        ks, kt = spec.spatial_kernel, spec.temporal_kernel
        for off, time in self._window_events(ctx, edge.id):
            d = abs(center - off)
            via = d_ab + min(center + (len_e - off), (len_e - center) + off)
            if via < d:
                d = via
            if d <= b_s:
                total += kernel_value(ks, d / b_s) * kernel_value(
                    kt, abs(t - time) / b_t)
        return total

    # -- lixel sharing -----------------------------------------------------

    def ls_candidate_positions(self, src: Edge, target: Edge,
                               table_a: DistanceTable, table_b: DistanceTable,
                               centers: list[float]) -> list[int]:
        """Lixel indices (1-based) where d(q_i, v_c) - d(q_i, v_d) can peak.

        The break points are located on the actual lixel centers, which also
        covers the shorter final lixel of an edge.
        """
        l_e = len(centers)
        out = set()
        for vertex in (target.a, target.b):
            da = table_a.get(vertex)
            db = table_b.get(vertex)
            if da == _INF and db == _INF:
                continue
            x = (src.length + db - da) / 2.0
            k = bisect_right(centers, x)
            for i in (k, k + 1):
                out.add(min(max(i, 1), l_e))
        return sorted(out) if out else [1]

    def classify_edges(self, ctx, src: Edge, candidates: list[Edge],
                       table_a: DistanceTable, table_b: DistanceTable,
                       centers: list[float]) -> EdgeClassification:
        spec = ctx["spec"]
        b_s = spec.b_s
        cls = EdgeClassification()
        ends = (centers[0], centers[-1])
        for edge in candidates:
            store = self.stores[edge.id]
            routes = {}
            for vertex in (edge.a, edge.b):
                da, db = table_a.get(vertex), table_b.get(vertex)
                routes[vertex] = (da, db)
                # min over lixels of d(q_i, vertex) occurs at an endpoint lixel
            near = min(
                min(c + routes[v][0], (src.length - c) + routes[v][1])
                for v in (edge.a, edge.b) for c in ends)
            if near > b_s:
                cls.out_of_bandwidth.append(edge.id)
                continue
            side = None
            if spec.lixel_sharing and spec.spatial_kernel == "triangular":
                cand = self.ls_candidate_positions(src, edge, table_a, table_b,
                                                   centers)
                for near_v, far_v, near_side, extent in (
                        (edge.a, edge.b, SIDE_A,
                         edge.length - 2.0 * store.max_offset),
                        (edge.b, edge.a, SIDE_B,
                         2.0 * store.min_offset - edge.length)):
                    da, db = routes[near_v]
                    loop = da + src.length + db
                    if loop / 2.0 + edge.length > b_s:
                        continue
                    worst = -_INF
                    for i in cand:
                        c = centers[i - 1]
                        u_near = min(c + da, (src.length - c) + db)
                        fa, fb = routes[far_v]
                        u_far = min(c + fa, (src.length - c) + fb)
                        worst = max(worst, u_near - u_far)
                    if worst <= extent:
                        side = near_side
                        break
            if side is not None:
                cls.dominated[edge.id] = side
            else:
                cls.remaining.append(edge.id)
        return cls

    def dominated_contribution(self, ctx, edge: Edge, side: str) -> tuple[float, float]:
        """(alpha, beta) of F_e(q) = alpha * d(q, v_near) + beta.

        Valid only for the triangular spatial kernel, whose query side is
        linear in distance; the whole-edge window vectors come from one root
        probe per temporal half.
        """
        spec = ctx["spec"]
        if spec.spatial_kernel != "triangular":
            raise KernelError(
                "dominated-edge sharing requires the triangular spatial kernel")
        basis = self._paired(spec, edge.id)
        beta = 0.0
        val1 = 0.0
        for half in (EARLIER, LATER):
            vec = self._edge_window_vector(ctx, edge, half)
            if not vec[0]:
                continue
            if side == SIDE_A:
                q0 = basis.query_vector(0.0, spec.t, half)
                q1 = basis.query_vector(1.0, spec.t, half)
            else:
                # Events are indexed by distance from v_a; seen from v_b the
                # spatial argument is (d(q, v_b) + len) - v.
                q0 = basis.query_vector(edge.length, spec.t, half,
                                        reflected=True)
                q1 = basis.query_vector(edge.length + 1.0, spec.t, half,
                                        reflected=True)
            beta += sum(a * b for a, b in zip(q0, vec[1:]))
            val1 += sum(a * b for a, b in zip(q1, vec[1:]))
        return val1 - beta, beta

    def _accumulate_dominated(self, acc: DifferenceAccumulator, spec: QuerySpec,
                              centers: list[float], src_len: float,
                              d_near_a: float, d_near_b: float,
                              alpha: float, beta: float) -> None:
        l_e = len(centers)
        g = spec.g

        def dval(i):
            c = centers[i]
            return min(c + d_near_a, (src_len - c) + d_near_b)

        if l_e == 1:
            acc.add_point(0, alpha * dval(0) + beta)
            return
        x = (src_len + d_near_b - d_near_a) / 2.0
        m = bisect_right(centers, x)  # 0-based count of via-a lixels
        reg_last = l_e - 2  # centers are exactly (i + 0.5) * g through here
        hi1 = min(m - 1, reg_last)
        if hi1 >= 0:
            acc.add_linear(0, hi1, alpha * (centers[0] + d_near_a) + beta,
                           alpha * g)
        lo2 = max(m, 0)
        if lo2 <= reg_last:
            acc.add_linear(lo2, reg_last,
                           alpha * ((src_len - centers[lo2]) + d_near_b) + beta,
                           -alpha * g)
        acc.add_point(l_e - 1, alpha * dval(l_e - 1) + beta)

    # -- top level ---------------------------------------------------------

    def _candidate_edges(self, src: Edge, table_a: DistanceTable,
                         table_b: DistanceTable) -> list:
        """Event-carrying edges with an endpoint inside either distance
        table, with their endpoint distances; cached across queries since
        the tables are radius-stable. Sorted by edge id."""
        cached = self._candidates.get(src.id)
        if cached is not None:
            return cached
        seen = set()
        out = []
        for table in (table_a, table_b):
            for vi in table.indices():
                for _, _, pos in self.net.adjacency[vi]:
                    if pos in seen:
                        continue
                    seen.add(pos)
                    edge = self.net.edges[pos]
                    if edge.id == src.id or edge.id not in self.stores:
                        continue
                    ic = self.net.vertex_index[edge.a]
                    idx = self.net.vertex_index[edge.b]
                    out.append((edge,
                                table_a.get_index(ic), table_b.get_index(ic),
                                table_a.get_index(idx), table_b.get_index(idx)))
        out.sort(key=lambda c: c[0].id)
        self._candidates[src.id] = out
        return out

    def _edge_densities(self, src: Edge, ctx) -> list[float]:
        spec = ctx["spec"]
        table_a = self._table(src.a)
        table_b = self._table(src.b)
        lixels = self._edge_lixels(spec.g, src.id)
        centers = [lx.center for lx in lixels]
        l_e = len(lixels)
        ib = self.net.vertex_index[src.b]
        d_ab = table_a.get_index(ib)

        candidates = self._candidate_edges(src, table_a, table_b)

        densities = [0.0] * l_e
        use_ls = spec.lixel_sharing and spec.spatial_kernel == "triangular"
        probe_count = 0

        if use_ls:
            cls = self.classify_edges(ctx, src, [c[0] for c in candidates],
                                      table_a, table_b, centers)
            self.last_classification[src.id] = cls
            acc = DifferenceAccumulator(l_e)
            for eid, side in cls.dominated.items():
                edge = self.net.edge_by_id[eid]
                near_v = edge.a if side == SIDE_A else edge.b
                alpha, beta = self.dominated_contribution(ctx, edge, side)
                self._accumulate_dominated(
                    acc, spec, centers, src.length,
                    table_a.get(near_v), table_b.get(near_v), alpha, beta)
            recovered = acc.recover()
            keep = set(cls.remaining)
            remaining = [c for c in candidates if c[0].id in keep]
        else:
            recovered = None
            remaining = candidates

        # Drop edges whose temporal window is empty or whose nearest corner
        # route exceeds the spatial bandwidth before the per-lixel loop.
        c0 = centers[0]
        cl = src.length - centers[-1]
        active = []
        for cand in remaining:
            edge, dca, dcb, dda, ddb = cand
            lo, hi, _ = self._window(ctx, edge.id)
            if hi < lo:
                continue
            if min(c0 + dca, cl + dcb, c0 + dda, cl + ddb) > spec.b_s:
                continue
            active.append(cand)

        for i, lx in enumerate(lixels):
            f = recovered[i] if recovered is not None else 0.0
            center = lx.center
            rev = src.length - center
            for edge, dca, dcb, dda, ddb in active:
                u_c = min(center + dca, rev + dcb)
                u_d = min(center + dda, rev + ddb)
                if min(u_c, u_d) > spec.b_s:
                    continue
                if spec.method == "sps":
                    f += self._sps_contribution(ctx, edge, u_c, u_d)
                else:
                    probe_count += 1
                    f += self._target_contribution(ctx, edge, u_c, u_d)
            if src.id in self.stores:
                f += self._same_edge_contribution(ctx, src, center, d_ab)
            densities[i] = f
        self.edge_probe_counts[src.id] = probe_count
        return densities

    def run(self, spec: QuerySpec) -> DensityField:
        spec.validate()
        self._ensure_radius([spec])
        ctx = self._new_ctx(spec)
        edges = sorted(self.net.edges, key=lambda e: e.id)
        lixels: list = []
        values: list[float] = []
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(lambda e: self._edge_densities(e, ctx),
                                        edges))
        else:
            results = [self._edge_densities(e, ctx) for e in edges]
        for edge, dens in zip(edges, results):
            lixels.extend(self._edge_lixels(spec.g, edge.id))
            values.extend(dens)
        self.stats["queries"] += 1
        return DensityField(spec, lixels, values)

    def run_batch(self, specs: list[QuerySpec]) -> list[DensityField]:
        """Run several queries, reusing forest indexes and distance tables.

        All specs must share the lixel length and kernel configuration; ADA
        and SPS redo their per-window work per spec by design.
        """
        if not specs:
            return []
        first = specs[0]
        for s in specs:
            s.validate()
            if s.g != first.g or s.spatial_kernel != first.spatial_kernel \
                    or s.temporal_kernel != first.temporal_kernel:
                raise ValueError(
                    "batch specs must share lixel length and kernel kinds")
        self._ensure_radius(specs)
        return [self.run(s) for s in specs]


def compute_lixel_density(engine: Engine, lixel, spec: QuerySpec) -> float:
    """Density of a single lixel under a spec (convenience wrapper)."""
    spec.validate()
    engine._ensure_radius([spec])
    ctx = engine._new_ctx(spec)
    edge = engine.net.edge_by_id[lixel.edge_id]
    densities = engine._edge_densities(edge, ctx)
    for lx, value in zip(engine._edge_lixels(spec.g, edge.id), densities):
        if lx.index == lixel.index:
            return value
    raise ValueError(f"lixel index {lixel.index} not on edge {lixel.edge_id!r}")
