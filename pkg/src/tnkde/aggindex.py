"""Per-edge aggregation indexes: ADA prefix arrays, the persistent range
forest (RFS) and the dynamic range forest (DRFS).

All three answer the same question: the accumulated event-side vector of the
events on one edge whose time index falls in a window and whose distance from
one endpoint falls in a spatial range. Internally vectors are plain tuples
with the event count prepended at component 0; the public query functions
wrap results in AggVector.
"""
from __future__ import annotations

import json
from bisect import bisect_left, bisect_right

from .events import EdgeEventStore
from .kernels import AggVector

SIDE_A = "a"
SIDE_B = "b"
EARLIER = "earlier"
LATER = "later"
BOTH = "both"


def _vadd(x: tuple, y: tuple) -> tuple:
    return tuple(a + b for a, b in zip(x, y))


def _vsub(x: tuple, y: tuple) -> tuple:
    return tuple(a - b for a, b in zip(x, y))


def _wrap(vec: tuple) -> AggVector:
    return AggVector(vec[1:], vec[0])


def _side_distance(offset: float, side: str, edge_length: float) -> float:
    return offset if side == SIDE_A else edge_length - offset


def _event_rows(store: EdgeEventStore, basis, side: str, edge_length: float):
    """(side distance, raw vector) per event, in time order."""
    rows = []
    for i in store.time_order:
        ev = store.events[i]
        v = _side_distance(ev.offset, side, edge_length)
        rows.append((v, (1.0,) + tuple(basis.event_vector(v, ev.time))))
    return rows


class SpatialBound:
    """A prefix range [0, hi] on side distances, inclusive or exclusive at hi."""

    __slots__ = ("hi", "inclusive")

    def __init__(self, hi: float, inclusive: bool = True):
        self.hi = hi
        self.inclusive = inclusive

    def admits(self, d: float) -> bool:
        return d <= self.hi if self.inclusive else d < self.hi


# ---------------------------------------------------------------------------
# ADA: per-window prefix arrays


class AdaIndex:
    """Prefix aggregation arrays for one edge, rebuilt per temporal window.

    For each endpoint direction and temporal half, the in-window events are
    sorted by distance from that endpoint and their event vectors accumulated
    into a prefix array; a query is then one binary search. Rebuilding per
    window is this baseline's defining cost profile.
    """

    def __init__(self, store: EdgeEventStore, window: tuple[int, int, int],
                 basis, edge_length: float):
        self.edge_id = store.edge_id
        self.size = basis.size + 1
        self._store = store
        self._basis = basis
        self._edge_length = edge_length
        self._window = window
        # Arrays materialize per (side, half) on first use; a query batch
        # that only ever looks at one endpoint direction pays for one.
        self._arrays: dict[tuple[str, str], tuple[list, list]] = {}

    def _build(self, side: str, half: str) -> tuple[list, list]:
        lo, hi, split = self._window
        lo_i, hi_i = (lo, split) if half == EARLIER else (split + 1, hi)
        store = self._store
        rows = []
        for i in store.time_order[lo_i - 1:hi_i]:
            ev = store.events[i]
            v = _side_distance(ev.offset, side, self._edge_length)
            rows.append((v, (1.0,) + tuple(self._basis.event_vector(v, ev.time))))
        rows.sort(key=lambda r: r[0])
        dists = [r[0] for r in rows]
        prefix = []
        acc = (0.0,) * self.size
        for _, vec in rows:
            acc = _vadd(acc, vec)
            prefix.append(acc)
        arrays = (dists, prefix)
        self._arrays[(side, half)] = arrays
        return arrays

    def query(self, bound: SpatialBound, side: str = SIDE_A,
              half: str = BOTH) -> tuple:
        if half == BOTH:
            return _vadd(self.query(bound, side, EARLIER),
                         self.query(bound, side, LATER))
        arrays = self._arrays.get((side, half))
        if arrays is None:
            arrays = self._build(side, half)
        dists, prefix = arrays
        if bound.inclusive:
            i = bisect_right(dists, bound.hi)
        else:
            i = bisect_left(dists, bound.hi)
        if i == 0:
            return (0.0,) * self.size
        return prefix[i - 1]


def build_ada(store: EdgeEventStore, window: tuple[int, int, int], basis,
              edge_length: float) -> AdaIndex:
    return AdaIndex(store, window, basis, edge_length)


def query_ada(index: AdaIndex, r_max: float, side: str = SIDE_A,
              half: str = BOTH, inclusive: bool = True) -> AggVector:
    return _wrap(index.query(SpatialBound(r_max, inclusive), side, half))


# ---------------------------------------------------------------------------
# RFS: persistent range forest


class _Node:
    __slots__ = ("lo", "hi", "dmin", "dmax", "vec", "left", "right")

    def __init__(self, lo, hi, dmin, dmax, vec, left, right):
        self.lo = lo
        self.hi = hi
        self.dmin = dmin
        self.dmax = dmax
        self.vec = vec
        self.left = left
        self.right = right


class RangeForest:
    """Persistent range trees over one edge side, one version per event.

    The tree shape is fixed by the full position-sorted event set; version i
    holds the first i events in time order and shares every unmodified
    subtree with version i-1, so each insertion allocates only one
    root-to-leaf path.
    """

    def __init__(self, store: EdgeEventStore, basis, side: str = SIDE_A,
                 edge_length: float | None = None):
        if edge_length is None:
            edge_length = max((e.offset for e in store.events), default=0.0)
        self.edge_id = store.edge_id
        self.side = side
        self.size = basis.size + 1
        self.node_count = 0
        self.last_visits = 0
        rows = _event_rows(store, basis, side, edge_length)
        # Position sort over time-ordered rows is stable, so equal offsets
        # keep time order and the leaf ranks are well defined.
        order = sorted(range(len(rows)), key=lambda i: rows[i][0])
        self._dist = [rows[i][0] for i in order]
        rank_of = [0] * len(rows)
        for rank, i in enumerate(order):
            rank_of[i] = rank
        self.n = len(rows)
        self.versions: list[_Node | None] = [None]
        root = None
        for i, (_, vec) in enumerate(rows):
            root = self._insert(root, 0, self.n - 1, rank_of[i], vec)
            self.versions.append(root)
        self._zero = (0.0,) * self.size

    def _insert(self, prev, lo, hi, rank, vec):
        self.node_count += 1
        base = prev.vec if prev is not None else (0.0,) * self.size
        node = _Node(lo, hi, self._dist[lo], self._dist[hi],
                     _vadd(base, vec), None, None)
        if lo < hi:
            mid = (lo + hi) // 2
            if rank <= mid:
                node.right = prev.right if prev is not None else None
                node.left = self._insert(
                    prev.left if prev is not None else None, lo, mid, rank, vec)
            else:
                node.left = prev.left if prev is not None else None
                node.right = self._insert(
                    prev.right if prev is not None else None, mid + 1, hi, rank, vec)
        return node

    def query(self, t_lo: int, t_hi: int, bound: SpatialBound) -> tuple:
        """Aggregate events with time index in [t_lo, t_hi] (1-based) and
        side distance within the bound, by subtracting two versions."""
        self.last_visits = 0
        if t_lo > t_hi or self.n == 0:
            return self._zero
        u_l = self.versions[t_lo - 1]
        u_r = self.versions[t_hi]
        return self._detect(u_l, u_r, bound)

    def _detect(self, u_l, u_r, bound):
        if u_r is None:
            return self._zero
        self.last_visits += 1
        hi, inclusive = bound.hi, bound.inclusive
        if u_r.dmin > hi or (u_r.dmin == hi and not inclusive):
            return self._zero
        if u_r.dmax < hi or (u_r.dmax == hi and inclusive):
            if u_l is None:
                return u_r.vec
            return _vsub(u_r.vec, u_l.vec)
        if u_r.lo == u_r.hi:
            return self._zero
        left = self._detect(u_l.left if u_l is not None else None,
                            u_r.left, bound)
        right = self._detect(u_l.right if u_l is not None else None,
                             u_r.right, bound)
        return _vadd(left, right)


def build_range_forest(store: EdgeEventStore, basis, side: str = SIDE_A,
                       edge_length: float | None = None) -> RangeForest:
    return RangeForest(store, basis, side, edge_length)


def query_range_forest(forest: RangeForest, window: tuple[int, int],
                       r_max: float, inclusive: bool = True) -> AggVector:
    lo, hi = window
    return _wrap(forest.query(lo, hi, SpatialBound(r_max, inclusive)))


# ---------------------------------------------------------------------------
# DRFS: dynamic range forest


class _DNode:
    __slots__ = ("lo", "hi", "emin", "emax", "vec", "left", "right", "events")

    def __init__(self, lo, hi, emin, emax, vec, left, right, events):
        self.lo = lo
        self.hi = hi
        self.emin = emin
        self.emax = emax
        self.vec = vec
        self.left = left
        self.right = right
        self.events = events


class StreamingOrderError(ValueError):
    """Insertion violated the nondecreasing-timestamp streaming contract."""


class DynamicRangeForest:
    """Append-only range forest whose splits follow real positions.

    The root covers [0, edge length]; a node [l, r] splits at the midpoint
    into [l, m] and (m, r], independent of which events exist, so events can
    be inserted in arrival order. Nodes are created lazily along insertion
    paths down to the current depth H; frontier leaves remember their events
    so a later `extend_layer` can continue the construction exactly as a
    deeper direct build would have.

    Coverage tests during queries use each node's per-version event extent
    (not the positional interval), which is exact for the version being
    queried and lets degenerate extents resolve without deeper layers.
    """

    def __init__(self, edge_length: float, basis, depth: int, side: str = SIDE_A):
        if depth < 1:
            raise ValueError(f"depth must be >= 1, got {depth}")
        self.edge_length = edge_length
        self.basis = basis
        self.side = side
        self.size = basis.size + 1
        self.depth = depth
        self.versions: list[_DNode | None] = [None]
        self.events: list[tuple[float, int, tuple]] = []  # (side dist, time, vec)
        self.frontier: list[_DNode] = []
        self.node_count = 0
        self.last_time: int | None = None
        self.last_visits = 0
        self._zero = (0.0,) * self.size

    @property
    def n(self) -> int:
        return len(self.events)

    def insert(self, offset: float, time: int) -> int:
        """Insert one event, returning the new version id.

        Timestamps must be nondecreasing; previous versions stay queryable.
        """
        if offset < 0 or offset > self.edge_length:
            raise ValueError(
                f"offset {offset!r} outside edge of length {self.edge_length}")
        if self.last_time is not None and time < self.last_time:
            raise StreamingOrderError(
                f"timestamp {time} older than last inserted {self.last_time}")
        self.last_time = time
        v = _side_distance(offset, self.side, self.edge_length)
        vec = (1.0,) + tuple(self.basis.event_vector(v, time))
        i = len(self.events)
        self.events.append((v, time, vec))
        self.frontier.append(None)  # type: ignore[arg-type]
        root = self._insert(self.versions[-1], 0.0, self.edge_length, 1, v, vec, i)
        self.versions.append(root)
        return len(self.versions) - 1

    def _insert(self, prev, lo, hi, layer, d, vec, i):
        self.node_count += 1
        if prev is None:
            node = _DNode(lo, hi, d, d, vec, None, None, ())
        else:
            node = _DNode(lo, hi, min(prev.emin, d), max(prev.emax, d),
                          _vadd(prev.vec, vec), None, None, ())
        if layer == self.depth:
            node.events = (prev.events if prev is not None else ()) + (i,)
            self.frontier[i] = node
            return node
        mid = (lo + hi) / 2.0
        if d <= mid:
            node.right = prev.right if prev is not None else None
            node.left = self._insert(prev.left if prev is not None else None,
                                     lo, mid, layer + 1, d, vec, i)
        else:
            node.left = prev.left if prev is not None else None
            node.right = self._insert(prev.right if prev is not None else None,
                                      mid, hi, layer + 1, d, vec, i)
        return node

    def extend_layer(self) -> None:
        """Grow the forest one layer deeper by continuing each saved
        construction at its frontier leaf.

        Replays the events in time order, so the result is node-for-node
        identical to a direct build at the deeper depth; answers of queries
        that terminated above the old depth are unchanged.
        """
        prev_at: dict[tuple[float, float], _DNode] = {}
        for i, (d, _, vec) in enumerate(self.events):
            leaf = self.frontier[i]
            key = (leaf.lo, leaf.hi)
            prev = prev_at.get(key)
            mid = (leaf.lo + leaf.hi) / 2.0
            self.node_count += 1
            if d <= mid:
                child_prev = prev.left if prev is not None else None
                child = self._extend_child(child_prev, leaf.lo, mid, d, vec, i)
                leaf.left = child
                leaf.right = prev.right if prev is not None else None
            else:
                child_prev = prev.right if prev is not None else None
                child = self._extend_child(child_prev, mid, leaf.hi, d, vec, i)
                leaf.right = child
                leaf.left = prev.left if prev is not None else None
            self.frontier[i] = child
            prev_at[key] = leaf
        self.depth += 1

    @staticmethod
    def _extend_child(prev, lo, hi, d, vec, i):
        if prev is None:
            return _DNode(lo, hi, d, d, vec, None, None, (i,))
        return _DNode(lo, hi, min(prev.emin, d), max(prev.emax, d),
                      _vadd(prev.vec, vec), None, None, prev.events + (i,))

    def query(self, t_lo: int, t_hi: int, bound: SpatialBound,
              h0: int | None = None, partial_full: bool = False) -> tuple:
        """Quantized subtraction query terminating at layer h0.

        Partially covered terminal nodes contribute zero by default, making
        the result a sub-aggregation of the exact answer; with `partial_full`
        they contribute their whole subtree, giving a super-aggregation
        instead (used to quantize set complements from the safe side).
        h0 = depth (the default) gives the exact answer whenever every
        frontier leaf has a degenerate event extent.
        """
        self.last_visits = 0
        if t_lo > t_hi:
            return self._zero
        h0 = self.depth if h0 is None else min(h0, self.depth)
        if h0 < 1:
            raise ValueError(f"quantized depth must be >= 1, got {h0}")
        u_l = self.versions[t_lo - 1]
        u_r = self.versions[t_hi]
        return self._detect(u_l, u_r, bound, 1, h0, partial_full)

    def _detect(self, u_l, u_r, bound, layer, h0, partial_full):
        if u_r is None:
            return self._zero
        self.last_visits += 1
        hi, inclusive = bound.hi, bound.inclusive
        if u_r.emin > hi or (u_r.emin == hi and not inclusive):
            return self._zero
        covered = u_r.emax < hi or (u_r.emax == hi and inclusive)
        if not covered and not (
                layer >= h0 or (u_r.left is None and u_r.right is None)):
            left = self._detect(u_l.left if u_l is not None else None,
                                u_r.left, bound, layer + 1, h0, partial_full)
            right = self._detect(u_l.right if u_l is not None else None,
                                 u_r.right, bound, layer + 1, h0, partial_full)
            return _vadd(left, right)
        if covered or partial_full:
            if u_l is None:
                return u_r.vec
            return _vsub(u_r.vec, u_l.vec)
        return self._zero


def build_dynamic_forest(store: EdgeEventStore, basis, depth: int,
                         edge_length: float, side: str = SIDE_A) -> DynamicRangeForest:
    forest = DynamicRangeForest(edge_length, basis, depth, side)
    for i in store.time_order:
        ev = store.events[i]
        forest.insert(ev.offset, ev.time)
    return forest


def insert_event(forest: DynamicRangeForest, offset: float, time: int) -> int:
    return forest.insert(offset, time)


def query_dynamic(forest: DynamicRangeForest, window: tuple[int, int],
                  r_max: float, h0: int | None = None,
                  inclusive: bool = True, partial_full: bool = False) -> AggVector:
    lo, hi = window
    return _wrap(forest.query(lo, hi, SpatialBound(r_max, inclusive), h0,
                              partial_full))


def required_depth(store: EdgeEventStore, edge_length: float,
                   cap: int = 48) -> int:
    """Depth at which every frontier leaf holds a single distinct offset.

    Events sharing one offset never separate but resolve exactly through
    their degenerate extent, so only gaps between distinct offsets matter.
    """
    offsets = sorted({e.offset for e in store.events})
    if len(offsets) <= 1 or edge_length <= 0:
        return 1
    min_gap = min(b - a for a, b in zip(offsets, offsets[1:]))
    depth = 2
    width = edge_length
    while width >= min_gap and depth < cap:
        width /= 2.0
        depth += 1
    return depth


# ---------------------------------------------------------------------------
# Snapshots

_SNAPSHOT_VERSION = "tnkde-rfs-1"


def save_snapshot(forest: RangeForest, store: EdgeEventStore,
                  basis_config: dict, path) -> None:
    """Write a forest snapshot; the structure is reconstructed on load.

    The forest shape and every vector are deterministic functions of the
    event sequence and the basis configuration, so storing those round-trips
    the index exactly.
    """
    payload = {
        "version": _SNAPSHOT_VERSION,
        "edge_id": store.edge_id,
        "side": forest.side,
        "basis": basis_config,
        "events": [[e.edge_id, e.offset, e.time] for e in store.events],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_snapshot(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("version") != _SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {payload.get('version')!r}")
    return payload
