"""Exact temporal network kernel density estimation over road networks."""

from .aggindex import (AdaIndex, DynamicRangeForest, RangeForest,
                       SpatialBound, StreamingOrderError, build_ada,
                       build_dynamic_forest, build_range_forest,
                       query_ada, query_dynamic, query_range_forest,
                       required_depth)
from .engine import (DensityField, DifferenceAccumulator, Engine, QuerySpec,
                     aggregation_boundary, compute_lixel_density)
from .events import (EdgeEventStore, Event, EventError, ingest_events,
                     temporal_window)
from .kernels import (AggVector, KernelBasis, KernelError, PairedBasis,
                      eval_density, event_term, kernel_value, product_basis,
                      spatial_basis, temporal_basis)
from .network import (DistanceTable, Edge, GraphError, Lixel, RoadNetwork,
                      bounded_dijkstra, edge_lixels, generate_lixels,
                      load_graph, sps_distance)
from .oracle import OracleResult, brute_force_density
from .synth import generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AdaIndex", "AggVector", "DensityField", "DifferenceAccumulator",
    "DistanceTable", "DynamicRangeForest", "Edge", "EdgeEventStore",
    "Engine", "Event", "EventError", "GraphError", "KernelBasis",
    "KernelError", "Lixel", "OracleResult", "PairedBasis", "QuerySpec",
    "RangeForest", "RoadNetwork", "SpatialBound", "StreamingOrderError",
    "aggregation_boundary", "bounded_dijkstra", "brute_force_density",
    "build_ada", "build_dynamic_forest", "build_range_forest",
    "compute_lixel_density", "edge_lixels", "eval_density", "event_term",
    "generate_lixels", "generate_synthetic", "ingest_events", "kernel_value",
    "load_graph", "product_basis", "query_ada", "query_dynamic",
    "query_range_forest", "required_depth", "spatial_basis", "sps_distance",
    "temporal_basis", "temporal_window",
]
