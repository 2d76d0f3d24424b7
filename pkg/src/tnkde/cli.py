"""Command-line interface: run density queries, generate synthetic data,
and benchmark the query methods."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from statistics import median

from .engine import Engine, QuerySpec
from .io import (ParseError, density_checksum, load_events_csv,
                 load_graph_csv, load_queries_csv, write_benchmark_report,
                 write_density_csv, write_density_geojson)
from .kernels import KernelError
from .network import generate_lixels
from .oracle import brute_force_density
from .synth import generate_synthetic, write_events_csv, write_graph_csv

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

_DEFAULTS = {
    "method": "rfs",
    "kernel.spatial": "triangular",
    "kernel.temporal": "triangular",
    "lixel_length": 50.0,
    "depth": 0,
    "quantize": 0,
    "lixel_sharing": "off",
    "format": "csv",
    "seed": 0,
    "threads": 1,
}


@dataclass
class RunConfig:
    graph: str | None = None
    events: str | None = None
    queries: str | None = None
    method: str = "rfs"
    kernel_spatial: str = "triangular"
    kernel_temporal: str = "triangular"
    lixel_length: float = 50.0
    depth: int = 0
    quantize: int = 0
    lixel_sharing: bool = False
    output: str | None = None
    format: str = "csv"
    seed: int = 0
    threads: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, f"{key}."))
        else:
            out[key] = v
    return out


def _resolve(args) -> RunConfig:
    """Merge defaults, config file and explicit flags (flags win)."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                merged.update(_flatten(json.load(fh)))
        except OSError as exc:
            raise SystemExit(_fail(EXIT_IO, f"cannot read config: {exc}"))
        except json.JSONDecodeError as exc:
            raise SystemExit(_fail(EXIT_IO, f"bad config file: {exc}"))
    flag_map = {
        "graph": "graph", "events": "events", "queries": "queries",
        "method": "method", "kernel_spatial": "kernel.spatial",
        "kernel_temporal": "kernel.temporal", "lixel_length": "lixel_length",
        "depth": "depth", "quantize": "quantize",
        "lixel_sharing": "lixel_sharing", "output": "output",
        "format": "format", "seed": "seed", "threads": "threads",
    }
    for attr, key in flag_map.items():
        value = getattr(args, attr, None)
        if value is not None:
            merged[key] = value
    cfg = RunConfig(
        graph=merged.get("graph"),
        events=merged.get("events"),
        queries=merged.get("queries"),
        method=str(merged["method"]),
        kernel_spatial=str(merged["kernel.spatial"]),
        kernel_temporal=str(merged["kernel.temporal"]),
        lixel_length=float(merged["lixel_length"]),
        depth=int(merged["depth"]),
        quantize=int(merged["quantize"]),
        lixel_sharing=str(merged["lixel_sharing"]).lower() in ("on", "true", "1"),
        output=merged.get("output"),
        format=str(merged["format"]),
        seed=int(merged["seed"]),
        threads=int(merged["threads"]),
    )
    if cfg.lixel_sharing and cfg.kernel_spatial != "triangular":
        print(f"warning: lixel sharing requires the triangular spatial kernel; "
              f"disabled for kernel {cfg.kernel_spatial!r}", file=sys.stderr)
        cfg.lixel_sharing = False
    return cfg


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _output_path(base: str, i: int, total: int) -> Path:
    p = Path(base)
    if total == 1:
        return p
    return p.with_name(f"{p.stem}_q{i:03d}{p.suffix}")


def _oracle_field(net, stores, spec: QuerySpec):
    from .engine import DensityField
    lixels = generate_lixels(net, spec.g)
    values = [
        brute_force_density(lx, spec.t, spec.b_s, spec.b_t, stores, net,
                            spec.spatial_kernel, spec.temporal_kernel).density
        for lx in lixels
    ]
    return DensityField(spec, lixels, values)


def _load_inputs(cfg: RunConfig):
    for name, path in (("graph", cfg.graph), ("events", cfg.events),
                       ("queries", cfg.queries)):
        if not path:
            raise SystemExit(_fail(EXIT_CONFIG, f"missing --{name}"))
    try:
        net = load_graph_csv(cfg.graph)
        stores = load_events_csv(cfg.events, net)
        queries = load_queries_csv(cfg.queries)
    except (ParseError, OSError) as exc:
        raise SystemExit(_fail(EXIT_IO, str(exc)))
    return net, stores, queries


def _specs(cfg: RunConfig, queries, method: str | None = None) -> list[QuerySpec]:
    return [
        QuerySpec(t=t, b_s=b_s, b_t=b_t, g=cfg.lixel_length,
                  method=method or cfg.method,
                  spatial_kernel=cfg.kernel_spatial,
                  temporal_kernel=cfg.kernel_temporal,
                  lixel_sharing=cfg.lixel_sharing,
                  depth=cfg.depth, quantize=cfg.quantize)
        for t, b_s, b_t in queries
    ]


def cmd_run(args) -> int:
    cfg = _resolve(args)
    if not cfg.output:
        return _fail(EXIT_CONFIG, "missing --output")
    net, stores, queries = _load_inputs(cfg)
    if not queries:
        return _fail(EXIT_CONFIG, "query batch is empty")
    oracle = cfg.method == "oracle"
    specs = _specs(cfg, queries, method="sps" if oracle else None)
    try:
        for s in specs:
            s.validate()
        if oracle:
            fields = [_oracle_field(net, stores, s) for s in specs]
        else:
            engine = Engine(net, stores, threads=cfg.threads)
            fields = engine.run_batch(specs)
    except (KernelError, ValueError) as exc:
        return _fail(EXIT_CONFIG, str(exc))
    for i, field in enumerate(fields):
        path = _output_path(cfg.output, i, len(fields))
        try:
            if cfg.format == "geojson":
                write_density_geojson(field, net, path)
            else:
                write_density_csv(field, path)
        except ValueError as exc:
            return _fail(EXIT_CONFIG, str(exc))
        except OSError as exc:
            return _fail(EXIT_IO, str(exc))
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = _resolve(args)
    if not cfg.graph or not cfg.events:
        return _fail(EXIT_CONFIG,
                     "generate needs --graph and --events output paths")
    try:
        graph_records, event_records = generate_synthetic(
            cfg.seed, args.vertices, args.edge_count, args.event_count,
            args.horizon)
    except ValueError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    try:
        write_graph_csv(graph_records, cfg.graph)
        write_events_csv(event_records, cfg.events)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    return EXIT_OK


def cmd_benchmark(args) -> int:
    cfg = _resolve(args)
    if not cfg.output:
        return _fail(EXIT_CONFIG, "missing --output")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("sps", "ada", "rfs", "drfs"):
            return _fail(EXIT_CONFIG, f"unknown benchmark method {m!r}")
    net, stores, queries = _load_inputs(cfg)
    if not queries:
        return _fail(EXIT_CONFIG, "query batch is empty")
    report = {"methods": {}, "repetitions": args.repetitions}
    for method in methods:
        engine = Engine(net, stores, threads=cfg.threads)
        per_query = []
        for spec in _specs(cfg, queries, method=method):
            t0 = time.perf_counter()
            field = engine.run(spec)
            cold = time.perf_counter() - t0
            warm = []
            for _ in range(args.repetitions):
                t0 = time.perf_counter()
                field = engine.run(spec)
                warm.append(time.perf_counter() - t0)
            query_time = median(warm) if warm else cold
            nodes = sum(f.node_count for f in engine._forests.values())
            nodes += sum(f.node_count for f in engine._dyn.values())
            per_query.append({
                "t": spec.t, "b_s": spec.b_s, "b_t": spec.b_t,
                "build_time_s": max(0.0, cold - query_time),
                "query_time_s": query_time,
                "index_nodes": nodes,
                "checksum": density_checksum(field),
            })
        report["methods"][method] = per_query
    try:
        write_benchmark_report(report, cfg.output)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--graph")
    p.add_argument("--events")
    p.add_argument("--queries")
    p.add_argument("--method",
                   choices=["sps", "ada", "rfs", "drfs", "oracle"])
    p.add_argument("--kernel-spatial", dest="kernel_spatial")
    p.add_argument("--kernel-temporal", dest="kernel_temporal")
    p.add_argument("--lixel-length", dest="lixel_length", type=float)
    p.add_argument("--depth", type=int)
    p.add_argument("--quantize", type=int)
    p.add_argument("--lixel-sharing", dest="lixel_sharing",
                   choices=["on", "off"])
    p.add_argument("--output")
    p.add_argument("--format", choices=["csv", "geojson"])
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tnkde",
                     description="Exact temporal network kernel density "
                                 "estimation over road networks")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    p_run = sub.add_parser("run", help="run a query batch and write densities")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_gen = sub.add_parser("generate", help="write a synthetic graph + events")
    _add_common(p_gen)
    p_gen.add_argument("--vertices", type=int, default=100)
    p_gen.add_argument("--edge-count", dest="edge_count", type=int, default=150)
    p_gen.add_argument("--event-count", dest="event_count", type=int,
                       default=1000)
    p_gen.add_argument("--horizon", type=int, default=86400)
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("benchmark", help="time methods on a query batch")
    _add_common(p_bench)
    p_bench.add_argument("--methods", default="sps,ada,rfs,drfs")
    p_bench.add_argument("--repetitions", type=int, default=3)
    p_bench.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
