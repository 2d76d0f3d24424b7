"""CSV/GeoJSON input and output with line-numbered parse errors."""
from __future__ import annotations

import csv
import hashlib
import json
from typing import Iterable

from .engine import DensityField
from .events import EdgeEventStore, ingest_events
from .network import RoadNetwork, load_graph

GRAPH_HEADER = ["edge_id", "from", "to", "length_m"]
EVENTS_HEADER = ["edge_id", "offset_m", "timestamp"]
QUERIES_HEADER = ["t", "b_s", "b_t"]
OUTPUT_HEADER = ["edge_id", "lixel_index", "center_offset_m", "density"]


class ParseError(ValueError):
    """A malformed input row; the message names the file and line."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _parse_geometry(text: str, path, line: int):
    """Parse `x y;x y;...` polyline geometry."""
    points = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        coords = part.split()
        if len(coords) != 2:
            raise ParseError(path, line, f"bad geometry point {part!r}")
        try:
            points.append((float(coords[0]), float(coords[1])))
        except ValueError:
            raise ParseError(path, line, f"bad geometry point {part!r}") from None
    if len(points) < 2:
        raise ParseError(path, line, "geometry needs at least two points")
    return tuple(points)


def _check_header(row, expected, path):
    got = [c.strip() for c in row[:len(expected)]]
    if got != expected:
        raise ParseError(path, 1,
                         f"expected header {','.join(expected)!r}, got {','.join(got)!r}")


def load_graph_csv(path) -> RoadNetwork:
    records = []
    seen_ids = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for line, row in enumerate(reader, start=1):
            if not row or not any(c.strip() for c in row):
                continue
            if line == 1:
                _check_header(row, GRAPH_HEADER, path)
                continue
            if len(row) < 4:
                raise ParseError(path, line, f"expected at least 4 fields, got {len(row)}")
            eid, a, b = row[0].strip(), row[1].strip(), row[2].strip()
            try:
                length = float(row[3])
            except ValueError:
                raise ParseError(path, line, f"bad length {row[3]!r}") from None
            if eid in seen_ids:
                raise ParseError(path, line, f"duplicate edge id {eid!r}")
            seen_ids.add(eid)
            if a == b:
                raise ParseError(path, line, f"self-loop on vertex {a!r}")
            if not length > 0:
                raise ParseError(path, line, f"nonpositive length {length!r}")
            geometry = None
            if len(row) > 4 and row[4].strip():
                geometry = _parse_geometry(row[4], path, line)
            records.append((eid, a, b, length, geometry))
    try:
        return load_graph(records)
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from exc


def load_events_csv(path, net: RoadNetwork) -> dict[str, EdgeEventStore]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for line, row in enumerate(reader, start=1):
            if not row or not any(c.strip() for c in row):
                continue
            if line == 1:
                _check_header(row, EVENTS_HEADER, path)
                continue
            if len(row) < 3:
                raise ParseError(path, line, f"expected 3 fields, got {len(row)}")
            eid = row[0].strip()
            try:
                offset, t = float(row[1]), float(row[2])
            except ValueError:
                raise ParseError(path, line, "bad numeric field") from None
            edge = net.edge_by_id.get(eid)
            if edge is None:
                raise ParseError(path, line, f"unknown edge {eid!r}")
            if not 0 <= offset <= edge.length:
                raise ParseError(
                    path, line,
                    f"offset {offset!r} outside edge {eid!r} of length {edge.length}")
            if t != int(t):
                raise ParseError(path, line, f"non-integer timestamp {row[2]!r}")
            records.append((eid, offset, t))
    try:
        return ingest_events(records, net)
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from exc


def load_queries_csv(path) -> list[tuple[int, float, float]]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for line, row in enumerate(reader, start=1):
            if not row or not any(c.strip() for c in row):
                continue
            if line == 1:
                _check_header(row, QUERIES_HEADER, path)
                continue
            if len(row) < 3:
                raise ParseError(path, line, f"expected 3 fields, got {len(row)}")
            try:
                t = float(row[0])
                if t != int(t):
                    raise ValueError
                out.append((int(t), float(row[1]), float(row[2])))
            except ValueError:
                raise ParseError(path, line, "bad query row (t must be an integer)") from None
    return out


def density_rows(field: DensityField) -> Iterable[tuple[str, int, str, str]]:
    for edge_id, index, center, value in field.rows():
        yield edge_id, index, f"{center:.9g}", f"{value:.9g}"


def write_density_csv(field: DensityField, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(OUTPUT_HEADER)
        for row in density_rows(field):
            writer.writerow(row)


def density_checksum(field: DensityField) -> str:
    h = hashlib.md5()
    for row in density_rows(field):
        h.update(",".join(str(c) for c in row).encode())
        h.update(b"\n")
    return h.hexdigest()


def _sub_polyline(geometry, start_frac: float, end_frac: float):
    """Cut the sub-polyline between two fractional positions along length."""
    seg_lengths = []
    total = 0.0
    for (x0, y0), (x1, y1) in zip(geometry, geometry[1:]):
        d = ((x1 - x0) ** 2 + (y1 - y0) ** 2) ** 0.5
        seg_lengths.append(d)
        total += d
    if total == 0.0:
        return [list(geometry[0]), list(geometry[-1])]

    def point_at(frac):
        target = frac * total
        run = 0.0
        for i, d in enumerate(seg_lengths):
            if run + d >= target or i == len(seg_lengths) - 1:
                f = 0.0 if d == 0 else (target - run) / d
                f = min(max(f, 0.0), 1.0)
                (x0, y0), (x1, y1) = geometry[i], geometry[i + 1]
                return [x0 + f * (x1 - x0), y0 + f * (y1 - y0)], i
            run += d
        return list(geometry[-1]), len(seg_lengths) - 1

    p0, i0 = point_at(start_frac)
    p1, i1 = point_at(end_frac)
    pts = [p0]
    run = 0.0
    for i, d in enumerate(seg_lengths):
        run += d
        frac = run / total
        if i >= i0 and start_frac < frac < end_frac:
            pts.append(list(geometry[i + 1]))
    if pts[-1] != p1:
        pts.append(p1)
    if len(pts) == 1:
        pts.append(list(p1))
    return pts


def write_density_geojson(field: DensityField, net: RoadNetwork, path) -> None:
    """One LineString feature per lixel; requires edge geometry in the graph."""
    features = []
    by_key = {(lx.edge_id, lx.index): lx for lx in field.lixels}
    for edge_id, index, center, value in field.rows():
        edge = net.edge_by_id[edge_id]
        if edge.geometry is None:
            raise ValueError(
                f"edge {edge_id!r} has no geometry; GeoJSON export needs a "
                "geometry column in the graph file")
        lx = by_key[(edge_id, index)]
        start = (lx.center - lx.length / 2.0) / edge.length
        end = (lx.center + lx.length / 2.0) / edge.length
        coords = _sub_polyline(edge.geometry, start, end)
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": coords},
            "properties": {"edge_id": edge_id, "lixel_index": index,
                           "density": float(f"{value:.9g}")},
        })
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"type": "FeatureCollection", "features": features}, fh)


def write_benchmark_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
