"""CLI behavior: subcommands, precedence, exit codes, output formats."""
from __future__ import annotations

import csv
import json

import pytest

from tnkde.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, main

GRAPH = """edge_id,from,to,length_m
e1,a,b,100.0
e2,b,c,60.0
"""

GRAPH_GEO = """edge_id,from,to,length_m,geometry
e1,a,b,100.0,0 0;100 0
e2,b,c,60.0,100 0;100 60
"""

EVENTS = """edge_id,offset_m,timestamp
e1,20.0,100
e1,80.0,120
e2,10.0,90
"""

QUERIES = """t,b_s,b_t
100,120,50
"""


@pytest.fixture
def inputs(tmp_path):
    (tmp_path / "g.csv").write_text(GRAPH)
    (tmp_path / "e.csv").write_text(EVENTS)
    (tmp_path / "q.csv").write_text(QUERIES)
    return tmp_path


def _run_args(d, method="rfs", extra=()):
    return ["run", "--graph", str(d / "g.csv"), "--events", str(d / "e.csv"),
            "--queries", str(d / "q.csv"), "--method", method,
            "--output", str(d / "out.csv"), *extra]


def test_run_writes_sorted_csv(inputs):
    assert main(_run_args(inputs)) == EXIT_OK
    rows = list(csv.reader((inputs / "out.csv").open()))
    assert rows[0] == ["edge_id", "lixel_index", "center_offset_m", "density"]
    body = rows[1:]
    assert len(body) == 4  # 2 lixels on e1, 2 on e2
    assert body == sorted(body, key=lambda r: (r[0], int(r[1])))
    assert any(float(r[3]) > 0 for r in body)


@pytest.mark.parametrize("method", ["sps", "ada", "drfs"])
def test_all_methods_agree_with_oracle_output(inputs, method):
    assert main(_run_args(inputs, method="oracle")) == EXIT_OK
    want = (inputs / "out.csv").read_text()
    assert main(_run_args(inputs, method=method)) == EXIT_OK
    assert (inputs / "out.csv").read_text() == want


def test_multi_query_outputs_get_suffixes(inputs):
    (inputs / "q.csv").write_text("t,b_s,b_t\n100,120,50\n110,100,40\n")
    assert main(_run_args(inputs)) == EXIT_OK
    assert (inputs / "out_q000.csv").exists()
    assert (inputs / "out_q001.csv").exists()
    assert not (inputs / "out.csv").exists()


def test_config_file_overridden_by_flags(inputs):
    cfg = inputs / "cfg.json"
    cfg.write_text(json.dumps({
        "kernel": {"spatial": "epanechnikov", "temporal": "constant"},
        "lixel_length": 25.0,
    }))
    args = _run_args(inputs, extra=["--config", str(cfg),
                                    "--kernel-spatial", "triangular"])
    assert main(args) == EXIT_OK
    rows = list(csv.reader((inputs / "out.csv").open()))[1:]
    assert len(rows) == 7  # lixel_length 25 from config: 4 + 3 lixels
    # flag beat the config's spatial kernel; rerun fully explicit to compare
    args2 = _run_args(inputs, extra=["--kernel-spatial", "triangular",
                                     "--kernel-temporal", "constant",
                                     "--lixel-length", "25"])
    assert main(args2) == EXIT_OK
    assert list(csv.reader((inputs / "out.csv").open()))[1:] == rows


def test_missing_output_is_config_error(inputs):
    code = main(["run", "--graph", str(inputs / "g.csv"),
                 "--events", str(inputs / "e.csv"),
                 "--queries", str(inputs / "q.csv")])
    assert code == EXIT_CONFIG


def test_unknown_flag_is_config_error(inputs):
    assert main(_run_args(inputs, extra=["--bogus"])) == EXIT_CONFIG


def test_gaussian_kernel_is_config_error(inputs, capsys):
    code = main(_run_args(inputs, extra=["--kernel-spatial", "gaussian"]))
    assert code == EXIT_CONFIG
    assert "gaussian" in capsys.readouterr().err


def test_missing_file_is_io_error(inputs):
    code = main(["run", "--graph", str(inputs / "absent.csv"),
                 "--events", str(inputs / "e.csv"),
                 "--queries", str(inputs / "q.csv"),
                 "--output", str(inputs / "out.csv")])
    assert code == EXIT_IO


def test_malformed_row_is_io_error_and_names_the_line(inputs, capsys):
    (inputs / "e.csv").write_text(
        "edge_id,offset_m,timestamp\ne1,20.0,100\ne1,999.0,50\n")
    assert main(_run_args(inputs)) == EXIT_IO
    err = capsys.readouterr().err
    assert ":3:" in err  # offending data line


def test_non_integer_timestamp_is_io_error(inputs):
    (inputs / "e.csv").write_text(
        "edge_id,offset_m,timestamp\ne1,20.0,10.5\n")
    assert main(_run_args(inputs)) == EXIT_IO


def test_lixel_sharing_warning_for_non_triangular(inputs, capsys):
    code = main(_run_args(inputs, extra=[
        "--kernel-spatial", "cosine", "--lixel-sharing", "on"]))
    assert code == EXIT_OK
    assert "lixel sharing" in capsys.readouterr().err


def test_geojson_requires_geometry(inputs, capsys):
    code = main(_run_args(inputs, extra=["--format", "geojson"]))
    assert code == EXIT_CONFIG
    assert "geometry" in capsys.readouterr().err


def test_geojson_output(inputs):
    (inputs / "g.csv").write_text(GRAPH_GEO)
    out = inputs / "out.geojson"
    args = ["run", "--graph", str(inputs / "g.csv"),
            "--events", str(inputs / "e.csv"),
            "--queries", str(inputs / "q.csv"),
            "--output", str(out), "--format", "geojson"]
    assert main(args) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["type"] == "FeatureCollection"
    assert len(doc["features"]) == 4
    f = doc["features"][0]
    assert f["geometry"]["type"] == "LineString"
    assert {"edge_id", "lixel_index", "density"} <= set(f["properties"])


def test_generate_is_deterministic(tmp_path):
    for sub in ("one", "two"):
        d = tmp_path / sub
        d.mkdir()
        code = main(["generate", "--seed", "42", "--vertices", "12",
                     "--edge-count", "20", "--event-count", "40",
                     "--horizon", "500",
                     "--graph", str(d / "g.csv"), "--events", str(d / "e.csv")])
        assert code == EXIT_OK
    assert (tmp_path / "one/g.csv").read_bytes() == \
        (tmp_path / "two/g.csv").read_bytes()
    assert (tmp_path / "one/e.csv").read_bytes() == \
        (tmp_path / "two/e.csv").read_bytes()


def test_generate_rejects_infeasible_edge_count(tmp_path):
    code = main(["generate", "--seed", "1", "--vertices", "4",
                 "--edge-count", "100", "--event-count", "5",
                 "--graph", str(tmp_path / "g.csv"),
                 "--events", str(tmp_path / "e.csv")])
    assert code == EXIT_CONFIG


def test_benchmark_report(inputs):
    out = inputs / "bench.json"
    code = main(["benchmark", "--graph", str(inputs / "g.csv"),
                 "--events", str(inputs / "e.csv"),
                 "--queries", str(inputs / "q.csv"),
                 "--methods", "sps,rfs", "--repetitions", "2",
                 "--output", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert set(report["methods"]) == {"sps", "rfs"}
    sps = report["methods"]["sps"][0]
    rfs = report["methods"]["rfs"][0]
    assert sps["checksum"] == rfs["checksum"]  # same densities either way
    for rec in (sps, rfs):
        assert rec["query_time_s"] >= 0.0
        assert rec["build_time_s"] >= 0.0
    assert rfs["index_nodes"] > 0


def test_unknown_benchmark_method(inputs):
    code = main(["benchmark", "--graph", str(inputs / "g.csv"),
                 "--events", str(inputs / "e.csv"),
                 "--queries", str(inputs / "q.csv"),
                 "--methods", "oracle", "--output", str(inputs / "b.json")])
    assert code == EXIT_CONFIG
