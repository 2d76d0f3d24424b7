"""Reference brute-force densities on hand-checked instances."""
from __future__ import annotations

import pytest

from tnkde.events import ingest_events
from tnkde.network import edge_lixels, load_graph
from tnkde.oracle import brute_force_density


def test_density_on_a_path_graph_by_hand():
    net = load_graph([("e1", "a", "b", 100.0, None),
                      ("e2", "b", "c", 50.0, None)])
    stores = ingest_events([("e2", 10.0, 100), ("e1", 95.0, 105)], net)
    lx1, lx2 = edge_lixels(net.edge_by_id["e1"], 50.0)

    # center 75: e2 event at network distance 25+10=35 and zero time gap
    # (K_s=0.65, K_t=1); own-edge event at |75-95|=20, time gap 5 of 10
    # (K_s=0.8, K_t=0.5)
    r = brute_force_density(lx2, 100, 100.0, 10.0, stores, net,
                            "triangular", "triangular")
    assert r.density == pytest.approx(0.65 * 1.0 + 0.8 * 0.5, abs=1e-12)

    # center 25: distances become 85 and 70
    r = brute_force_density(lx1, 100, 100.0, 10.0, stores, net,
                            "triangular", "triangular")
    assert r.density == pytest.approx(0.15 * 1.0 + 0.30 * 0.5, abs=1e-12)


def test_events_outside_either_bandwidth_contribute_zero():
    net = load_graph([("e1", "a", "b", 100.0, None)])
    stores = ingest_events([("e1", 95.0, 0), ("e1", 10.0, 500)], net)
    lx = edge_lixels(net.edge_by_id["e1"], 100.0)[0]  # center 50
    # first event: spatial gap 45 > b_s; second: time gap 500 > b_t
    r = brute_force_density(lx, 0, 40.0, 100.0, stores, net,
                            "constant", "constant")
    assert r.density == 0.0
    assert r.contributions == []


def test_same_edge_event_can_be_closer_around_the_loop():
    net = load_graph([("e1", "a", "b", 100.0, None),
                      ("e2", "b", "c", 10.0, None),
                      ("e3", "c", "a", 10.0, None)])
    stores = ingest_events([("e1", 95.0, 0)], net)
    lx = edge_lixels(net.edge_by_id["e1"], 10.0)[0]  # center 5
    # along the edge: |5-95| = 90; around the loop: 5 + 20 + 5 = 30
    r = brute_force_density(lx, 0, 100.0, 10.0, stores, net,
                            "triangular", "constant")
    assert r.density == pytest.approx(1.0 - 30.0 / 100.0, abs=1e-12)


def test_boundary_distances_are_inclusive():
    net = load_graph([("e1", "a", "b", 100.0, None)])
    stores = ingest_events([("e1", 90.0, 10)], net)
    lx = edge_lixels(net.edge_by_id["e1"], 100.0)[0]  # center 50, gap 40
    r = brute_force_density(lx, 0, 40.0, 10.0, stores, net,
                            "constant", "constant")
    # both the spatial and the temporal gap sit exactly on the bandwidth
    assert r.density == 1.0


def test_contributions_record_event_terms():
    net = load_graph([("e1", "a", "b", 100.0, None)])
    stores = ingest_events([("e1", 40.0, 5), ("e1", 60.0, 5)], net)
    lx = edge_lixels(net.edge_by_id["e1"], 100.0)[0]
    r = brute_force_density(lx, 5, 50.0, 10.0, stores, net,
                            "triangular", "triangular")
    assert len(r.contributions) == 2
    assert r.density == pytest.approx(
        sum(f for *_, f in r.contributions), abs=1e-12)
