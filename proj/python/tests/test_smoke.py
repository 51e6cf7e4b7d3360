import math

import pytest

import graphlike as gl


def theta():
    return gl.Graph([0, 1], [(0, 0, 1, 1.0), (1, 0, 1, 1.0), (2, 0, 1, 1.0)])


def test_graph_basics():
    g = theta()
    assert g.total_length == pytest.approx(3.0)
    assert g.is_connected()
    assert g.distance(0, 1) == pytest.approx(1.0)
    value, pair = g.diameter([0, 1])
    assert value == pytest.approx(1.0)
    assert pair == (0, 1)


def test_self_loop_rejected():
    with pytest.raises(gl.GraphError):
        gl.Graph([0], [(0, 0, 0, 1.0)])


def test_resistance_matches_oracle():
    g = theta()
    r = gl.effective_resistance(g, 0, 1)
    assert r == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert r == pytest.approx(gl.resistance_oracle(g, 0, 1), abs=1e-10)


def test_subdivision_keeps_resistance():
    g = theta()
    before = gl.effective_resistance(g, 0, 1)
    g2, mid = g.subdivide(0, 0.25)
    assert mid not in g.vertices
    assert gl.effective_resistance(g2, 0, 1) == pytest.approx(before, rel=1e-12)


def test_edge_points():
    g = gl.Graph([0, 1], [(0, 0, 1, 2.0)])
    assert g.distance((0, 0.25), 1) == pytest.approx(1.5)
    assert gl.effective_resistance(g, (0, 0.25), 0) == pytest.approx(0.5)


def test_fat_cantor_fixture():
    space = gl.Space("fat_cantor")
    assert space.h1_limit == pytest.approx(1.5)
    for n, r in gl.resistance_sequence(space, 0, 1, 0, 0, 8):
        assert r == pytest.approx(0.75 + 2.0**-n / 4.0, abs=1e-9)
    est = gl.hausdorff_estimate(space, 1e-3)
    assert est["converged"]
    assert est["lower"] <= 1.5 <= est["upper"] + 1e-12
    assert abs(est["h_value"] - 1.5) <= 1e-3


def test_certified_resistance():
    space = gl.Space("fat_cantor")
    v = gl.certified_resistance(space, 0, 1, 0.1)
    assert v["certified"]
    assert abs(v["estimate"] - 0.75) <= 0.05


def test_decompose_dumbbell():
    space = gl.Space("dumbbell")
    dec = gl.decompose(space, 0, 0.1)
    assert len(dec["pseudo_edges"]) == 4
    assert dec["sum_delta"] == 0.0
    assert dec["sum_h1"] == pytest.approx(4.0)


def test_json_round_trip():
    g = theta()
    g2 = gl.graph_from_json(gl.graph_to_json(g))
    assert g2.edges == g.edges
    assert g2.vertices == g.vertices


def test_tracking():
    space = gl.Space("fat_cantor")
    assert space.track(0, 0, 5) == 0  # persistent vertex
    moved = space.track((0, 0.5), 0, 1)  # midpoint of the level-0 interval
    assert isinstance(moved, tuple)
    d0 = space.level(0).distance((0, 0.125), (0, 0.875))
    d1 = space.level(1).distance(space.track((0, 0.125), 0, 1), space.track((0, 0.875), 0, 1))
    assert d1 <= d0 + 1e-12


def test_gasket_space():
    space = gl.Space("gasket_edges", {"side": 1.0, "ratio": 0.25})
    g1 = space.level(1)
    assert len(g1.vertices) == 9
    assert len(g1.edges) == 12
    assert math.isclose(space.level_length(0), 3.0)
