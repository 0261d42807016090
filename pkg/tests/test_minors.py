import pytest

from pfising.embeddings import resolve_planar_scheme, trace_faces
from pfising.fixtures import get_fixture, minor_pair
from pfising.graphs import Graph, GraphError, enumerate_closed_curves
from pfising.minors import (
    MinorTransform,
    apply_minor,
    complete_transform,
    compose_transforms,
    curve_preimage,
    four_regularize,
    minor_scheme,
    subdivide_to_cycle_faces,
    transported_weights,
)

ALL_FIXTURES = [
    "k3", "c4", "k4", "grid2x2", "grid3x3",
    "k5-projective", "k33-projective", "torus-grid3x3",
]


def _scheme_for(fx):
    if fx.planar:
        return resolve_planar_scheme(fx.graph, fx.scheme)
    return fx.scheme


def test_apply_minor_identity():
    g = get_fixture("k4").graph
    t = MinorTransform.identity(g)
    out = apply_minor(g, t)
    assert out.edges == g.edges and out.num_vertices == g.num_vertices


def test_apply_minor_fixture_pairs():
    for name in ("hex-patch", "tri-patch"):
        host, minor, t = minor_pair(name)
        out = apply_minor(host, t)
        assert out.edges == minor.edges
        assert out.num_vertices == minor.num_vertices


def test_hex_patch_shape():
    host, minor, t = minor_pair("hex-patch")
    assert len(t.deleted) == 2 and not t.contracted
    rep = trace_faces(minor, get_fixture("hex-patch").scheme)
    assert sorted(len(f) for f in rep.faces) == [6, 6, 8]  # two hexagons + outer


def test_tri_patch_shape():
    host, minor, t = minor_pair("tri-patch")
    assert len(t.contracted) == 3 and not t.deleted
    rep = trace_faces(minor, get_fixture("tri-patch").scheme)
    assert sorted(len(f) for f in rep.faces) == [3, 3, 3, 3, 6]


def test_contracting_a_cycle_is_rejected():
    g = get_fixture("k3").graph
    with pytest.raises(GraphError, match="cycle"):
        complete_transform(g, (), (0, 1, 2))


def test_contraction_simplification_recorded():
    # contracting one triangle edge creates a parallel pair; it must be
    # folded into the deleted set
    g = get_fixture("k3").graph
    g1, t = complete_transform(g, (), (0,))
    assert g1.num_vertices == 2 and g1.num_edges == 1
    assert len(t.deleted) == 1


def test_four_regularize_identity_on_regular_strong():
    fx = get_fixture("k5-projective")
    g1, s1, t = four_regularize(fx.graph, fx.scheme)
    assert t.is_identity
    assert g1.edges == fx.graph.edges


def test_four_regularize_requires_two_connected():
    path = Graph(3, ((0, 1), (1, 2)))
    scheme = trace_scheme = None
    from pfising.embeddings import plain_scheme

    with pytest.raises(GraphError, match="2-connected"):
        four_regularize(path, plain_scheme(path, [(0,), (0, 1), (1,)]))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_four_regularize_postconditions(name):
    fx = get_fixture(name)
    scheme = _scheme_for(fx)
    rep0 = trace_faces(fx.graph, scheme)
    g1, s1, t1 = four_regularize(fx.graph, scheme)
    rep1 = trace_faces(g1, s1)
    assert g1.is_regular(4)
    assert g1.is_two_connected()
    assert rep1.euler_characteristic == rep0.euler_characteristic
    assert rep1.orientable == rep0.orientable
    back = apply_minor(g1, t1)
    assert back.edges == fx.graph.edges and back.num_vertices == fx.graph.num_vertices


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_subdivide_to_cycle_faces_postconditions(name):
    fx = get_fixture(name)
    scheme = _scheme_for(fx)
    g1, s1, t1 = four_regularize(fx.graph, scheme)
    g2, s2, t2 = subdivide_to_cycle_faces(g1, s1)
    rep2 = trace_faces(g2, s2)
    assert rep2.faces_are_cycles
    assert g2.is_regular(4)
    assert rep2.euler_characteristic == trace_faces(g1, s1).euler_characteristic
    t = compose_transforms(t2, t1)
    back = apply_minor(g2, t)
    assert back.edges == fx.graph.edges


def test_subdivide_identity_on_strong_embedding():
    fx = get_fixture("torus-grid3x3")
    g2, s2, t2 = subdivide_to_cycle_faces(fx.graph, fx.scheme)
    assert t2.is_identity
    rep = trace_faces(g2, s2)
    assert all(len(f) == 4 for f in rep.faces)


def test_curve_preimage_properties():
    fx = get_fixture("k33-projective")
    scheme = fx.scheme
    g1, s1, t1 = four_regularize(fx.graph, scheme)
    g2, s2, t2 = subdivide_to_cycle_faces(g1, s1)
    t = compose_transforms(t2, t1)
    for c in enumerate_closed_curves(fx.graph):
        pm = curve_preimage(g2, t, c)
        assert g2.is_closed_curve(pm)
        # avoids deleted edges and restricts back to c on survivors
        for e in t.deleted:
            assert not pm >> e & 1
        back = 0
        for e_host, e_minor in t.edge_map.items():
            if pm >> e_host & 1:
                back |= 1 << e_minor
        assert back == c


def test_transported_weights():
    host, minor, t = minor_pair("tri-patch")
    w = [2.0] * minor.num_edges
    wt = transported_weights(t, w, host.num_edges)
    for e in range(host.num_edges):
        if e in t.edge_map:
            assert wt[e] == 2.0
        else:
            assert wt[e] == 1.0


def test_minor_scheme_planarity_preserved():
    base = get_fixture("grid3x3")
    host, minor, t = minor_pair("hex-patch")
    s = minor_scheme(host, base.scheme, t, minor)
    assert trace_faces(minor, s).euler_characteristic == 2
