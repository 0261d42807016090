import pytest

from pfising.embeddings import (
    EmbeddingScheme,
    SchemeError,
    face_boundary_basis,
    plain_scheme,
    resolve_planar_scheme,
    trace_faces,
)
from pfising.fixtures import get_fixture
from pfising.gf2 import mask_rank
from pfising.graphs import first_betti


def test_k4_planar_faces():
    fx = get_fixture("k4")
    rep = trace_faces(fx.graph, fx.scheme)
    assert rep.num_faces == 4
    assert all(len(f) == 3 for f in rep.faces)
    assert rep.euler_characteristic == 2
    assert rep.orientable and rep.genus == 0
    assert rep.faces_are_cycles


def test_c4_two_square_faces():
    fx = get_fixture("c4")
    rep = trace_faces(fx.graph, fx.scheme)
    assert rep.num_faces == 2
    assert sorted(len(f) for f in rep.faces) == [4, 4]
    assert rep.euler_characteristic == 2


def test_projective_k5_fixture():
    fx = get_fixture("k5-projective")
    rep = trace_faces(fx.graph, fx.scheme)
    assert rep.euler_characteristic == 1
    assert not rep.orientable
    assert rep.genus == 1
    assert rep.faces_are_cycles
    assert sorted(len(f) for f in rep.faces) == [3, 3, 3, 3, 3, 5]


def test_projective_k33_fixture():
    fx = get_fixture("k33-projective")
    rep = trace_faces(fx.graph, fx.scheme)
    assert rep.euler_characteristic == 1 and not rep.orientable and rep.genus == 1


def test_torus_grid_strong_embedding():
    fx = get_fixture("torus-grid3x3")
    rep = trace_faces(fx.graph, fx.scheme)
    assert rep.euler_characteristic == 0
    assert rep.orientable and rep.genus == 1
    assert all(len(f) == 4 for f in rep.faces)


def test_malformed_rotation_rejected():
    fx = get_fixture("k3")
    bad = EmbeddingScheme(((0, 1), (0, 2), (1, 1)), ((), (), ()), 0)
    with pytest.raises(SchemeError):
        trace_faces(fx.graph, bad)


def test_face_basis_planar_k4_maclane():
    fx = get_fixture("k4")
    basis = face_boundary_basis(fx.graph, fx.scheme)
    assert len(basis) == 3 == first_betti(fx.graph)
    assert basis.kind == "face-boundary"
    # MacLane property: every edge in at most two member cycles
    for e in range(fx.graph.num_edges):
        count = sum(1 for c in basis.cycles if c >> e & 1)
        assert count <= 2
    assert mask_rank(basis.cycles, fx.graph.num_edges) == 3


def test_face_basis_grid_drops_outer():
    fx = get_fixture("grid3x3")
    basis = face_boundary_basis(fx.graph, fx.scheme)
    assert len(basis) == 4
    # retained faces are the unit squares
    assert all(bin(c).count("1") == 4 for c in basis.cycles)


def test_face_basis_projective_k5_codimension():
    fx = get_fixture("k5-projective")
    basis = face_boundary_basis(fx.graph, fx.scheme)
    assert len(basis) == 5  # beta1 - nonorientable genus = 6 - 1
    assert mask_rank(basis.cycles, fx.graph.num_edges) == 5


def test_all_faces_sum_to_zero():
    for name in ("k3", "c4", "k4", "grid3x3", "k5-projective", "torus-grid3x3"):
        fx = get_fixture(name)
        rep = trace_faces(fx.graph, fx.scheme)
        total = 0
        for f in rep.faces:
            total ^= f.edge_mask
        assert total == 0


def test_resolve_planar_scheme():
    fx = get_fixture("grid2x2")
    canonical = resolve_planar_scheme(fx.graph, fx.scheme)
    assert all(s == 1 for s in map(canonical.signature, range(fx.graph.num_edges)))
    rep = trace_faces(fx.graph, canonical)
    assert rep.euler_characteristic == 2


def test_resolve_planar_rejects_nonplanar():
    fx = get_fixture("k5-projective")
    with pytest.raises(SchemeError, match="not planar"):
        resolve_planar_scheme(fx.graph, fx.scheme)


def test_curve_class_map():
    fx = get_fixture("k5-projective")
    s = fx.scheme
    # the pentagon has even crossing parity, a star triangle is odd
    pentagon = 0b0000011111
    assert s.curve_class(pentagon) == 0
    triangle = (1 << 4) | (1 << 3) | (1 << 6)  # edges 4, 3, 6
    assert s.curve_class(triangle) == 1


def test_vertex_flip_invariance_of_faces():
    # reversing one rotation and negating its incident signatures keeps the
    # face count (classical vertex switch)
    fx = get_fixture("k33-projective")
    g, s = fx.graph, fx.scheme
    v = 2
    rot = list(s.rotations)
    rot[v] = tuple(reversed(rot[v]))
    caps = [list(c) for c in s.crosscaps]
    for e in g.adjacency[v]:
        if 1 in caps[e]:
            caps[e].remove(1)
        else:
            caps[e].append(1)
    flipped = EmbeddingScheme(tuple(rot), tuple(tuple(c) for c in caps), 1)
    rep0 = trace_faces(g, s)
    rep1 = trace_faces(g, flipped)
    assert rep0.num_faces == rep1.num_faces
    assert rep0.euler_characteristic == rep1.euler_characteristic
