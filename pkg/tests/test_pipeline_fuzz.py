"""Randomized end-to-end checks beyond the shipped fixtures.

Random 2-connected planar graphs are produced by deleting edges from a grid
while it stays 2-connected (the induced scheme comes from the grid
embedding); each goes through the full pipeline and must match the
brute-force curve sum.
"""
import numpy as np
import pytest

from pfising.fixtures import _grid_graph
from pfising.graphs import Graph
from pfising.minors import complete_transform, minor_scheme
from pfising.partition import (
    IsingModel,
    PlanarPfaffianSolver,
    WeightFunction,
    ising_bruteforce,
    ising_z,
    z_bruteforce,
)


def random_planar_case(rng, rows, cols):
    g, scheme = _grid_graph(rows, cols)
    deleted = []
    edges_left = list(range(g.num_edges))
    for _ in range(int(rng.integers(0, g.num_edges // 3))):
        candidates = [e for e in edges_left if e not in deleted]
        rng.shuffle(candidates)
        for e in candidates:
            trial = deleted + [e]
            g1, _t = complete_transform(g, trial, ())
            if g1.num_vertices == g.num_vertices and g1.is_two_connected():
                deleted.append(e)
                break
    g1, t = complete_transform(g, deleted, ())
    s1 = minor_scheme(g, scheme, t, g1)
    return g1, s1


@pytest.mark.parametrize("seed", range(12))
def test_random_planar_graphs_match_bruteforce(seed):
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(2, 4)), int(rng.integers(2, 5))
    g, s = random_planar_case(rng, rows, cols)
    solver = PlanarPfaffianSolver(g, s)
    for _ in range(3):
        w = WeightFunction(rng.uniform(0.05, 1.0, g.num_edges))
        zb = z_bruteforce(g, w)
        assert solver.evaluate(w) == pytest.approx(zb, rel=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_random_ising_on_grid(seed):
    rng = np.random.default_rng(100 + seed)
    g, s = random_planar_case(rng, 3, 3)
    J = rng.uniform(0.05, 1.5, g.num_edges)
    beta = rng.uniform(0.1, 1.5)
    m = IsingModel(g, J, beta)
    assert ising_z(m, "planar", s) == pytest.approx(ising_bruteforce(m), rel=1e-9)


def test_wheel_graph_pipeline():
    # odd hub degree and odd rim degrees: exercises the corridor pairing
    n = 5
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, n) for i in range(n)]
    g = Graph(n + 1, tuple(edges))
    rot = []
    for i in range(n):
        rim_prev = (i - 1) % n
        rim_next = i
        spoke = n + i
        rot.append((rim_prev, rim_next, spoke))
    rot.append(tuple(n + i for i in range(n)))  # hub, spokes in rim order
    from pfising.embeddings import plain_scheme, trace_faces

    s = plain_scheme(g, rot)
    assert trace_faces(g, s).euler_characteristic == 2
    solver = PlanarPfaffianSolver(g, s)
    rng = np.random.default_rng(0)
    for _ in range(3):
        w = WeightFunction(rng.uniform(0.05, 1.0, g.num_edges))
        assert solver.evaluate(w) == pytest.approx(z_bruteforce(g, w), rel=1e-9)


def test_k6_projective_plane():
    # antipodal icosahedron quotient: 10 triangular faces, one crosscap;
    # every vertex has odd degree, so the pipeline pairs and splits on a
    # nonorientable surface before the multicomplex build
    from pfising.embeddings import EmbeddingScheme, trace_faces
    from pfising.partition import NonplanarSolver

    edges = tuple((i, j) for i in range(6) for j in range(i + 1, 6))
    g = Graph(6, edges)
    rots = (
        (2, 1, 0, 3, 4), (7, 0, 5, 8, 6), (5, 1, 9, 10, 11),
        (12, 6, 13, 2, 9), (10, 12, 7, 3, 14), (13, 4, 14, 11, 8),
    )
    capped = {2, 3, 7, 8, 9, 11, 12, 13, 14}
    caps = tuple((1,) if k in capped else () for k in range(15))
    s = EmbeddingScheme(rots, caps, 1)
    rep = trace_faces(g, s)
    assert rep.euler_characteristic == 1 and not rep.orientable
    assert sorted(len(f) for f in rep.faces) == [3] * 10
    solver = NonplanarSolver(g, s)
    assert set(solver.class_table) == {0, 1}
    rng = np.random.default_rng(66)
    for _ in range(3):
        w = WeightFunction(rng.uniform(0.05, 1.0, 15))
        zb = z_bruteforce(g, w)
        assert solver.evaluate_multicomplex(w) == pytest.approx(zb, rel=1e-9)
        assert solver.evaluate_complex_sum(w) == pytest.approx(zb, rel=1e-9)
