"""Incidence matrices realizing partition functions as Pfaffians.

The construction follows the algebraic route: on a 4-regular graph with a
strong embedding, the face-boundary cycle family is sparse, so one can give
the six site entries of every vertex values satisfying the (at most two)
active site equations, give every edge entry a magnitude from the edge
equation b_e**2 = -R_v * R_w, and fix the signs of the edge entries through
one GF(2) system per basis cycle.  Closed curves then contribute equally to
the Pfaffian expansion within each crossing-parity class, which is what the
partition-function formulas rely on.

Entries live in a monomial form (real coefficient, crosscap subset mask):
the real ring is the 0-generator case, the complex ring is the image of the
multicomplex build under i_k -> i.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .darts import DartGraph, PerfectMatching, build_dart_graph, canonical_matching, even_degree_matching, f_weight
from .embeddings import EmbeddingScheme, SchemeError, trace_faces, face_boundary_basis
from .gf2 import gf2_solve
from .graphs import CurveMask, CycleBasis, Graph, GraphError, cycle_sequence, enumerate_closed_curves
from .multicomplex import MulticomplexValue
from .skewpf import COMPLEX, MULTICOMPLEX, REAL, SkewMatrix, pfaffian, submatrix, derived_matrix

EDGE_EQ_TOL = 1e-9
CALIBRATION_TOL = 1e-7

# upper-triangular slots of a 4x4 site block, in (s, sbar, t, tbar, u, ubar) order
_SITE_SLOTS = {(0, 1): 0, (2, 3): 1, (0, 2): 2, (1, 3): 3, (0, 3): 4, (1, 2): 5}


class SolveError(ValueError):
    pass


@dataclass(frozen=True)
class SiteAssignment:
    """Per-vertex site entries (s, sbar, t, tbar, u, ubar) in E(v) order."""

    values: np.ndarray  # (num_vertices, 6)

    def entry(self, v: int, pos_a: int, pos_b: int) -> float:
        if pos_a == pos_b:
            return 0.0
        if pos_a < pos_b:
            return float(self.values[v, _SITE_SLOTS[(pos_a, pos_b)]])
        return -float(self.values[v, _SITE_SLOTS[(pos_b, pos_a)]])


@dataclass(frozen=True)
class EdgeAssignment:
    """Per-edge entry b_e in monomial form: coeff * prod_{k in mask} i_k."""

    coeffs: np.ndarray  # real, signed
    masks: tuple[int, ...]  # crosscap subset bitmask per edge


def _even_permutation(enter_pos: int, exit_pos: int) -> tuple[int, ...]:
    """The unique even permutation sigma of (0,1,2,3) with sigma[0]=enter, sigma[3]=exit."""
    mid = [p for p in range(4) if p not in (enter_pos, exit_pos)]
    sigma = (enter_pos, mid[0], mid[1], exit_pos)
    seq = list(sigma)
    inversions = sum(
        1 for i in range(4) for j in range(i + 1, 4) if seq[i] > seq[j]
    )
    if inversions % 2:
        sigma = (enter_pos, mid[1], mid[0], exit_pos)
    return sigma


@dataclass(frozen=True)
class _Visit:
    """One vertex visit of an oriented cycle: enters via one edge, exits via another."""

    vertex: int
    enter_edge: int
    exit_edge: int
    sigma: tuple[int, ...]  # positions in E(v) reordered so enter->slot0, exit->slot3


def cycle_visits(g: Graph, cycle: CurveMask) -> list[_Visit]:
    verts, edges = cycle_sequence(g, cycle)
    r = len(verts)
    visits = []
    for i in range(r):
        v = verts[i]
        enter = edges[(i - 1) % r]
        exit_ = edges[i]
        adj = g.adjacency[v]
        sigma = _even_permutation(adj.index(enter), adj.index(exit_))
        visits.append(_Visit(v, enter, exit_, sigma))
    return visits


def _relabeled(site: SiteAssignment, visit: _Visit) -> dict[str, float]:
    """Matrix entries of the site block in the visit's slot order.

    Mab is the signed entry between the darts landing in slots a and b once
    the visit's permutation puts the entering edge first and the leaving edge
    last.  The seam invariance of the curve functional rests on the relation
    M12*M34 = M13*M24 at every visited vertex, the slot-ordered form of the
    site equation.
    """
    v, sg = visit.vertex, visit.sigma
    return {
        "M12": site.entry(v, sg[0], sg[1]),
        "M34": site.entry(v, sg[2], sg[3]),
        "M13": site.entry(v, sg[0], sg[2]),
        "M24": site.entry(v, sg[1], sg[3]),
        "M14": site.entry(v, sg[0], sg[3]),
        "M23": site.entry(v, sg[1], sg[2]),
    }


def visit_u_entry(site: SiteAssignment, visit: _Visit) -> float:
    """The entry pairing the entering with the leaving dart (slot 1-4)."""
    return _relabeled(site, visit)["M14"]


def ratio_leaving(site: SiteAssignment, visit: _Visit) -> float:
    """R_{v,e} for the edge the cycle leaves the vertex by."""
    c = _relabeled(site, visit)
    return -c["M14"] * c["M24"] / c["M12"]


def ratio_entering(site: SiteAssignment, visit: _Visit) -> float:
    """R_{v,e} for the edge the cycle enters the vertex by."""
    c = _relabeled(site, visit)
    return c["M14"] * c["M13"] / c["M34"]


def cycle_ratios(g: Graph, site: SiteAssignment, cycle: CurveMask) -> dict[tuple[int, int], float]:
    """R_{v,e} for every (vertex, edge) incidence along the cycle."""
    out = {}
    for visit in cycle_visits(g, cycle):
        out[(visit.vertex, visit.enter_edge)] = ratio_entering(site, visit)
        out[(visit.vertex, visit.exit_edge)] = ratio_leaving(site, visit)
    return out


_PARTITIONS = (
    (frozenset((0, 1)), frozenset((2, 3))),  # slot product s*sbar
    (frozenset((0, 2)), frozenset((1, 3))),  # slot product t*tbar
    (frozenset((0, 3)), frozenset((1, 2))),  # slot product u*ubar
)


def _pair_sign(a: int, b: int) -> float:
    return 1.0 if a < b else -1.0


def _visit_constraint(visit: _Visit) -> tuple[int, int, float]:
    """The visit's site equation as a relation between slot products.

    M12*M34 = M13*M24 in the visit's slot order, rewritten over the vertex's
    own edge order: returns (partition index of the left product, of the
    right product, relative sign eps) meaning Q_left = eps * Q_right.
    """
    sg = visit.sigma

    def classify(a, b, c, d):
        pair1, pair2 = frozenset((sg[a], sg[b])), frozenset((sg[c], sg[d]))
        for idx, (p1, p2) in enumerate(_PARTITIONS):
            if {pair1, pair2} == {p1, p2}:
                sign = _pair_sign(sg[a], sg[b]) * _pair_sign(sg[c], sg[d])
                return idx, sign
        raise AssertionError("slot pairs do not partition the positions")

    left_idx, left_sign = classify(0, 1, 2, 3)
    right_idx, right_sign = classify(0, 2, 1, 3)
    return left_idx, right_idx, left_sign * right_sign


def solve_site_equations(
    g: Graph, basis: CycleBasis, scheme: EmbeddingScheme
) -> SiteAssignment:
    """Nonzero site entries satisfying every active site equation.

    The unknowns per vertex reduce to the three products s*sbar, t*tbar and
    u*ubar; every basis cycle through the vertex ties two of them together
    with a sign.  A sparse family leaves at least one sign pattern feasible
    (three independent active forms would force all products to vanish).

    Also applies the rotation normalization of the nonorientable
    construction: at every vertex the ratio on the edge whose rotation
    successor is the cycle's other member edge is positive; flipping
    (u, ubar) at a vertex flips all its ratios.
    """
    if not g.is_regular(4):
        raise GraphError("site equations are formulated for 4-regular graphs")
    all_visits = {cyc: cycle_visits(g, cyc) for cyc in basis.cycles}
    constraints: list[list[tuple[int, int, float]]] = [[] for _ in range(g.num_vertices)]
    for cyc in basis.cycles:
        for visit in all_visits[cyc]:
            constraints[visit.vertex].append(_visit_constraint(visit))
    values = np.zeros((g.num_vertices, 6))
    candidates = [
        (1.0, -1.0, 1.0), (1.0, 1.0, 1.0), (1.0, 1.0, -1.0), (1.0, -1.0, -1.0),
        (-1.0, 1.0, 1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0), (-1.0, -1.0, -1.0),
    ]
    for v in range(g.num_vertices):
        solution = None
        for q in candidates:
            if all(q[i] == eps * q[j] for i, j, eps in constraints[v]):
                solution = q
                break
        if solution is None:
            raise SolveError("basis not sparse: site equations have no nonzero solution")
        q1, q2, q3 = solution
        values[v] = (1.0, q1, 1.0, q2, 1.0, q3)
    site = SiteAssignment(values)
    for cyc in basis.cycles:
        for visit in all_visits[cyc]:
            c = _relabeled(site, visit)
            if c["M12"] * c["M34"] - c["M13"] * c["M24"] != 0.0:
                raise SolveError("site equation violated after solve")
    _normalize_rotation_signs(g, site, basis, scheme, all_visits)
    return site


def _rotation_aligned_edge(scheme: EmbeddingScheme, visit: _Visit) -> int:
    """The member edge e of the visit pair with rotation successor in the pair."""
    v, p, q = visit.vertex, visit.enter_edge, visit.exit_edge
    if scheme.rotation_next(v, p, 1) == q:
        return p
    if scheme.rotation_next(v, q, 1) == p:
        return q
    raise SolveError(
        "basis cycle uses a non-adjacent rotation pair; not a face family"
    )


def _normalize_rotation_signs(g, site, basis, scheme, all_visits):
    seen = [False] * g.num_vertices
    for cyc in basis.cycles:
        for visit in all_visits[cyc]:
            v = visit.vertex
            if seen[v]:
                continue
            seen[v] = True
            e = _rotation_aligned_edge(scheme, visit)
            r = (
                ratio_entering(site, visit)
                if e == visit.enter_edge
                else ratio_leaving(site, visit)
            )
            if r < 0:
                site.values[v, 4] *= -1.0
                site.values[v, 5] *= -1.0
    # every remaining visit must now respect the rotation orientation
    for cyc in basis.cycles:
        for visit in all_visits[cyc]:
            e = _rotation_aligned_edge(scheme, visit)
            r = (
                ratio_entering(site, visit)
                if e == visit.enter_edge
                else ratio_leaving(site, visit)
            )
            if r < 0:
                raise SolveError("rotation sign normalization is inconsistent")


def solve_edge_equations(
    g: Graph,
    site: SiteAssignment,
    basis: CycleBasis,
    scheme: EmbeddingScheme,
) -> EdgeAssignment:
    """Edge entries from b_e**2 = -R_{v,e} R_{w,e}, as positive monomials.

    The right-hand side is cycle-independent (cycles sharing an edge have
    opposite ratios) and its sign matches the edge signature after the
    rotation normalization: negative exactly on odd-crosscap edges.  Signs of
    the coefficients are fixed later by the cycle equations.
    """
    rhs: dict[int, float] = {}
    for cyc in basis.cycles:
        visits = cycle_visits(g, cyc)
        r = len(visits)
        for i in range(r):
            e = visits[i].exit_edge
            value = -ratio_leaving(site, visits[i]) * ratio_entering(
                site, visits[(i + 1) % r]
            )
            if e in rhs:
                if abs(rhs[e] - value) > EDGE_EQ_TOL * max(1.0, abs(value)):
                    raise SolveError("edge equation inconsistent across cycles")
            else:
                rhs[e] = value
    coeffs = np.ones(g.num_edges)
    masks = []
    for e in range(g.num_edges):
        mask = scheme.crosscap_parity_mask(e)
        masks.append(mask)
        if e not in rhs:
            continue  # outside every basis cycle: unconstrained, stays 1
        value = rhs[e]
        negative = value < 0
        odd = int(mask).bit_count() % 2 == 1
        if negative != odd:
            raise SolveError(
                "edge equation sign disagrees with the scheme signature"
            )
        coeffs[e] = np.sqrt(abs(value))
    return EdgeAssignment(coeffs, tuple(masks))


def _monomial_product(pairs) -> tuple[float, int]:
    """Product of (coeff, mask) monomials: masks compose with i_k**2 = -1."""
    coeff = 1.0
    mask = 0
    for c, m in pairs:
        inter = mask & m
        if int(inter).bit_count() % 2:
            coeff = -coeff
        coeff *= c
        mask ^= m
    return coeff, mask


def solve_cycle_equations(
    g: Graph,
    site: SiteAssignment,
    edge: EdgeAssignment,
    basis: CycleBasis,
) -> EdgeAssignment:
    """Flip edge-entry signs so every basis cycle satisfies prod B = -prod U.

    B takes the sign of the dart-order traversal (positive from the lower
    endpoint).  The residual sign of each cycle is a GF(2) right-hand side;
    independence of the basis makes the system solvable.  Multicomplex
    monomials only contribute a global (-1) per doubly-crossed crosscap,
    which the same GF(2) pass absorbs.
    """
    rows = []
    rhs_bits = []
    for cyc in basis.cycles:
        visits = cycle_visits(g, cyc)
        r = len(visits)
        prod_u = 1.0
        terms = []
        for i in range(r):
            prod_u *= visit_u_entry(site, visits[i])
            e = visits[i].exit_edge
            v_from = visits[i].vertex
            v_to = visits[(i + 1) % r].vertex
            sign = 1.0 if v_from < v_to else -1.0
            terms.append((sign * edge.coeffs[e], edge.masks[e]))
        prod_b, mask_b = _monomial_product(terms)
        if mask_b != 0:
            raise SolveError(
                "basis cycle crosses some crosscap an odd number of times"
            )
        ratio = prod_b / prod_u
        if abs(abs(ratio) - 1.0) > 1e-6:
            raise SolveError("cycle equation residual is not a sign")
        rhs_bits.append(0 if ratio < 0 else 1)
        row = np.zeros(g.num_edges, dtype=np.uint8)
        for e_ in g.curve_edges(cyc):
            row[e_] = 1
        rows.append(row)
    solution = gf2_solve(np.array(rows, dtype=np.uint8), np.array(rhs_bits, dtype=np.uint8))
    if solution is None:
        raise SolveError("basis not independent")
    coeffs = edge.coeffs.copy()
    for e in range(g.num_edges):
        if solution[e]:
            coeffs[e] = -coeffs[e]
    return EdgeAssignment(coeffs, edge.masks)


@dataclass
class IncidenceMatrix:
    """Dart-indexed skew matrix with its construction context.

    class_values maps a crossing-parity class to (real coefficient,
    monomial subset mask): the common value of the curve functional on that
    class.  lam is the constant with Re(lam * F) = 1 on every class.
    """

    graph: Graph
    dart_graph: DartGraph
    ring: str
    skew: SkewMatrix
    site: SiteAssignment
    edge: EdgeAssignment
    reference_matching: PerfectMatching
    reference_kind: str  # "even-degree" | "all-links"
    lam: object = None
    class_values: dict = field(default_factory=dict)
    n_generators: int = 0

    @property
    def f0(self) -> float:
        value = self.class_values.get(0)
        return value[0] if value else None


def site_block_pfaffian(site: SiteAssignment, v: int) -> float:
    s, sbar, t, tbar, u, ubar = site.values[v]
    return s * sbar - t * tbar + u * ubar


def _assemble(g: Graph, d: DartGraph, site: SiteAssignment, edge: EdgeAssignment,
              ring: str, n_generators: int) -> SkewMatrix:
    n = d.num_darts
    if ring == MULTICOMPLEX:
        data = np.zeros((n, n, 1 << n_generators))
    elif ring == COMPLEX:
        data = np.zeros((n, n), dtype=np.complex128)
    else:
        data = np.zeros((n, n))
    for v in range(g.num_vertices):
        ids = d.vertex_dart_ids(v)
        for a in range(4):
            for b in range(a + 1, 4):
                val = site.entry(v, a, b)
                i, j = ids[a], ids[b]
                if ring == MULTICOMPLEX:
                    data[i, j, 0] = val
                    data[j, i, 0] = -val
                else:
                    data[i, j] = val
                    data[j, i] = -val
    for e in range(g.num_edges):
        i, j = d.link_edges[e]
        c, m = float(edge.coeffs[e]), edge.masks[e]
        if ring == MULTICOMPLEX:
            data[i, j, m] = c
            data[j, i, m] = -c
        elif ring == COMPLEX:
            val = c * (1j ** int(m).bit_count())
            data[i, j] = val
            data[j, i] = -val
        else:
            if m != 0:
                raise SolveError("real ring requested but an entry is imaginary")
            data[i, j] = c
            data[j, i] = -c
    return SkewMatrix(ring, data, n_generators if ring == MULTICOMPLEX else 0)


def build_incidence_matrix(
    g: Graph,
    scheme: EmbeddingScheme,
    ring: str = REAL,
    surviving_curves: list[CurveMask] | None = None,
    deleted_edges=(),
    rng: np.random.Generator | None = None,
) -> IncidenceMatrix:
    """Run the three solvers over the face-boundary family and assemble.

    For the multicomplex ring, each edge entry carries prod i_k over its
    crosscap list; the constant lam and the class table are calibrated from
    weighted Pfaffians of the assembled matrix (restricted to
    ``surviving_curves`` when the matrix will be used with link deletions).
    """
    if not g.is_regular(4):
        raise GraphError("incidence construction needs a 4-regular graph")
    if not g.is_two_connected():
        raise GraphError("not 2-connected")
    report = trace_faces(g, scheme)
    if not report.faces_are_cycles:
        raise SchemeError(
            "faces not cycles; apply subdivide_to_cycle_faces first"
        )
    if ring == REAL and any(scheme.signature(e) < 0 for e in range(g.num_edges)):
        raise SolveError("real ring impossible: scheme has odd-crosscap edges")
    basis = face_boundary_basis(g, scheme, report)
    d = build_dart_graph(g)
    site = solve_site_equations(g, basis, scheme)
    edge = solve_edge_equations(g, site, basis, scheme)
    edge = solve_cycle_equations(g, site, edge, basis)
    n_gen = scheme.n_crosscaps if ring in (MULTICOMPLEX, COMPLEX) else 0
    skew = _assemble(g, d, site, edge, ring, n_gen)
    m0 = even_degree_matching(d)
    f0 = float(np.prod([site_block_pfaffian(site, v) for v in range(g.num_vertices)]))
    inc = IncidenceMatrix(
        graph=g,
        dart_graph=d,
        ring=ring,
        skew=skew,
        site=site,
        edge=edge,
        reference_matching=m0,
        reference_kind="even-degree",
        n_generators=n_gen if ring == MULTICOMPLEX else 0,
    )
    if ring == MULTICOMPLEX and n_gen > 0:
        _calibrate_multicomplex(inc, scheme, surviving_curves, deleted_edges, rng)
    elif ring == REAL or all(m == 0 for m in edge.masks):
        inc.class_values = {0: (f0, 0)}
        inc.lam = f0 if ring == REAL else complex(f0)
    return inc


def weighted_matrix(
    a: SkewMatrix,
    d: DartGraph,
    m0: PerfectMatching,
    weights,
) -> SkewMatrix:
    """Scale link entries by w (outside m0) or 1/w (inside m0)."""
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    data = a.data.copy()
    for e in range(len(d.link_edges)):
        i, j = d.link_edges[e]
        factor = 1.0 / w[e] if (i, j) in m0 else w[e]
        data[i, j] = data[i, j] * factor
        data[j, i] = data[j, i] * factor
    return SkewMatrix(a.ring, data, a.n_generators)


def zero_link_entries(a: SkewMatrix, d: DartGraph, edges) -> SkewMatrix:
    """Kill the link entries of the given edges (deletion under an
    empty-intersection reference matching)."""
    data = a.data.copy()
    for e in edges:
        i, j = d.link_edges[e]
        data[i, j] = 0 * data[i, j]
        data[j, i] = 0 * data[j, i]
    return SkewMatrix(a.ring, data, a.n_generators)


def zero_site_entries_at(a: SkewMatrix, d: DartGraph, edges) -> SkewMatrix:
    """Kill the site entries touching darts of the given edges (deletion
    under the all-links reference matching)."""
    targets = set()
    for e in edges:
        targets.update(d.link_edges[e])
    data = a.data.copy()
    for i, j in d.site_edges:
        if i in targets or j in targets:
            data[i, j] = 0 * data[i, j]
            data[j, i] = 0 * data[j, i]
    return SkewMatrix(a.ring, data, a.n_generators)


def _calibrate_multicomplex(inc, scheme, surviving_curves, deleted_edges, rng):
    """Measure the per-class functional values and build the constant lam.

    Writes Pf(A(w)) = sum_C w(C) F(C) for a batch of random weight draws and
    solves the linear system for the class values F (one unknown multicomplex
    value per crossing-parity class).  When the matrix will be used with
    deleted edges, the deletion-zeroed matrix is measured so the Pfaffian
    sums over exactly the surviving curves.  Each class value must be a
    single monomial matching its class; signs are then normalized toward
    F = f0 * mu(class) by global sign flips of the i_k-odd entries, and lam
    is assembled so that Re(lam * F) = 1 on every class.
    """
    g = inc.graph
    d = inc.dart_graph
    n_gen = inc.n_generators
    if rng is None:
        rng = np.random.default_rng(718281828)
    if surviving_curves is None:
        surviving_curves = enumerate_closed_curves(g)
    measured = (
        zero_link_entries(inc.skew, d, deleted_edges) if deleted_edges else inc.skew
    )
    classes: dict[int, list[CurveMask]] = {}
    for c in surviving_curves:
        classes.setdefault(scheme.curve_class(c), []).append(c)
    class_masks = sorted(classes)
    n_cls = len(class_masks)
    n_draws = 2 * n_cls + 4
    rows = np.zeros((n_draws, n_cls))
    pf_coeffs = np.zeros((n_draws, 1 << n_gen))
    for t in range(n_draws):
        w = rng.uniform(0.4, 1.6, size=g.num_edges)
        for ci, cm in enumerate(class_masks):
            rows[t, ci] = sum(
                float(np.prod([w[e] for e in g.curve_edges(c)])) for c in classes[cm]
            )
        aw = weighted_matrix(measured, d, inc.reference_matching, w)
        pf_coeffs[t] = pfaffian(aw).coeffs
    sol, residual, rank, _sv = np.linalg.lstsq(rows, pf_coeffs, rcond=None)
    if rank < n_cls:
        raise SolveError("class calibration system is rank deficient")
    fit = rows @ sol
    scale = max(1.0, float(np.max(np.abs(pf_coeffs))))
    if np.max(np.abs(fit - pf_coeffs)) > CALIBRATION_TOL * scale:
        raise SolveError(
            "scheme/matrix invalid: functional is not constant per class"
        )
    class_values: dict[int, float] = {}
    for ci, cm in enumerate(class_masks):
        vec = sol[ci]
        coeff = vec[cm]
        off = np.max(np.abs(np.delete(vec, cm))) if vec.size > 1 else 0.0
        if abs(coeff) < 1e-9 or off > CALIBRATION_TOL * max(1.0, abs(coeff)):
            raise SolveError(
                "scheme/matrix invalid: class value is not the expected monomial"
            )
        class_values[cm] = float(coeff)
    _normalize_class_signs(inc, class_values, class_masks)
    lam = MulticomplexValue.zero(n_gen)
    for cm, coeff in class_values.items():
        weight = (-1.0) ** int(cm).bit_count() / coeff
        lam = lam + MulticomplexValue.monomial(n_gen, cm, weight)
    inc.class_values = {cm: (coeff, cm) for cm, coeff in class_values.items()}
    inc.lam = lam


def _normalize_class_signs(inc, class_values, class_masks):
    """Flip i_k-odd entries so every class value has the sign of f0.

    A flip of generator k negates the value on classes with that parity bit
    set; the achievable sign patterns form the span of the parity bits over
    the observed classes, so the repair solves a small GF(2) system.  When
    the system is inconsistent the raw signs are kept (lam absorbs them).
    """
    f0_sign = 1.0 if class_values[0] > 0 else -1.0
    defects = np.array(
        [0 if class_values[cm] * f0_sign > 0 else 1 for cm in class_masks],
        dtype=np.uint8,
    )
    if not defects.any():
        return
    n_gen = inc.n_generators
    rows = np.zeros((len(class_masks), n_gen), dtype=np.uint8)
    for i, cm in enumerate(class_masks):
        for k in range(n_gen):
            rows[i, k] = (cm >> k) & 1
    x = gf2_solve(rows, defects)
    if x is None:
        return
    # flipping generator k requires every basis face to cross it evenly,
    # which holds because face boundaries have trivial crossing parity
    flip_mask = 0
    for k in range(n_gen):
        if x[k]:
            flip_mask |= 1 << k
    if flip_mask == 0:
        return
    edge = inc.edge
    coeffs = edge.coeffs.copy()
    d = inc.dart_graph
    data = inc.skew.data.copy()
    for e in range(inc.graph.num_edges):
        if int(edge.masks[e] & flip_mask).bit_count() % 2:
            coeffs[e] = -coeffs[e]
            i, j = d.link_edges[e]
            data[i, j] = -data[i, j]
            data[j, i] = -data[j, i]
    inc.edge = EdgeAssignment(coeffs, edge.masks)
    inc.skew = SkewMatrix(inc.skew.ring, data, inc.skew.n_generators)
    for i, cm in enumerate(class_masks):
        if int(cm & flip_mask).bit_count() % 2:
            class_values[cm] = -class_values[cm]


def reduce_to_minor(
    inc: IncidenceMatrix,
    t,
    g1: Graph,
) -> IncidenceMatrix:
    """Integrate out the darts of the transform's edges (all-links reference).

    Site entries touching deleted edges are zeroed first so curves through
    them drop out; the derived matrix on the remaining darts is an incidence
    matrix on the minor's dart graph, reindexed to its dart order.  The
    functional constants transfer as lam1 = sign * Pf(A_K)**(n-p-1) * lam2
    in the real ring; multicomplex class tables are re-measured on the minor.
    """
    g2 = inc.graph
    d2 = inc.dart_graph
    checked = zero_site_entries_at(inc.skew, d2, t.deleted)
    k_indices = sorted(
        i
        for e in (set(t.deleted) | set(t.contracted))
        for i in d2.link_edges[e]
    )
    if not k_indices:
        return inc
    pf_k = pfaffian(submatrix(checked, k_indices))
    pf_k_mag = pf_k.max_abs() if inc.ring == MULTICOMPLEX else abs(pf_k)
    if pf_k_mag < 1e-12 * max(1.0, inc.skew.scale_abs()):
        raise SolveError("degenerate reduction")
    reduced = derived_matrix(checked, k_indices)
    comp = [i for i in range(d2.num_darts) if i not in set(k_indices)]
    d1 = build_dart_graph(g1)
    # position of each surviving dart in the minor's dart order
    target = []
    for i in comp:
        v2, e2 = d2.darts[i]
        dart1 = (t.vertex_map[v2], t.edge_map[e2])
        target.append(d1.dart_index[dart1])
    perm = np.argsort(np.array(target))
    data = reduced.data[perm][:, perm] if reduced.data.ndim == 2 else reduced.data[perm][:, perm, :]
    sign = _permutation_sign(list(perm))
    skew1 = SkewMatrix(inc.skew.ring, data, inc.skew.n_generators)
    m1 = canonical_matching(d1)
    out = IncidenceMatrix(
        graph=g1,
        dart_graph=d1,
        ring=inc.ring,
        skew=skew1,
        site=inc.site,
        edge=inc.edge,
        reference_matching=m1,
        reference_kind="all-links",
        n_generators=inc.n_generators,
    )
    if inc.ring == REAL:
        n = d2.num_darts // 2
        p = len(k_indices) // 2
        lam1 = sign * (pf_k ** (n - p - 1)) * inc.lam
        out.lam = lam1
        out.class_values = {0: (lam1, 0)}
    else:
        calibrate_from_curves(out)
    return out


def _permutation_sign(perm: list[int]) -> int:
    inversions = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def calibrate_from_curves(inc: IncidenceMatrix, curves=None):
    """Recover the class table of a small incidence matrix by enumeration.

    Evaluates the curve functional directly (factorized matching sums) for
    every closed curve, groups equal values and rebuilds lam.
    """
    g = inc.graph
    if curves is None:
        curves = enumerate_closed_curves(g)
    m0 = inc.reference_matching
    table: dict[int, float] = {}
    for c in curves:
        value = f_weight(inc.skew, inc.dart_graph, m0, c)
        if inc.ring == MULTICOMPLEX:
            vec = value.coeffs
            mask = int(np.argmax(np.abs(vec)))
            coeff = float(vec[mask])
            off = np.max(np.abs(np.delete(vec, mask))) if vec.size > 1 else 0.0
            if abs(coeff) < 1e-10 or off > CALIBRATION_TOL * abs(coeff):
                raise SolveError("curve functional is not a single monomial")
        else:
            mask = 0
            coeff = float(np.real(value))
            if abs(np.imag(complex(value))) > CALIBRATION_TOL:
                raise SolveError("curve functional is not real")
            if abs(coeff) < 1e-12:
                raise SolveError("curve functional vanishes")
        if mask in table:
            if abs(table[mask] - coeff) > CALIBRATION_TOL * max(1.0, abs(coeff)):
                raise SolveError("curve functional is not constant per class")
        else:
            table[mask] = coeff
    if inc.ring == MULTICOMPLEX:
        lam = MulticomplexValue.zero(inc.n_generators)
        for mask, coeff in table.items():
            lam = lam + MulticomplexValue.monomial(
                inc.n_generators, mask, (-1.0) ** int(mask).bit_count() / coeff
            )
    else:
        lam = table[0]
    inc.class_values = {mask: (coeff, mask) for mask, coeff in table.items()}
    inc.lam = lam


# ---------------------------------------------------------------------------
# K5 / K3,3 obstructions


# two cycle families per graph, as edge-id tuples; the hexagon family and
# its partner share every length-4 subchain with equal multiplicity
K33_CYCLES = (
    (0, 3, 5, 8, 7, 1),
    (0, 6, 8, 2),
    (3, 6, 7, 4),
)
K33_CYCLES_PRIME = (
    (0, 3, 4, 7, 8, 2),
    (0, 6, 7, 1),
    (3, 6, 8, 5),
)
K5_CYCLES = (
    (4, 3, 6),
    (0, 1, 2, 6),
    (0, 7, 2, 9, 4),
    (0, 8, 3, 2, 5),
)
K5_CYCLES_PRIME = (
    (4, 9, 2, 6),
    (0, 8, 3, 6),
    (0, 7, 2, 5),
    (0, 1, 2, 3, 4),
)


def _edges_to_mask(edges) -> int:
    mask = 0
    for e in edges:
        mask |= 1 << e
    return mask


def random_incidence_matrix(d: DartGraph, rng: np.random.Generator) -> SkewMatrix:
    """Random real skew matrix supported on the dart-graph edge pattern."""
    n = d.num_darts
    data = np.zeros((n, n))
    for i, j in d.site_edges + d.link_edges:
        v = rng.normal()
        data[i, j] = v
        data[j, i] = -v
    return SkewMatrix(REAL, data)


def obstruction_check(which: str, a: SkewMatrix, d: DartGraph | None = None) -> dict:
    """Evaluate the two cycle families whose functional products must be
    opposite; no choice of entries can make the functional constant."""
    from .fixtures import get_fixture

    if which == "k5":
        fixture = get_fixture("k5-projective")
        fam, fam_prime = K5_CYCLES, K5_CYCLES_PRIME
    elif which == "k33":
        fixture = get_fixture("k33-projective")
        fam, fam_prime = K33_CYCLES, K33_CYCLES_PRIME
    else:
        raise ValueError("which must be 'k5' or 'k33'")
    g = fixture.graph
    if d is None or d.graph.edges != g.edges:
        d = build_dart_graph(g)
    if a.order != d.num_darts:
        raise GraphError("matrix has the wrong dart pattern")
    from .darts import _check_zero_pattern

    _check_zero_pattern(a, d)
    m0 = canonical_matching(d)
    values = [f_weight(a, d, m0, _edges_to_mask(cyc)) for cyc in fam]
    values_prime = [f_weight(a, d, m0, _edges_to_mask(cyc)) for cyc in fam_prime]
    lhs = float(np.prod(values))
    rhs = float(np.prod(values_prime))
    scale = max(abs(lhs), abs(rhs))
    if scale == 0.0:
        return {"lhs": lhs, "rhs": rhs, "relative_residual": 0.0, "degenerate": True}
    return {
        "lhs": lhs,
        "rhs": rhs,
        "relative_residual": abs(lhs + rhs) / scale,
        "degenerate": False,
    }
