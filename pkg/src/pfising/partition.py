"""Partition-function evaluation routes and the Ising correspondence.

Every route computes Z_G(w) = sum over closed curves of the edge-weight
products.  The Pfaffian routes run the pipeline
4-regularize -> subdivide-to-cycle-faces -> solve/assemble, evaluate on the
host graph directly (helper edges keep weight 1, deleted helper chords have
their link entries zeroed) and divide out the calibrated constant:

* planar:        Z = Pf(A(w)) / lam                     (one real Pfaffian)
* multicomplex:  Z = Re(lam * Pf(A(w)))                 (one Pfaffian in C_n)
* complex sum:   Z = Re sum_j H_j(lam)/2**n * Pf(H_j(A)(w))   (2**n terms)
* real sum:      Z = sum_j H_j(lam)/2**(n-1) * Pf(H_j(A)(w))  (2**(n-1) real
                 terms, available when every entry lies in the even
                 subalgebra, e.g. schemes derived from orientable embeddings)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .darts import f_weight
from .embeddings import EmbeddingScheme, SchemeError, resolve_planar_scheme, trace_faces
from .graphs import Graph, GraphError, enumerate_closed_curves
from .kasteleyn import (
    IncidenceMatrix,
    build_incidence_matrix,
    weighted_matrix,
    zero_link_entries,
)
from .minors import (
    compose_transforms,
    curve_preimage,
    four_regularize,
    subdivide_to_cycle_faces,
    transported_weights,
)
from .multicomplex import (
    all_characters,
    even_subalgebra_embed,
    mc_re,
)
from .skewpf import COMPLEX, MULTICOMPLEX, REAL, SkewMatrix, pfaffian

ISING_BRUTEFORCE_MAX_VERTICES = 20


@dataclass(frozen=True)
class WeightFunction:
    """Strictly positive weight per edge."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if np.any(v <= 0):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "values", v)

    @staticmethod
    def uniform(x: float, num_edges: int) -> "WeightFunction":
        return WeightFunction(np.full(num_edges, float(x)))

    def __getitem__(self, e: int) -> float:
        return float(self.values[e])

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class IsingModel:
    """Ferromagnetic Ising model: couplings J_e >= 0 at inverse temperature beta."""

    graph: Graph
    couplings: np.ndarray
    beta: float

    def __post_init__(self):
        j = np.asarray(self.couplings, dtype=np.float64)
        if j.shape != (self.graph.num_edges,):
            raise ValueError("one coupling per edge required")
        if np.any(j < 0):
            raise ValueError("ferromagnetic couplings must be nonnegative")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        object.__setattr__(self, "couplings", j)


def z_bruteforce(g: Graph, w: WeightFunction) -> float:
    """Direct sum over all 2**beta1 closed curves (the oracle)."""
    total = 0.0
    for c in enumerate_closed_curves(g):
        term = 1.0
        e = 0
        m = c
        while m:
            if m & 1:
                term *= w[e]
            m >>= 1
            e += 1
        total += term
    return total


class PlanarPfaffianSolver:
    """Reusable planar pipeline: build once, evaluate many weight draws."""

    def __init__(self, g: Graph, scheme: EmbeddingScheme):
        self.graph = g
        canonical = resolve_planar_scheme(g, scheme)
        g1, s1, t1 = four_regularize(g, canonical)
        g2, s2, t2 = subdivide_to_cycle_faces(g1, s1)
        self.host = g2
        self.transform = compose_transforms(t2, t1)
        self.inc = build_incidence_matrix(g2, s2, REAL)
        self.zeroed = zero_link_entries(
            self.inc.skew, self.inc.dart_graph, self.transform.deleted
        )

    def evaluate(self, w: WeightFunction) -> float:
        wt = transported_weights(self.transform, w.values, self.host.num_edges)
        aw = weighted_matrix(
            self.zeroed, self.inc.dart_graph, self.inc.reference_matching, wt
        )
        return float(pfaffian(aw)) / self.inc.lam


class NonplanarSolver:
    """Multicomplex pipeline for a crosscap-annotated scheme."""

    def __init__(self, g: Graph, scheme: EmbeddingScheme,
                 rng: np.random.Generator | None = None):
        if scheme.n_crosscaps < 1:
            raise SchemeError("nonplanar route needs a crosscap-annotated scheme")
        self.graph = g
        self.n_generators = scheme.n_crosscaps
        g1, s1, t1 = four_regularize(g, scheme)
        g2, s2, t2 = subdivide_to_cycle_faces(g1, s1)
        self.host = g2
        self.host_scheme = s2
        self.transform = compose_transforms(t2, t1)
        curves = enumerate_closed_curves(g)
        if self.transform.is_identity:
            surviving = curves
        else:
            surviving = [curve_preimage(g2, self.transform, c) for c in curves]
        self.inc = build_incidence_matrix(
            g2,
            s2,
            MULTICOMPLEX,
            surviving_curves=surviving,
            deleted_edges=self.transform.deleted,
            rng=rng,
        )
        self.zeroed = zero_link_entries(
            self.inc.skew, self.inc.dart_graph, self.transform.deleted
        )

    @property
    def class_table(self) -> dict:
        return dict(self.inc.class_values)

    def _weighted(self, w: WeightFunction) -> SkewMatrix:
        wt = transported_weights(self.transform, w.values, self.host.num_edges)
        return weighted_matrix(
            self.zeroed, self.inc.dart_graph, self.inc.reference_matching, wt
        )

    def evaluate_multicomplex(self, w: WeightFunction) -> float:
        return mc_re(self.inc.lam * pfaffian(self._weighted(w)))

    def evaluate_complex_sum(self, w: WeightFunction) -> float:
        aw = self._weighted(w)
        n = self.n_generators
        total = 0.0 + 0.0j
        for h in all_characters(n):
            lam_j = h.apply(self.inc.lam) / (1 << n)
            img = aw.character_image(h)
            total += lam_j * pfaffian(img)
        return float(total.real)

    def evaluate_real_sum(self, w: WeightFunction) -> float:
        n = self.n_generators
        masks = self.inc.edge.masks
        if any(int(m).bit_count() % 2 for m in masks):
            raise SchemeError(
                "scheme not orientable-derived; use complex sum"
            )
        lam_even = even_subalgebra_embed(self.inc.lam, tol=1e-12)
        aw = self._weighted(w)
        n_even = n - 1
        total = 0.0
        for bits in range(1 << n_even):
            signs = tuple(1 if bits >> j & 1 == 0 else -1 for j in range(n_even))
            data = _even_real_image(aw, signs)
            lam_j = lam_even.real_character(signs) / (1 << n_even)
            total += lam_j * float(pfaffian(SkewMatrix(REAL, data)))
        return total


def _even_real_image(a: SkewMatrix, signs: tuple[int, ...]) -> np.ndarray:
    """Real image of an even-subalgebra matrix under e_j -> signs[j-1]."""
    from .multicomplex import _even_monomial_to_e

    n_gen = a.n_generators
    out = np.zeros(a.data.shape[:2])
    for mask in range(1 << n_gen):
        layer = a.data[:, :, mask]
        if not np.any(layer):
            continue
        e_subset, sign = _even_monomial_to_e(mask, n_gen)
        factor = sign
        for j in range(n_gen - 1):
            if e_subset >> j & 1:
                factor *= signs[j]
        out += factor * layer
    return out


def z_pfaffian_planar(g: Graph, s: EmbeddingScheme, w: WeightFunction) -> float:
    """Single real Pfaffian for a genus-0 scheme."""
    return PlanarPfaffianSolver(g, s).evaluate(w)


def z_multicomplex(g: Graph, s: EmbeddingScheme, w: WeightFunction) -> float:
    """Real part of one multicomplex Pfaffian (crosscap-annotated scheme)."""
    return NonplanarSolver(g, s).evaluate_multicomplex(w)


def z_complex_sum(g: Graph, s: EmbeddingScheme, w: WeightFunction) -> float:
    """Expansion into 2**n complex Pfaffians via the characters of C_n."""
    return NonplanarSolver(g, s).evaluate_complex_sum(w)


def z_real_sum(g: Graph, s: EmbeddingScheme, w: WeightFunction) -> float:
    """Expansion into 2**(n-1) real Pfaffians via the even subalgebra."""
    return NonplanarSolver(g, s).evaluate_real_sum(w)


def ising_weights(m: IsingModel) -> WeightFunction:
    """High-temperature weights w(e) = tanh(beta * J_e).

    This is the assignment under which 2**|V| prod cosh(beta J_e) Z_G(w)
    equals the literal spin sum (pinned by the ising_bruteforce oracle).
    """
    w = np.tanh(m.beta * m.couplings)
    if np.any(w <= 0):
        raise ValueError("zero coupling gives a zero weight; drop the edge instead")
    return WeightFunction(w)


def ising_prefactor(m: IsingModel) -> float:
    return float(2.0 ** m.graph.num_vertices * np.prod(np.cosh(m.beta * m.couplings)))


def ising_z(m: IsingModel, method: str = "auto",
            scheme: EmbeddingScheme | None = None) -> float:
    """Ising partition function through the closed-curve correspondence."""
    w = ising_weights(m)
    pref = ising_prefactor(m)
    if method == "auto":
        if scheme is None:
            method = "brute"
        else:
            report = trace_faces(m.graph, scheme)
            method = "planar" if report.euler_characteristic == 2 else "multicomplex"
    if method == "brute":
        return pref * z_bruteforce(m.graph, w)
    if scheme is None:
        raise ValueError(f"method {method!r} needs an embedding scheme")
    table = {
        "planar": z_pfaffian_planar,
        "multicomplex": z_multicomplex,
        "complex-sum": z_complex_sum,
        "real-sum": z_real_sum,
    }
    if method not in table:
        raise ValueError(f"unknown method {method!r}")
    return pref * table[method](m.graph, scheme, w)


def ising_bruteforce(m: IsingModel) -> float:
    """Direct 2**|V| spin sum."""
    n = m.graph.num_vertices
    if n > ISING_BRUTEFORCE_MAX_VERTICES:
        raise GraphError(
            f"{n} vertices exceeds the spin-sum guard {ISING_BRUTEFORCE_MAX_VERTICES}"
        )
    states = np.arange(1 << n, dtype=np.uint32)
    spins = 1.0 - 2.0 * ((states[:, None] >> np.arange(n)[None, :]) & 1)
    energy = np.zeros(1 << n)
    for e, (u, v) in enumerate(m.graph.edges):
        energy += m.couplings[e] * spins[:, u] * spins[:, v]
    return float(np.sum(np.exp(m.beta * energy)))


def curve_functional_table(inc: IncidenceMatrix, curves=None) -> list:
    """(curve, value) pairs of the matching-sum functional, for reports."""
    g = inc.graph
    if curves is None:
        curves = enumerate_closed_curves(g)
    out = []
    for c in curves:
        out.append((c, f_weight(inc.skew, inc.dart_graph, inc.reference_matching, c)))
    return out
