"""Text file formats for graphs, embedding schemes, weights and matrix dumps.

Graph file: one line ``u v`` per edge, 0-based integers, ``#`` comments;
the edge id is the line order.

Scheme file: one rotation line per vertex, ``v: e_a e_b e_c e_d`` (edge ids
in cyclic order) -- the first |V| colon lines are rotations -- followed by
optional crosscap lines ``e: k1 k2 ...``; edges without a line carry no
crosscaps.

Weights / couplings file: lines ``e value``.
"""
from __future__ import annotations

import numpy as np

from .embeddings import EmbeddingScheme
from .graphs import Graph
from .multicomplex import MulticomplexValue
from .skewpf import MULTICOMPLEX, SkewMatrix


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_graph(text: str) -> Graph:
    edges = []
    max_vertex = -1
    for line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad graph line: {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        max_vertex = max(max_vertex, u, v)
    return Graph(max_vertex + 1, tuple(edges))


def format_graph(g: Graph) -> str:
    return "\n".join(f"{u} {v}" for u, v in g.edges) + "\n"


def parse_scheme(text: str, g: Graph) -> EmbeddingScheme:
    lines = _content_lines(text)
    if len(lines) < g.num_vertices:
        raise ValueError("scheme file has fewer rotation lines than vertices")
    rotations: dict[int, tuple[int, ...]] = {}
    for line in lines[: g.num_vertices]:
        head, _, rest = line.partition(":")
        v = int(head)
        rotations[v] = tuple(int(tok) for tok in rest.split())
    if sorted(rotations) != list(range(g.num_vertices)):
        raise ValueError("rotation lines do not cover every vertex exactly once")
    caps = [() for _ in range(g.num_edges)]
    n_caps = 0
    for line in lines[g.num_vertices:]:
        head, _, rest = line.partition(":")
        e = int(head)
        ks = tuple(int(tok) for tok in rest.split())
        caps[e] = ks
        n_caps = max(n_caps, max(ks, default=0))
    scheme = EmbeddingScheme(
        tuple(rotations[v] for v in range(g.num_vertices)), tuple(caps), n_caps
    )
    scheme.validate(g)
    return scheme


def format_scheme(s: EmbeddingScheme) -> str:
    lines = [
        f"{v}: " + " ".join(str(e) for e in rot)
        for v, rot in enumerate(s.rotations)
    ]
    for e, caps in enumerate(s.crosscaps):
        if caps:
            lines.append(f"{e}: " + " ".join(str(k) for k in caps))
    return "\n".join(lines) + "\n"


def parse_edge_values(text: str, num_edges: int, default: float | None = None) -> np.ndarray:
    out = np.full(num_edges, np.nan if default is None else default)
    for line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge-value line: {line!r}")
        out[int(parts[0])] = float(parts[1])
    if np.any(np.isnan(out)):
        missing = [e for e in range(num_edges) if np.isnan(out[e])]
        raise ValueError(f"missing values for edges {missing}")
    return out


def parse_weight_spec(spec: str, num_edges: int) -> np.ndarray:
    """Either ``uniform:x`` or a path to an edge-value file."""
    if spec.startswith("uniform:"):
        return np.full(num_edges, float(spec.split(":", 1)[1]))
    with open(spec) as fh:
        return parse_edge_values(fh.read(), num_edges)


def format_matrix(a: SkewMatrix, labels=None) -> str:
    """Header (order, ring, labels) plus one ``i j value`` triple per entry.

    Multicomplex values print as subset-mask:coefficient pairs.
    """
    lines = [f"order {a.order}", f"ring {a.ring}"]
    if a.ring == MULTICOMPLEX:
        lines.append(f"generators {a.n_generators}")
    if labels is not None:
        lines.append("labels " + " ".join(f"{v},{e}" for v, e in labels))
    for i in range(a.order):
        for j in range(i + 1, a.order):
            entry = a.data[i, j]
            if a.ring == MULTICOMPLEX:
                nz = [
                    f"{mask}:{entry[mask]:.17g}"
                    for mask in range(entry.shape[0])
                    if entry[mask] != 0.0
                ]
                if nz:
                    lines.append(f"{i} {j} " + " ".join(nz))
            elif entry != 0:
                if a.ring == "complex":
                    lines.append(f"{i} {j} {entry.real:.17g}{entry.imag:+.17g}j")
                else:
                    lines.append(f"{i} {j} {entry:.17g}")
    return "\n".join(lines) + "\n"
