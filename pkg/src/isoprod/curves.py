"""Combinatorial stable curves as decorated dual graphs.

A dual graph records the combinatorial type of a nodal curve: vertices are
irreducible components labeled by their normalization genus, half-edges are
the branches over the nodes, edges pair two half-edges into a node (a
self-loop keeps both half-edges on one vertex), and marks are marked points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GraphError


@dataclass(frozen=True)
class DualGraph:
    """Validated dual graph; build through :func:`build_graph`.

    ``genera[v]`` is the normalization genus of vertex ``v``,
    ``half_edge_vertex[h]`` the vertex carrying half-edge ``h``,
    ``edges`` the node pairs (each half-edge in exactly one pair), and
    ``marks[m]`` the vertex carrying mark ``m``.
    """

    genera: tuple[int, ...]
    half_edge_vertex: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    marks: tuple[int, ...] = ()

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_half_edges(self) -> int:
        return len(self.half_edge_vertex)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def half_edges_at(self, v: int) -> list[int]:
        return [h for h, w in enumerate(self.half_edge_vertex) if w == v]

    def marks_at(self, v: int) -> list[int]:
        return [m for m, w in enumerate(self.marks) if w == v]

    def degree(self, v: int) -> int:
        return sum(1 for w in self.half_edge_vertex if w == v)

    def edge_of(self, h: int) -> int:
        for n, (p, q) in enumerate(self.edges):
            if h in (p, q):
                return n
        raise GraphError(f"half-edge {h} lies on no edge")


@dataclass(frozen=True)
class T1Breakdown:
    """First-order deformation dimension of a stable curve, by source:
    ``delta`` from the nodes, ``branch_term`` = 2*delta from the branch
    points on the normalization, ``minus_chi`` = 3*sum(g_i) - 3*nu from the
    normalization's tangent sheaf."""

    delta: int
    branch_term: int
    minus_chi: int
    total: int


def build_graph(
    genera: Sequence[int],
    half_edge_vertices: Sequence[int],
    edges: Iterable[Sequence[int]],
    marks: Sequence[int] = (),
    allow_disconnected: bool = False,
) -> DualGraph:
    """Validate raw graph data and freeze it.

    Checks structure (each half-edge on exactly one edge, ids in range),
    stability of every vertex (2g - 2 + degree + marks > 0), and
    connectivity unless ``allow_disconnected``.  Raises GraphError listing
    every offending item.
    """
    problems: list[str] = []
    nv = len(genera)
    if nv < 1:
        raise GraphError("graph needs at least one vertex")
    for v, g in enumerate(genera):
        if not isinstance(g, int) or g < 0:
            problems.append(f"vertex {v}: genus must be a nonnegative integer, got {g!r}")
    nh = len(half_edge_vertices)
    for h, v in enumerate(half_edge_vertices):
        if not 0 <= v < nv:
            problems.append(f"half-edge {h}: vertex {v} out of range")
    edge_list: list[tuple[int, int]] = []
    use_count = [0] * nh
    for n, pair in enumerate(edges):
        pair = tuple(pair)
        if len(pair) != 2 or pair[0] == pair[1]:
            problems.append(f"edge {n}: must pair two distinct half-edges, got {pair!r}")
            continue
        for h in pair:
            if not 0 <= h < nh:
                problems.append(f"edge {n}: half-edge {h} out of range")
                break
        else:
            use_count[pair[0]] += 1
            use_count[pair[1]] += 1
            edge_list.append((min(pair), max(pair)))
    for h, c in enumerate(use_count):
        if c == 0:
            problems.append(f"half-edge {h}: dangling (belongs to no edge)")
        elif c > 1:
            problems.append(f"half-edge {h}: belongs to {c} edges")
    for m, v in enumerate(marks):
        if not 0 <= v < nv:
            problems.append(f"mark {m}: vertex {v} out of range")
    if problems:
        raise GraphError("invalid graph structure:\n" + "\n".join(problems))

    graph = DualGraph(
        tuple(genera), tuple(half_edge_vertices), tuple(edge_list), tuple(marks)
    )
    unstable = [
        v
        for v in range(nv)
        if 2 * graph.genera[v] - 2 + graph.degree(v) + len(graph.marks_at(v)) <= 0
    ]
    if unstable:
        raise GraphError(
            "unstable vertices (2g - 2 + branches + marks must be > 0): "
            + ", ".join(map(str, unstable))
        )
    if not allow_disconnected and len(connected_components(graph)) > 1:
        raise GraphError("graph is disconnected (pass allow_disconnected to permit)")
    return graph


def connected_components(graph: DualGraph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted."""
    adj: dict[int, set[int]] = {v: set() for v in range(graph.n_vertices)}
    for p, q in graph.edges:
        a, b = graph.half_edge_vertex[p], graph.half_edge_vertex[q]
        adj[a].add(b)
        adj[b].add(a)
    seen: set[int] = set()
    comps = []
    for v in range(graph.n_vertices):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            w = stack.pop()
            comp.append(w)
            for u in adj[w]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _require_connected(graph: DualGraph) -> None:
    if len(connected_components(graph)) > 1:
        raise GraphError("operation requires a connected graph")


def arithmetic_genus(graph: DualGraph) -> int:
    """g = sum(g_i) + delta - nu + 1 for a connected nodal curve."""
    _require_connected(graph)
    return sum(graph.genera) + graph.n_edges - graph.n_vertices + 1


def component_arithmetic_genera(graph: DualGraph) -> list[int]:
    """Arithmetic genus of each connected component (for normalization-side data)."""
    out = []
    for comp in connected_components(graph):
        vs = set(comp)
        delta = sum(
            1
            for p, q in graph.edges
            if graph.half_edge_vertex[p] in vs
        )
        out.append(sum(graph.genera[v] for v in comp) + delta - len(comp) + 1)
    return out


def t1_dimension(graph: DualGraph) -> T1Breakdown:
    """Dimension of the first-order deformation space of the stable curve.

    Three pieces: delta (one per node), 2*delta (branch points on the
    normalization), and 3*sum(g_i) - 3*nu; the total must equal 3g - 3,
    which is asserted rather than assumed.
    """
    if graph.marks:
        raise GraphError("T1 of marked curves not in scope")
    _require_connected(graph)
    delta = graph.n_edges
    branch_term = 2 * delta
    minus_chi = 3 * sum(graph.genera) - 3 * graph.n_vertices
    total = delta + branch_term + minus_chi
    g = arithmetic_genus(graph)
    if total != 3 * g - 3:
        raise AssertionError(
            f"internal inconsistency: T1 total {total} != 3g-3 = {3 * g - 3}"
        )
    return T1Breakdown(delta, branch_term, minus_chi, total)
