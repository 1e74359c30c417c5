"""Equivariant node smoothings and constancy of the invariant deformation count.

Smoothing a node orbit contracts the orbit's edges in the dual graph,
merging the incident components equivariantly; the invariant deformation
dimension is locally constant across such smoothings, and
:func:`check_constancy` verifies that on an explicit list of strata.

Only three local models around a node are smoothed automatically:
a trivial edge stabilizer, a cyclic branch-preserving stabilizer acting
faithfully on a branch tangent line (with inverse characters on the two
branches, so the smoothing parameter is fixed), and an order-2 stabilizer
swapping the branches.  The swap model creates two fixed points of the
involution on the smoothed fiber per node, which assemble into exactly two
new order-2 ramification orbits across the whole edge orbit.  All other
stabilizers are rejected: the orbit structure of their new fixed points is
not determined by combinatorial data, so the user must supply the smoothed
stratum explicitly and verify it with :func:`check_constancy`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .actions import (
    CurveAction,
    EquivariantT1,
    RamificationOrbit,
    t1_equivariant,
    validate_action,
)
from .curves import arithmetic_genus, build_graph
from .errors import FamilyError, IsoprodError, SmoothingError
from .groups import Orbit, format_rotation_char


@dataclass(frozen=True)
class FamilyStratum:
    label: str
    action: CurveAction


@dataclass(frozen=True)
class StratumValue:
    """Computed invariants of one stratum; ``error`` set if computation failed."""

    label: str
    delta: int
    genus: int
    t1: EquivariantT1 | None
    error: str | None


@dataclass(frozen=True)
class ConstancyReport:
    """Verdict over an ordered list of strata.

    ``verdict`` is "constant", "violation" (with the offending label pair),
    or "error" when some stratum failed to compute.  The upper-bound
    direction (more degenerate strata may never have a smaller value) is
    reported separately in ``bound_violations``; the theorem requires
    equality, the bound is the weaker sanity direction.
    """

    strata: tuple[StratumValue, ...]
    verdict: str
    constant_value: int | None
    offending: tuple[str, str] | None
    bound_violations: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class SmoothingChain:
    """A maximal chain of strata, each smoothing one node orbit of the last.

    ``obstructions`` describes the edge orbits of the final stratum that
    could not be smoothed (empty when the chain reaches a smooth fiber).
    """

    strata: tuple[FamilyStratum, ...]
    obstructions: tuple[str, ...]


def _edge_orbit_of(action: CurveAction, edge: int) -> Orbit:
    for orbit in action.edge_orbits:
        if edge in orbit.members:
            return orbit
    raise SmoothingError(f"edge {edge} not found in any orbit")


def _require_smoothable(action: CurveAction, orbit: Orbit) -> None:
    rep = orbit.representative
    for g in orbit.stabilizer:
        chi = action.smoothing_chars[(g, rep)]
        if chi != 0:
            raise SmoothingError(
                "node orbit not equivariantly smoothable: element "
                f"{g} acts on the smoothing parameter of edge {rep} by "
                f"{format_rotation_char(chi)}"
            )


def _classify_local_model(action: CurveAction, orbit: Orbit) -> tuple[str, int | None]:
    """Return ("free" | "rotation" | "swap", swap element or None)."""
    rep = orbit.representative
    stab = orbit.stabilizer
    p0, _ = action.graph.edges[rep]
    swaps = [g for g in stab if action.swaps_branches(g, rep)]
    if len(stab) == 1:
        return "free", None
    if not swaps:
        chars = {action.tangent_chars[(g, p0)] for g in stab}
        if len(chars) == len(stab):
            return "rotation", None
        raise SmoothingError(
            "unsupported local model: branch-preserving stabilizer of order "
            f"{len(stab)} acts with a non-faithful tangent character at edge {rep}"
        )
    if len(stab) == 2:
        return "swap", swaps[0]
    raise SmoothingError(
        f"unsupported local model: stabilizer of order {len(stab)} containing "
        f"a branch swap at edge {rep}"
    )


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def smooth_node_orbit(action: CurveAction, edge: int) -> CurveAction:
    """Smooth the whole orbit of the given edge, equivariantly.

    Contracts the orbit's edges: a smoothed self-loop raises its vertex's
    genus by one, a smoothed connecting node merges the two components with
    additive genus (cycles among the contracted edges add genus likewise).
    The swap model appends two new order-2 ramification orbits.  Raises
    SmoothingError when the orbit's smoothing character is nontrivial or
    the stabilizer is not one of the three supported local models.
    """
    graph = action.graph
    group = action.group
    orbit = _edge_orbit_of(action, edge)
    _require_smoothable(action, orbit)
    model, swap_element = _classify_local_model(action, orbit)

    removed = set(orbit.members)
    uf = _UnionFind(graph.n_vertices)
    for n in removed:
        p, q = graph.edges[n]
        uf.union(graph.half_edge_vertex[p], graph.half_edge_vertex[q])

    roots = sorted({uf.find(v) for v in range(graph.n_vertices)})
    class_index = {r: i for i, r in enumerate(roots)}
    vclass = [class_index[uf.find(v)] for v in range(graph.n_vertices)]

    class_vertices: list[list[int]] = [[] for _ in roots]
    for v in range(graph.n_vertices):
        class_vertices[vclass[v]].append(v)
    class_edges = [0] * len(roots)
    for n in removed:
        p, _ = graph.edges[n]
        class_edges[vclass[graph.half_edge_vertex[p]]] += 1

    new_genera = [
        sum(graph.genera[v] for v in vs) + (class_edges[c] - len(vs) + 1)
        for c, vs in enumerate(class_vertices)
    ]

    removed_hes = {h for n in removed for h in graph.edges[n]}
    surviving = [h for h in range(graph.n_half_edges) if h not in removed_hes]
    he_map = {h: i for i, h in enumerate(surviving)}
    new_he_vertex = [vclass[graph.half_edge_vertex[h]] for h in surviving]
    new_edges = []
    edge_map = {}
    for n, (p, q) in enumerate(graph.edges):
        if n not in removed:
            edge_map[n] = len(new_edges)
            new_edges.append((he_map[p], he_map[q]))
    new_marks = [vclass[v] for v in graph.marks]

    new_graph = build_graph(new_genera, new_he_vertex, new_edges, new_marks)

    ngens = len(group.generators)
    new_vertex_images = []
    new_he_images = []
    for k in range(ngens):
        gen_idx = group.index_of(group.generators[k])
        vimg = [0] * len(roots)
        for c, vs in enumerate(class_vertices):
            targets = {vclass[action.vertex_perms[gen_idx][v]] for v in vs}
            assert len(targets) == 1, "contracted edge set is not G-invariant"
            vimg[c] = targets.pop()
        new_vertex_images.append(tuple(vimg))
        new_he_images.append(
            tuple(he_map[action.half_edge_perms[gen_idx][h]] for h in surviving)
        )

    tangent_seeds = {
        (g, he_map[h]): val
        for (g, h), val in action.tangent_chars.items()
        if h in he_map
    }
    smoothing_seeds = {
        (g, edge_map[n]): val
        for (g, n), val in action.smoothing_chars.items()
        if n in edge_map
    }
    kernels = {}
    for c, vs in enumerate(class_vertices):
        if class_edges[c] == 0:
            kernels[c] = sorted(action.kernels[vs[0]])
        else:
            kernels[c] = []

    ram = [
        RamificationOrbit(vclass[o.vertex], o.element, o.char, o.order)
        for o in action.ramification_orbits
    ]
    if model == "swap":
        rep = orbit.representative
        p0, _ = graph.edges[rep]
        c = vclass[graph.half_edge_vertex[p0]]
        # |G| new fixed points of the swap involutions, in orbits of size
        # |G|/2: exactly two new orbits, both of order 2 with character -1.
        for _ in range(2):
            ram.append(RamificationOrbit(c, swap_element, Fraction(1, 2), 2))

    return validate_action(
        group,
        new_graph,
        new_vertex_images,
        new_he_images,
        tangent_chars=tangent_seeds,
        smoothing_chars=smoothing_seeds,
        kernels=kernels,
        ramification_orbits=ram,
    )


def smoothable_edge_orbits(action: CurveAction) -> list[tuple[Orbit, str | None]]:
    """Each edge orbit with None if it can be smoothed, else the obstruction."""
    out = []
    for orbit in action.edge_orbits:
        try:
            _require_smoothable(action, orbit)
            _classify_local_model(action, orbit)
            out.append((orbit, None))
        except SmoothingError as exc:
            out.append((orbit, str(exc)))
    return out


def smoothing_chain(action: CurveAction) -> SmoothingChain:
    """Iterate node-orbit smoothings until smooth or stuck.

    Deterministic: each step smooths the supported orbit with the smallest
    representative edge index.  Obstructions of the final stratum are
    reported in-band, never raised.
    """
    strata = [FamilyStratum("step0", action)]
    current = action
    while True:
        progress = False
        for orbit, obstruction in smoothable_edge_orbits(current):
            if obstruction is None:
                current = smooth_node_orbit(current, orbit.representative)
                strata.append(FamilyStratum(f"step{len(strata)}", current))
                progress = True
                break
        if not progress:
            remaining = tuple(
                obstruction
                for _, obstruction in smoothable_edge_orbits(current)
                if obstruction is not None
            )
            return SmoothingChain(tuple(strata), remaining)


def check_constancy(strata) -> ConstancyReport:
    """Compute the invariant deformation count per stratum and compare.

    Strata must share one group; per-stratum computation errors are
    reported under the stratum's label without aborting the batch.
    """
    strata = list(strata)
    if len(strata) < 2:
        raise FamilyError("constancy check needs at least 2 strata")
    first_group = strata[0].action.group
    for s in strata[1:]:
        if s.action.group != first_group:
            raise FamilyError(
                f"stratum {s.label!r} uses a different group than {strata[0].label!r}"
            )

    values: list[StratumValue] = []
    for s in strata:
        delta = s.action.graph.n_edges
        genus = arithmetic_genus(s.action.graph)
        try:
            t1 = t1_equivariant(s.action)
            values.append(StratumValue(s.label, delta, genus, t1, None))
        except IsoprodError as exc:
            values.append(StratumValue(s.label, delta, genus, None, str(exc)))

    computed = [v for v in values if v.t1 is not None]
    if len(computed) < len(values):
        verdict, constant_value, offending = "error", None, None
    else:
        totals = {v.t1.total for v in computed}
        if len(totals) == 1:
            verdict, constant_value, offending = "constant", totals.pop(), None
        else:
            verdict, constant_value = "violation", None
            offending = None
            for i, a in enumerate(computed):
                for b in computed[i + 1 :]:
                    if a.t1.total != b.t1.total:
                        offending = (a.label, b.label)
                        break
                if offending:
                    break

    bound_violations = []
    for a in computed:
        for b in computed:
            if a.delta > b.delta and a.t1.total < b.t1.total:
                bound_violations.append((a.label, b.label))
    return ConstancyReport(
        tuple(values), verdict, constant_value, offending, tuple(bound_violations)
    )
