"""Finite group actions on stable curves with local character data.

The dual graph alone does not pin down how a group acts near its fixed
points, so an action carries explicit local data: a rotation character for
every element fixing a branch (its action on the branch's tangent line), a
rotation character for every element fixing a node (its action on the
node's smoothing parameter), a kernel subgroup per vertex (elements acting
trivially on that whole component), and the orbits of ramified smooth
points away from the nodes.

Validation materializes the full character tables: user-supplied values are
transported around orbits (char(g h g^-1, g.p) = char(h, p)), extended
multiplicatively inside each stabilizer, checked for conflicts, and any
value still missing is reported as a gap rather than guessed.  For an
element fixing a node and both its branches the smoothing character is
forced to be the product of the two tangent characters; for a
branch-swapping element it must be supplied (its square is checked against
the derived value on the branch-preserving part).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .curves import DualGraph, connected_components
from .errors import (
    ActionError,
    CharacterError,
    GraphError,
    GroupError,
    RamificationError,
)
from .groups import (
    TRIVIAL_CHAR,
    FiniteGroup,
    Orbit,
    Perm,
    char_order,
    invariant_dimension_trace,
    orbits,
)

CharTable = dict[tuple[int, int], Fraction]


@dataclass(frozen=True)
class RamificationOrbit:
    """One orbit of smooth non-node points with nontrivial cyclic stabilizer.

    ``element`` generates the stabilizer of a point of the orbit on the
    component of ``vertex``; ``char`` is its tangent character there and
    ``order`` the ramification index (the element's order modulo the
    component's kernel).
    """

    vertex: int
    element: int
    char: Fraction
    order: int


@dataclass(frozen=True)
class QuotientSignature:
    """Per component orbit: quotient genus, branch point count, and the
    contribution 3*g' - 3 + b to the invariant deformation count."""

    representative: int
    g_prime: int
    b: int
    contribution: int


@dataclass(frozen=True)
class EquivariantT1:
    """Invariant first-order deformations, by source: node smoothings,
    branch adjustments on the normalization, and quotient moduli."""

    node_inv: int
    branch_inv: int
    minus_chi_inv: int
    total: int


@dataclass(frozen=True, eq=True)
class CurveAction:
    """A validated action of a finite group on a stable dual graph.

    Character tables are complete: every (element, fixed half-edge) and
    (element, fixed edge) pair has an entry.  Orbit decompositions are
    cached at validation time.  Instances are immutable; build through
    :func:`validate_action`.
    """

    group: FiniteGroup
    graph: DualGraph
    vertex_perms: tuple[Perm, ...]
    half_edge_perms: tuple[Perm, ...]
    edge_perms: tuple[Perm, ...]
    tangent_chars: CharTable
    smoothing_chars: CharTable
    kernels: tuple[frozenset[int], ...]
    ramification_orbits: tuple[RamificationOrbit, ...]
    vertex_orbits: tuple[Orbit, ...]
    half_edge_orbits: tuple[Orbit, ...]
    edge_orbits: tuple[Orbit, ...]

    def vertex_stabilizer(self, v: int) -> list[int]:
        return [g for g in range(self.group.order) if self.vertex_perms[g][v] == v]

    def half_edge_stabilizer(self, h: int) -> list[int]:
        return [g for g in range(self.group.order) if self.half_edge_perms[g][h] == h]

    def edge_stabilizer(self, n: int) -> list[int]:
        return [g for g in range(self.group.order) if self.edge_perms[g][n] == n]

    def swaps_branches(self, g: int, n: int) -> bool:
        p, q = self.graph.edges[n]
        return self.edge_perms[g][n] == n and self.half_edge_perms[g][p] == q


def _transport_and_close(
    group: FiniteGroup,
    perms: Sequence[Perm],
    orbit: Orbit,
    seeds: Mapping[tuple[int, int], Fraction],
    forced: Mapping[tuple[int, int], Fraction],
    kind: str,
    obj_kind: str,
) -> CharTable:
    """Complete a character table on one orbit of objects.

    ``seeds`` are user-supplied values, ``forced`` are values implied by
    other data (kernel triviality, tangent-product rule); both are
    transported to the representative, closed under multiplication, checked
    pairwise, and redistributed.  Gaps raise CharacterError naming the
    offending (element, object) pair.
    """
    rep = orbit.representative
    transporters = {
        obj: [g for g in range(group.order) if perms[g][rep] == obj]
        for obj in orbit.members
    }
    known: dict[int, Fraction] = {0: TRIVIAL_CHAR}

    def learn(h: int, val: Fraction, provenance: str) -> None:
        val = val % 1
        if h in known and known[h] != val:
            raise CharacterError(
                f"inconsistent {kind} character at (element {h}, {obj_kind} {rep}): "
                f"{provenance} gives {val}, have {known[h]}"
            )
        known[h] = val

    for source in (forced, seeds):
        for (h, obj), val in source.items():
            if obj not in transporters:
                continue
            for g in transporters[obj]:
                ginv = group.inverse(g)
                learn(group.mul(group.mul(ginv, h), g), val, f"value at {obj_kind} {obj}")

    frontier = list(known)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(known):
                for c, val in (
                    (group.mul(a, b), known[a] + known[b]),
                    (group.mul(b, a), known[b] + known[a]),
                ):
                    if c not in known:
                        known[c] = val % 1
                        nxt.append(c)
        frontier = nxt
    for a in known:
        for b in known:
            c = group.mul(a, b)
            if c in known and known[c] != (known[a] + known[b]) % 1:
                raise CharacterError(
                    f"inconsistent {kind} character data on the stabilizer of "
                    f"{obj_kind} {rep}: product rule fails at elements ({a}, {b})"
                )

    stab = set(orbit.stabilizer)
    missing = sorted(stab - set(known))
    if missing:
        raise CharacterError(
            f"missing {kind} character for element {missing[0]} at {obj_kind} {rep}"
        )

    table: CharTable = {}
    for obj in orbit.members:
        g = transporters[obj][0]
        ginv = group.inverse(g)
        for h, val in known.items():
            if h in stab:
                table[(group.mul(group.mul(g, h), ginv), obj)] = val
    return table


def validate_action(
    group: FiniteGroup,
    graph: DualGraph,
    vertex_images: Sequence[Sequence[int]],
    half_edge_images: Sequence[Sequence[int]],
    tangent_chars: Mapping[tuple[int, int], Fraction] | None = None,
    smoothing_chars: Mapping[tuple[int, int], Fraction] | None = None,
    kernels: Mapping[int, Iterable[int]] | None = None,
    ramification_orbits: Iterable[RamificationOrbit | tuple] = (),
) -> CurveAction:
    """Check every consistency relation the action data must satisfy.

    ``vertex_images`` / ``half_edge_images`` give, per group generator, the
    induced permutation of vertices / half-edges.  Character mappings are
    seeds keyed by (element index, object index); kernels map a vertex to
    generators of the subgroup acting trivially on its component.
    """
    tangent_chars = dict(tangent_chars or {})
    smoothing_chars = dict(smoothing_chars or {})
    kernels = {v: list(ks) for v, ks in (kernels or {}).items()}

    ngens = len(group.generators)
    if len(vertex_images) != ngens or len(half_edge_images) != ngens:
        raise ActionError("need one vertex image and one half-edge image per generator")

    try:
        vertex_perms = group.extend_action(
            [tuple(img) for img in vertex_images] if ngens else []
        )
        half_edge_perms = group.extend_action(
            [tuple(img) for img in half_edge_images] if ngens else []
        )
    except GroupError as exc:
        raise ActionError(str(exc)) from exc
    if ngens == 0:
        vertex_perms = tuple(tuple(range(graph.n_vertices)) for _ in range(group.order))
        half_edge_perms = tuple(
            tuple(range(graph.n_half_edges)) for _ in range(group.order)
        )
    else:
        if any(len(p) != graph.n_vertices for p in vertex_perms):
            raise ActionError("vertex images must permute the graph's vertices")
        if any(len(p) != graph.n_half_edges for p in half_edge_perms):
            raise ActionError("half-edge images must permute the graph's half-edges")

    for k in range(ngens):
        for h in range(graph.n_half_edges):
            if (
                graph.half_edge_vertex[half_edge_images[k][h]]
                != vertex_images[k][graph.half_edge_vertex[h]]
            ):
                raise ActionError(
                    f"half-edge action does not cover the vertex action "
                    f"(generator {k}, half-edge {h})"
                )

    edge_index = {frozenset(pair): n for n, pair in enumerate(graph.edges)}
    edge_perm_rows = []
    for g in range(group.order):
        row = []
        for p, q in graph.edges:
            image = frozenset((half_edge_perms[g][p], half_edge_perms[g][q]))
            if image not in edge_index:
                raise ActionError(
                    f"edge action ill-defined: element {g} sends a node to the "
                    f"non-node pair {sorted(image)}"
                )
            row.append(edge_index[image])
        edge_perm_rows.append(tuple(row))
    edge_perms = tuple(edge_perm_rows)

    kernel_subs: list[frozenset[int]] = []
    for v in range(graph.n_vertices):
        sub = group.subgroup_closure(kernels.get(v, ()))
        for k in sub:
            if vertex_perms[k][v] != v:
                raise ActionError(f"kernel element {k} of vertex {v} moves the vertex")
            for h in graph.half_edges_at(v):
                if half_edge_perms[k][h] != h:
                    raise ActionError(
                        f"kernel element {k} of vertex {v} moves half-edge {h}"
                    )
        kernel_subs.append(sub)
    for g in range(group.order):
        for v in range(graph.n_vertices):
            if group.conjugate_subgroup(kernel_subs[v], g) != kernel_subs[vertex_perms[g][v]]:
                raise ActionError(
                    f"kernels not equivariant: element {g} maps vertex {v} to "
                    f"{vertex_perms[g][v]} but does not conjugate the kernels"
                )

    vertex_orbits = tuple(
        orbits(group, lambda g, v: vertex_perms[g][v], range(graph.n_vertices), check=False)
    )
    half_edge_orbits = tuple(
        orbits(group, lambda g, h: half_edge_perms[g][h], range(graph.n_half_edges), check=False)
    )
    edge_orbits = tuple(
        orbits(group, lambda g, n: edge_perms[g][n], range(graph.n_edges), check=False)
    )

    for (h, obj), val in tangent_chars.items():
        if not 0 <= obj < graph.n_half_edges:
            raise ActionError(f"tangent character at unknown half-edge {obj}")
        if half_edge_perms[h][obj] != obj:
            raise ActionError(
                f"tangent character assigned to element {h} which moves half-edge {obj}"
            )
        if char_order(val) > 1 and group.element_order(h) % char_order(val) != 0:
            raise CharacterError(
                f"tangent character {val} at half-edge {obj} has order "
                f"{char_order(val)}, not a divisor of the order of element {h}"
            )

    forced_tangent: CharTable = {}
    for v in range(graph.n_vertices):
        for k in kernel_subs[v]:
            for h in graph.half_edges_at(v):
                forced_tangent[(k, h)] = TRIVIAL_CHAR

    full_tangent: CharTable = {}
    for orbit in half_edge_orbits:
        full_tangent.update(
            _transport_and_close(
                group, half_edge_perms, orbit, tangent_chars, forced_tangent,
                "tangent", "half-edge",
            )
        )
    for key, val in tangent_chars.items():
        if full_tangent[key] != val % 1:
            raise CharacterError(
                f"inconsistent tangent character at (element {key[0]}, half-edge {key[1]})"
            )

    for (h, n), _ in smoothing_chars.items():
        if not 0 <= n < graph.n_edges:
            raise ActionError(f"smoothing character at unknown edge {n}")
        if edge_perms[h][n] != n:
            raise ActionError(
                f"smoothing character assigned to element {h} which moves edge {n}"
            )

    forced_smoothing: CharTable = {}
    for n, (p, q) in enumerate(graph.edges):
        for g in range(group.order):
            if half_edge_perms[g][p] == p and half_edge_perms[g][q] == q:
                forced_smoothing[(g, n)] = (full_tangent[(g, p)] + full_tangent[(g, q)]) % 1

    full_smoothing: CharTable = {}
    for orbit in edge_orbits:
        full_smoothing.update(
            _transport_and_close(
                group, edge_perms, orbit, smoothing_chars, forced_smoothing,
                "smoothing", "edge",
            )
        )
    for key, val in smoothing_chars.items():
        if full_smoothing[key] != val % 1:
            raise CharacterError(
                f"inconsistent smoothing character at (element {key[0]}, edge {key[1]})"
            )

    ram: list[RamificationOrbit] = []
    for entry in ramification_orbits:
        if not isinstance(entry, RamificationOrbit):
            entry = RamificationOrbit(*entry)
        v, h, chi, e = entry.vertex, entry.element, entry.char % 1, entry.order
        if not 0 <= v < graph.n_vertices:
            raise ActionError(f"ramification orbit at unknown vertex {v}")
        if not 0 <= h < group.order:
            raise ActionError(f"ramification orbit names unknown element {h}")
        if vertex_perms[h][v] != v:
            raise ActionError(
                f"ramification element {h} does not stabilize its vertex {v}"
            )
        if e < 2:
            raise ActionError(f"ramification order must be >= 2, got {e}")
        kernel = kernel_subs[v]
        m, x = 1, h
        while x not in kernel:
            x = group.mul(x, h)
            m += 1
        if m != e:
            raise ActionError(
                f"ramification stabilizer at vertex {v} is cyclic of order {m}, "
                f"declared order {e}"
            )
        if char_order(chi) != e:
            raise ActionError(
                f"ramification character {chi} at vertex {v} must have exact order {e}"
            )
        ram.append(RamificationOrbit(v, h, chi, e))
    ram.sort(key=lambda o: (o.vertex, o.element, o.char, o.order))

    return CurveAction(
        group=group,
        graph=graph,
        vertex_perms=vertex_perms,
        half_edge_perms=half_edge_perms,
        edge_perms=edge_perms,
        tangent_chars=full_tangent,
        smoothing_chars=full_smoothing,
        kernels=tuple(kernel_subs),
        ramification_orbits=tuple(ram),
        vertex_orbits=vertex_orbits,
        half_edge_orbits=half_edge_orbits,
        edge_orbits=edge_orbits,
    )


def trivial_action(graph: DualGraph) -> CurveAction:
    """The trivial group acting on a graph."""
    return validate_action(FiniteGroup.trivial(), graph, [], [])


def inert_action(group: FiniteGroup, graph: DualGraph) -> CurveAction:
    """Every element acts trivially on every component (all kernels = G)."""
    ngens = len(group.generators)
    return validate_action(
        group,
        graph,
        [tuple(range(graph.n_vertices))] * ngens,
        [tuple(range(graph.n_half_edges))] * ngens,
        kernels={v: range(group.order) for v in range(graph.n_vertices)},
    )


def node_invariants(action: CurveAction) -> int:
    """Number of node orbits whose stabilizer fixes the smoothing parameter.

    The sheaf of first-order smoothings has a one-dimensional stalk at each
    node; an orbit contributes an invariant section exactly when every
    stabilizer element acts trivially on the stalk.
    """
    total = 0
    for orbit in action.edge_orbits:
        if all(
            action.smoothing_chars[(g, orbit.representative)] == 0
            for g in orbit.stabilizer
        ):
            total += 1
    return total


def branch_invariants(action: CurveAction) -> int:
    """Number of half-edge orbits with trivial stabilizer tangent character."""
    total = 0
    for orbit in action.half_edge_orbits:
        if all(
            action.tangent_chars[(g, orbit.representative)] == 0
            for g in orbit.stabilizer
        ):
            total += 1
    return total


def _solve_riemann_hurwitz(
    g_v: int, hbar: int, branch_orders: Sequence[int], where: str
) -> tuple[int, int]:
    """Solve 2g - 2 = |H|(2g' - 2) + sum (|H|/e)(e - 1) for g' exactly."""
    ram_sum = 0
    for e in branch_orders:
        if hbar % e != 0:
            raise RamificationError(
                f"inconsistent ramification data at {where}: order {e} does not "
                f"divide the effective stabilizer order {hbar}"
            )
        ram_sum += (hbar // e) * (e - 1)
    num = 2 * g_v - 2 - ram_sum
    m, r = divmod(num, hbar)
    if r != 0:
        raise RamificationError(
            f"inconsistent ramification data at {where}: 2g-2 - ramification = {num} "
            f"leaves residue {r} modulo {hbar}"
        )
    if (m + 2) % 2 != 0:
        raise RamificationError(
            f"inconsistent ramification data at {where}: 2g' = {m + 2} is odd"
        )
    g_prime = (m + 2) // 2
    if g_prime < 0:
        raise RamificationError(
            f"inconsistent ramification data at {where}: quotient genus {g_prime} < 0"
        )
    return g_prime, len(branch_orders)


def _vertex_orbit_of(action: CurveAction, vertex: int) -> Orbit:
    for orbit in action.vertex_orbits:
        if vertex in orbit.members:
            return orbit
    raise ActionError(f"vertex {vertex} not found in any orbit")


def _half_edge_suborbits(action: CurveAction, vertex: int, stabilizer: Sequence[int]):
    """Partition the half-edges at a vertex into orbits of its stabilizer."""
    hes = action.graph.half_edges_at(vertex)
    seen: set[int] = set()
    for p in hes:
        if p in seen:
            continue
        members = {action.half_edge_perms[g][p] for g in stabilizer}
        seen.update(members)
        stab = [g for g in stabilizer if action.half_edge_perms[g][p] == p]
        yield p, sorted(members), stab


def quotient_signature(action: CurveAction, vertex: int) -> QuotientSignature:
    """Quotient genus and branch count for the component orbit of ``vertex``.

    The stabilizer acts on the component through its quotient by the
    declared kernel; branch points are the declared ramification orbits on
    the component orbit together with the stabilizer orbits of node
    branches at the representative that are fixed by more than the kernel.
    The quotient genus comes from an exactly-divisible Riemann-Hurwitz
    computation and the contribution is 3g' - 3 + b.
    """
    orbit = _vertex_orbit_of(action, vertex)
    rep = orbit.representative
    kernel = action.kernels[rep]
    hbar = len(orbit.stabilizer) // len(kernel)
    branch_orders = [
        o.order for o in action.ramification_orbits if o.vertex in orbit.members
    ]
    for _, _, stab in _half_edge_suborbits(action, rep, orbit.stabilizer):
        e = len(stab) // len(kernel)
        if e >= 2:
            branch_orders.append(e)
    g_prime, b = _solve_riemann_hurwitz(
        action.graph.genera[rep], hbar, branch_orders, f"vertex {rep}"
    )
    return QuotientSignature(rep, g_prime, b, 3 * g_prime - 3 + b)


def quotient_signatures(action: CurveAction) -> list[QuotientSignature]:
    return [quotient_signature(action, o.representative) for o in action.vertex_orbits]


def _check_t1_preconditions(action: CurveAction) -> None:
    if action.graph.marks:
        raise GraphError("T1 of marked curves not in scope")
    if len(connected_components(action.graph)) > 1:
        raise GraphError("equivariant T1 requires a connected curve")


def t1_equivariant(action: CurveAction) -> EquivariantT1:
    """Invariant deformation dimension: node + branch + quotient pieces.

    With the trivial group this equals the non-equivariant count
    (delta, 2*delta, 3*sum(g_i) - 3*nu) componentwise.
    """
    _check_t1_preconditions(action)
    node_inv = node_invariants(action)
    branch_inv = branch_invariants(action)
    minus_chi_inv = sum(sig.contribution for sig in quotient_signatures(action))
    return EquivariantT1(
        node_inv, branch_inv, minus_chi_inv, node_inv + branch_inv + minus_chi_inv
    )


def t1_equivariant_oracle(action: CurveAction) -> EquivariantT1:
    """Same contract as :func:`t1_equivariant` by an independent route.

    Node and branch invariants come from the exact Burnside trace average
    over the node-stalk and branch-tangent representations; the quotient
    pieces are recomputed from scratch with the generic orbit machinery.
    """
    _check_t1_preconditions(action)
    group = action.group
    node_inv = invariant_dimension_trace(
        group,
        lambda g, n: action.edge_perms[g][n],
        range(action.graph.n_edges),
        lambda g, n: action.smoothing_chars[(g, n)],
        check=False,
    )
    branch_inv = invariant_dimension_trace(
        group,
        lambda g, h: action.half_edge_perms[g][h],
        range(action.graph.n_half_edges),
        lambda g, h: action.tangent_chars[(g, h)],
        check=False,
    )
    minus_chi_inv = 0
    vertex_orbs = orbits(
        group,
        lambda g, v: action.vertex_perms[g][v],
        range(action.graph.n_vertices),
        check=False,
    )
    for orb in vertex_orbs:
        rep = orb.representative
        kernel = action.kernels[rep]
        hbar = len(orb.stabilizer) // len(kernel)
        branch_orders = [
            o.order for o in action.ramification_orbits if o.vertex in orb.members
        ]
        suborbits = orbits(
            group,
            lambda g, h: action.half_edge_perms[g][h],
            action.graph.half_edges_at(rep),
            within=orb.stabilizer,
            check=False,
        )
        for sub in suborbits:
            e = len(sub.stabilizer) // len(kernel)
            if e >= 2:
                branch_orders.append(e)
        g_prime, b = _solve_riemann_hurwitz(
            action.graph.genera[rep], hbar, branch_orders, f"vertex {rep}"
        )
        minus_chi_inv += 3 * g_prime - 3 + b
    return EquivariantT1(
        node_inv, branch_inv, minus_chi_inv, node_inv + branch_inv + minus_chi_inv
    )
