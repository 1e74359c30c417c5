"""Finite permutation groups: enumeration, orbits, stabilizers, rotation characters.

Groups are given by permutation generators on {0..degree-1} and enumerated
once, deterministically: the identity first, then breadth-first by generator
words, ties within a word length broken by lexicographic order of the
permutation tuples.  Every other module refers to group elements by their
index in this table.

Rotation characters (the action of an element on a one-dimensional space)
are plain ``Fraction`` values r in [0, 1), meaning the root of unity
exp(2*pi*i*r); products of characters are sums of fractions mod 1, so all
invariant dimensions stay exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cyclotomic import root_of_unity_sum
from .errors import CharacterError, GroupError

Perm = tuple[int, ...]

DEFAULT_GROUP_CAP = 10000

TRIVIAL_CHAR = Fraction(0)


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def compose(a: Perm, b: Perm) -> Perm:
    """Product a*b: apply b first, then a."""
    return tuple(a[b[i]] for i in range(len(a)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def check_perm(p: Sequence[int], degree: int) -> Perm:
    p = tuple(p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise GroupError(f"not a permutation of {degree} letters: {p!r}")
    return p


def perm_from_cycles(cycles: Iterable[Iterable[int]], degree: int) -> Perm:
    """Permutation from disjoint cycles of 0-based letters; [] is the identity."""
    out = list(range(degree))
    seen: set[int] = set()
    for cycle in cycles:
        cycle = list(cycle)
        for x in cycle:
            if not (0 <= x < degree):
                raise GroupError(f"cycle entry {x} out of range for degree {degree}")
            if x in seen:
                raise GroupError(f"letter {x} appears in two cycles")
            seen.add(x)
        for i, x in enumerate(cycle):
            out[x] = cycle[(i + 1) % len(cycle)]
    return tuple(out)


def perm_to_cycles(p: Perm) -> list[list[int]]:
    cycles = []
    seen: set[int] = set()
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cycle = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cycle.append(j)
            seen.add(j)
            j = p[j]
        cycles.append(cycle)
    return cycles


def format_perm(p: Perm) -> str:
    cycles = perm_to_cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite permutation group with a fixed element table.

    Index 0 is always the identity.  Instances are immutable and safe to
    share; construct through :meth:`from_generators`.
    """

    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    # parent[i] = (j, k) with elements[i] == elements[j] * generators[k];
    # lets group actions be extended from generator images along BFS words.
    parents: tuple[tuple[int, int], ...] = field(repr=False)

    def __post_init__(self):
        # lookup cache; not a field, so it stays out of eq/repr
        object.__setattr__(
            self, "_index", {p: i for i, p in enumerate(self.elements)}
        )

    @classmethod
    def from_generators(
        cls,
        generators: Iterable[Sequence[int]],
        degree: int,
        cap: int = DEFAULT_GROUP_CAP,
    ) -> "FiniteGroup":
        if degree < 1:
            raise GroupError("degree must be at least 1")
        gens = tuple(check_perm(g, degree) for g in generators)
        ident = identity_perm(degree)
        elements = [ident]
        index = {ident: 0}
        parents: list[tuple[int, int]] = [(0, -1)]
        frontier = [0]
        while frontier:
            discovered: dict[Perm, tuple[int, int]] = {}
            for i in frontier:
                for k, s in enumerate(gens):
                    y = compose(elements[i], s)
                    if y not in index and y not in discovered:
                        discovered[y] = (i, k)
            frontier = []
            for y in sorted(discovered):
                if len(elements) >= cap:
                    raise GroupError(f"group too large: order exceeds cap {cap}")
                index[y] = len(elements)
                frontier.append(len(elements))
                elements.append(y)
                parents.append(discovered[y])
        return cls(degree, gens, tuple(elements), tuple(parents))

    @classmethod
    def trivial(cls, degree: int = 1) -> "FiniteGroup":
        return cls.from_generators((), degree)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    def index_of(self, perm: Perm) -> int:
        try:
            return self._index[perm]
        except KeyError:
            raise GroupError(f"permutation {perm!r} is not a group element") from None

    def mul(self, i: int, j: int) -> int:
        return self.index_of(compose(self.elements[i], self.elements[j]))

    def inverse(self, i: int) -> int:
        return self.index_of(invert(self.elements[i]))

    def element_order(self, i: int) -> int:
        n, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            n += 1
        return n

    def subgroup_closure(self, seeds: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by the given element indices."""
        known = {0}
        frontier = [s for s in set(seeds) if s != 0]
        for s in frontier:
            if not (0 <= s < self.order):
                raise GroupError(f"element index {s} out of range")
        known.update(frontier)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(known):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in known:
                            known.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(known)

    def conjugate_subgroup(self, sub: Iterable[int], g: int) -> frozenset[int]:
        ginv = self.inverse(g)
        return frozenset(self.mul(self.mul(g, s), ginv) for s in sub)

    def conjugacy_union(self, sub: Iterable[int]) -> frozenset[int]:
        """Union of all conjugates of a subgroup."""
        out: set[int] = set()
        for g in range(self.order):
            out.update(self.conjugate_subgroup(sub, g))
        return frozenset(out)

    def extend_action(self, generator_perms: Sequence[Perm]) -> tuple[Perm, ...]:
        """Per-element permutations induced by generator images along BFS words.

        Raises GroupError if the images do not define a group homomorphism
        (checked against every (element, generator) product, which suffices
        by induction on word length).
        """
        if len(generator_perms) != len(self.generators):
            raise GroupError("one image required per generator")
        if generator_perms:
            n = len(generator_perms[0])
            images = [check_perm(p, n) for p in generator_perms]
        else:
            images = []
            n = 0
        table: list[Perm] = [identity_perm(n)]
        for i in range(1, self.order):
            j, k = self.parents[i]
            table.append(compose(table[j], images[k]))
        for i in range(self.order):
            for k in range(len(self.generators)):
                prod = self.index_of(compose(self.elements[i], self.generators[k]))
                if table[prod] != compose(table[i], images[k]):
                    raise GroupError(
                        "generator images do not extend to a group homomorphism "
                        f"(relation fails at element {i}, generator {k})"
                    )
        return tuple(table)


Action = Callable[[int, object], object]


@dataclass(frozen=True)
class Orbit:
    """One orbit of a group action: canonical representative (the member
    appearing first in the input point sequence), all members in input
    order, and the representative's stabilizer as sorted element indices."""

    representative: object
    members: tuple
    stabilizer: tuple[int, ...]


def _check_is_action(group: FiniteGroup, act: Action, points: Sequence) -> None:
    for p in points:
        if act(0, p) != p:
            raise GroupError(f"not a group action: identity moves point {p!r}")
    gen_indices = [group.index_of(s) for s in group.generators]
    for i in range(group.order):
        for k, s in enumerate(group.generators):
            prod = group.index_of(compose(group.elements[i], s))
            for p in points:
                if act(prod, p) != act(i, act(gen_indices[k], p)):
                    raise GroupError(
                        "not a group action: composition fails at "
                        f"(element {i}, generator {k}, point {p!r})"
                    )


def orbits(
    group: FiniteGroup,
    act: Action,
    points: Sequence,
    within: Iterable[int] | None = None,
    check: bool = True,
) -> list[Orbit]:
    """Partition ``points`` into orbits.

    ``within`` restricts to a subgroup (sorted element indices); the check of
    the action axioms (identity + composition against every generator) runs
    only for full-group calls with ``check`` left on.
    """
    elems = sorted(set(within)) if within is not None else list(range(group.order))
    if within is None and check:
        _check_is_action(group, act, points)
    pos = {p: i for i, p in enumerate(points)}
    seen: set = set()
    out: list[Orbit] = []
    for p in points:
        if p in seen:
            continue
        members = set()
        stab = []
        for g in elems:
            q = act(g, p)
            if q not in pos:
                raise GroupError(f"not a group action on the given points: {p!r} -> {q!r}")
            members.add(q)
            if q == p:
                stab.append(g)
        seen.update(members)
        ordered = tuple(sorted(members, key=pos.__getitem__))
        out.append(Orbit(p, ordered, tuple(stab)))
    return out


def invariant_dimension_trace(
    group: FiniteGroup,
    act: Action,
    points: Sequence,
    char: Callable[[int, object], Fraction],
    check: bool = True,
) -> int:
    """dim V^G for a permutation representation with 1-dimensional fibers.

    Burnside average (1/|G|) sum_g tr(g), where tr(g) sums the character
    values of g over its fixed points; evaluated exactly as a sum of roots
    of unity.  Raises CharacterError when the average is not a nonnegative
    integer or a needed character value is missing.
    """
    if check:
        _check_is_action(group, act, points)
    counts: dict[Fraction, int] = {}
    for g in range(group.order):
        for p in points:
            if act(g, p) == p:
                try:
                    val = char(g, p)
                except KeyError:
                    raise CharacterError(
                        f"inconsistent character data: no character for element {g} "
                        f"at fixed point {p!r}"
                    ) from None
                val = val % 1
                counts[val] = counts.get(val, 0) + 1
    total = root_of_unity_sum(counts)
    if total is None:
        raise CharacterError("inconsistent character data: trace sum is irrational")
    dim, rem = divmod(total, group.order)
    if rem != 0 or dim < 0:
        raise CharacterError(
            f"inconsistent character data: trace average {total}/{group.order} "
            "is not a nonnegative integer"
        )
    return dim


def char_order(c: Fraction) -> int:
    """Order of the root of unity exp(2*pi*i*c)."""
    return (c % 1).denominator


def parse_rotation_char(text: str) -> Fraction:
    """Strict "a/e" rotation-character parser: reduced, 0 <= a < e.

    Unreduced strings such as "2/4" are rejected rather than normalized, so
    documents have a single spelling per character.
    """
    parts = text.split("/")
    if len(parts) != 2:
        raise GroupError(f"malformed character string {text!r}: expected \"a/e\"")
    try:
        a, e = int(parts[0]), int(parts[1])
    except ValueError:
        raise GroupError(f"malformed character string {text!r}: expected integers") from None
    if e < 1 or not 0 <= a < e:
        raise GroupError(f"malformed character string {text!r}: need 0 <= a < e")
    frac = Fraction(a, e)
    if (frac.numerator, frac.denominator) != (a, e):
        raise GroupError(
            f"malformed character string {text!r}: not reduced (expected "
            f"\"{frac.numerator}/{frac.denominator}\")"
        )
    return frac


def format_rotation_char(c: Fraction) -> str:
    c = c % 1
    return f"{c.numerator}/{c.denominator}"
