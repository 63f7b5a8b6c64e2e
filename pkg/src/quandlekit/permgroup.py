"""Permutations on {0..n-1} and plain-closure group computations.

Groups are stored as generators plus a memoized element set obtained by
breadth-first closure (no Schreier-Sims: every group in scope has order well
under the 10^6 guard, and the flat representation keeps everything
deterministic and trivially shareable).

Permutations are tuples: p[i] is the image of i, and (p * q)(i) = p(q(i)).
"""

from __future__ import annotations

from functools import reduce

from .errors import PointOutOfRange, SizeExceeded

Perm = tuple[int, ...]

CLOSURE_GUARD = 10**6


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """(p ∘ q)(i) = p(q(i))."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_perm(p) -> bool:
    return sorted(p) == list(range(len(p)))


def perm_order(p: Perm) -> int:
    k = 1
    q = p
    ident = identity_perm(len(p))
    while q != ident:
        q = compose(q, p)
        k += 1
    return k


def cycle_type(p: Perm) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def commutator(a: Perm, b: Perm) -> Perm:
    return compose(compose(inverse(a), inverse(b)), compose(a, b))


def closure_elements(gens, degree: int, guard: int = CLOSURE_GUARD):
    """BFS closure of a generator list; frontier processed in lex order."""
    gens = sorted(set(gens))
    ident = identity_perm(degree)
    elements = {ident}
    frontier = [ident]
    while frontier:
        new = set()
        for g in frontier:
            for s in gens:
                h = compose(g, s)
                if h not in elements:
                    elements.add(h)
                    new.add(h)
                    if len(elements) > guard:
                        raise SizeExceeded(
                            f"group closure exceeded guard of {guard} elements"
                        )
        frontier = sorted(new)
    return elements


class PermGroup:
    """A permutation group of fixed degree, generators plus lazy element set.

    Immutable once built; the element set is computed at most once.  Equality
    and hashing compare materialized element sets, so two groups are equal
    exactly when they contain the same permutations.
    """

    __slots__ = ("degree", "generators", "_elements", "_sorted")

    def __init__(self, degree: int, generators, elements=None):
        gens = tuple(sorted({tuple(g) for g in generators}))
        for g in gens:
            if len(g) != degree or not is_perm(g):
                raise ValueError(f"not a degree-{degree} permutation: {g}")
        self.degree = degree
        self.generators = gens
        self._elements = frozenset(elements) if elements is not None else None
        self._sorted = None

    # -- materialization -------------------------------------------------

    @property
    def elements(self) -> frozenset:
        if self._elements is None:
            self._elements = frozenset(closure_elements(self.generators, self.degree))
        return self._elements

    @property
    def sorted_elements(self) -> tuple:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.elements))
        return self._sorted

    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order()

    def __contains__(self, p):
        return tuple(p) in self.elements

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        size = "?" if self._elements is None else len(self._elements)
        return f"PermGroup(degree={self.degree}, gens={len(self.generators)}, order={size})"

    @property
    def identity(self) -> Perm:
        return identity_perm(self.degree)

    def is_trivial(self) -> bool:
        return all(g == self.identity for g in self.generators)

    # -- structure --------------------------------------------------------

    def orbit(self, a: int) -> frozenset:
        self._check_point(a)
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def orbits(self) -> list[tuple[int, ...]]:
        """Orbit partition, blocks sorted by their minimum."""
        seen = set()
        blocks = []
        for a in range(self.degree):
            if a in seen:
                continue
            orb = sorted(self.orbit(a))
            seen.update(orb)
            blocks.append(tuple(orb))
        return blocks

    def stabilizer(self, a: int) -> "PermGroup":
        self._check_point(a)
        elems = [g for g in self.elements if g[a] == a]
        return PermGroup(self.degree, elems, elems)

    def setwise_stabilizer(self, points) -> "PermGroup":
        s = frozenset(points)
        for a in s:
            self._check_point(a)
        elems = [g for g in self.elements if frozenset(g[a] for a in s) == s]
        return PermGroup(self.degree, elems, elems)

    def pointwise_stabilizer(self, points) -> "PermGroup":
        pts = tuple(points)
        elems = [g for g in self.elements if all(g[a] == a for a in pts)]
        return PermGroup(self.degree, elems, elems)

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    def is_semiregular(self) -> bool:
        return all(self.stabilizer(a).order() == 1 for a in range(self.degree))

    def is_regular(self) -> bool:
        return self.is_transitive() and self.is_semiregular()

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            compose(a, b) == compose(b, a) for i, a in enumerate(gens) for b in gens[i:]
        )

    def center(self) -> "PermGroup":
        gens = self.generators
        elems = [g for g in self.elements if all(compose(g, s) == compose(s, g) for s in gens)]
        return PermGroup(self.degree, elems, elems)

    def subgroup(self, gens) -> "PermGroup":
        sub = PermGroup(self.degree, gens)
        return sub

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.elements <= other.elements

    def normal_closure(self, seeds) -> "PermGroup":
        """Smallest subgroup containing seeds and normalized by self."""
        gens = set(tuple(s) for s in seeds)
        while True:
            new = set()
            for s in gens:
                for g in self.generators:
                    c = compose(compose(g, s), inverse(g))
                    if c not in gens:
                        new.add(c)
            if not new:
                break
            gens |= new
            # keep the generating set small: re-seed with the closure's gens
            if len(gens) > 4 * self.degree:
                gens = set(closure_elements(gens, self.degree))
        elems = closure_elements(gens, self.degree)
        return PermGroup(self.degree, elems, elems)

    def is_normal_in(self, other: "PermGroup") -> bool:
        elems = self.elements
        return all(
            compose(compose(g, s), inverse(g)) in elems
            for s in self.generators
            for g in other.generators
        )

    def derived_subgroup(self) -> "PermGroup":
        """Commutator subgroup: normal closure of generator commutators."""
        seeds = [
            commutator(a, b)
            for i, a in enumerate(self.generators)
            for b in self.generators[i + 1 :]
        ]
        seeds = [s for s in seeds if s != self.identity]
        if not seeds:
            ident = [self.identity]
            return PermGroup(self.degree, ident, ident)
        return self.normal_closure(seeds)

    def commutator_with(self, other: "PermGroup") -> "PermGroup":
        """[self, other] as normal closure of generator commutators in <self, other>."""
        seeds = [
            commutator(a, b) for a in self.generators for b in other.generators
        ]
        seeds = [s for s in seeds if s != self.identity]
        joint = PermGroup(self.degree, self.generators + other.generators)
        if not seeds:
            ident = [self.identity]
            return PermGroup(self.degree, ident, ident)
        return joint.normal_closure(seeds)

    def lower_central_2(self) -> "PermGroup":
        """gamma_2 = [G, [G, G]]."""
        return self.commutator_with(self.derived_subgroup())

    def restriction(self, points) -> "PermGroup":
        """Action restricted to an invariant point set (re-indexed 0..k-1)."""
        pts = sorted(points)
        index = {a: i for i, a in enumerate(pts)}
        gens = []
        for g in self.generators:
            if any(g[a] not in index for a in pts):
                raise ValueError("point set is not invariant")
            gens.append(tuple(index[g[a]] for a in pts))
        return PermGroup(len(pts), gens)

    def _check_point(self, a: int):
        if not 0 <= a < self.degree:
            raise PointOutOfRange(f"point {a} out of range for degree {self.degree}")


def closure(gens, degree: int | None = None) -> PermGroup:
    """Group generated by the given permutations (shared degree required)."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("need a degree for an empty generating set")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators have mixed degrees")
    return PermGroup(degree, gens or [identity_perm(degree)])


def trivial_group(degree: int) -> PermGroup:
    ident = [identity_perm(degree)]
    return PermGroup(degree, ident, ident)


def normal_subgroups_contained_in(g: PermGroup, h: PermGroup, guard: int = 10**4):
    """All subgroups N <= h with N normal in g.

    Built as join-closure of normal closures of single elements of h (each
    filtered to stay inside h); exact for this finite setting.
    """
    if h.order() > guard:
        raise SizeExceeded(f"|H| = {h.order()} exceeds guard {guard}")
    if not h.is_subgroup_of(g) and not h.elements <= g.elements:
        raise ValueError("H is not a subgroup of G")
    atoms = {}
    for x in h.sorted_elements:
        if x == g.identity:
            continue
        ncl = g.normal_closure([x])
        if ncl.elements <= h.elements:
            atoms[ncl.elements] = ncl
    found = {frozenset([g.identity]): trivial_group(g.degree)}
    frontier = dict(atoms)
    while frontier:
        found.update(frontier)
        new = {}
        for a_elems, a in frontier.items():
            for b_elems, b in atoms.items():
                if b_elems <= a_elems:
                    continue
                join_elems = closure_elements(
                    list(a.generators) + list(b.generators), g.degree
                )
                key = frozenset(join_elems)
                if key not in found and key not in new and key <= h.elements:
                    new[key] = PermGroup(g.degree, join_elems, join_elems)
        frontier = new
    return sorted(found.values(), key=lambda s: (s.order(), s.sorted_elements))


def orbit_partition_is_congruence_shaped(group: PermGroup):
    return group.orbits()
