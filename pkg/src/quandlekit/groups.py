"""Concrete finite groups and their automorphisms.

Two storage strategies cover everything in scope:

* ``SemidirectGroup`` — Z_p^m ⋊ K for a small tagged complement K with an
  explicit action by matrices over Z_p.  Elements are (vector, complement)
  pairs packed into a single index.
* ``TableGroup`` — an explicit Cayley table (guarded to small orders); used
  for Q8/D8, central products, Heisenberg-style quotients and anything
  obtained by quotienting.

Automorphisms are stored as images of a fixed "pc" generating sequence
(every element of our groups is a unique power product over that sequence),
which lets a full permutation of the group be materialized with a handful of
vectorized table lookups.  All enumerators re-verify the defining relations
of whatever they emit.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product

import numpy as np

from . import matfp
from .errors import (
    NotClosed,
    NotFixed,
    NotInvariant,
    NotSubgroup,
    SizeExceeded,
    TheoremAssertionError,
    UnsupportedParameters,
)

TABLE_GUARD = 2600


# ---------------------------------------------------------------------------
# core group classes


class ConcreteGroup:
    """Shared behaviour for both storage strategies."""

    order: int
    generators: tuple[int, ...]
    name: str

    # pc data: sequence of (element, modulus) whose power products hit every
    # element exactly once, plus per-element exponent coordinates.
    pc_gens: tuple[int, ...] | None = None
    pc_mods: tuple[int, ...] | None = None

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def np_table(self) -> np.ndarray:
        if self.order > TABLE_GUARD:
            raise SizeExceeded(f"Cayley table guard: order {self.order}")
        return self._build_np_table()

    def _build_np_table(self) -> np.ndarray:
        n = self.order
        t = np.empty((n, n), dtype=np.uint32)
        for a in range(n):
            t[a] = [self.mul(a, b) for b in range(n)]
        return t

    @cached_property
    def np_inv(self) -> np.ndarray:
        n = self.order
        out = np.empty(n, dtype=np.uint32)
        for a in range(n):
            out[a] = self.inv(a)
        return out

    def pc_coords(self, a: int) -> tuple[int, ...]:
        raise NotImplementedError

    @cached_property
    def pc_coord_matrix(self) -> np.ndarray:
        return np.array([self.pc_coords(a) for a in range(self.order)], dtype=np.int64)

    def power(self, a: int, k: int) -> int:
        k = int(k)
        if k < 0:
            return self.power(self.inv(a), -k)
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        k = 1
        x = a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def order_profile(self) -> tuple[tuple[int, int], ...]:
        counts: dict[int, int] = {}
        for a in range(self.order):
            o = self.element_order(a)
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def conjugate(self, g: int, a: int) -> int:
        """g a g^-1."""
        return self.mul(self.mul(g, a), self.inv(g))

    def subgroup_closure(self, seed) -> tuple[int, ...]:
        seed = set(int(s) for s in seed)
        seed.add(self.identity)
        gens = sorted(seed)
        elems = set(gens)
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    c = self.mul(a, g)
                    if c not in elems:
                        elems.add(c)
                        new.append(c)
            frontier = new
        return tuple(sorted(elems))

    def is_subgroup(self, elems) -> bool:
        s = set(elems)
        if self.identity not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)

    def is_normal(self, elems) -> bool:
        s = set(elems)
        gens = self.generators or range(self.order)
        return all(self.conjugate(g, a) in s for g in gens for a in s)

    def center_elements(self) -> tuple[int, ...]:
        gens = self.generators or tuple(range(self.order))
        return tuple(
            a
            for a in range(self.order)
            if all(self.mul(a, g) == self.mul(g, a) for g in gens)
        )

    def derived_elements(self) -> tuple[int, ...]:
        gens = self.generators or tuple(range(self.order))
        seeds = {self.commutator(a, b) for a in gens for b in gens}
        # normal closure under the full group, then subgroup closure
        seeds.discard(self.identity)
        closed = set(seeds)
        frontier = list(seeds)
        while frontier:
            new = []
            for s in frontier:
                for g in gens:
                    c = self.conjugate(g, s)
                    if c not in closed:
                        closed.add(c)
                        new.append(c)
            frontier = new
        return self.subgroup_closure(closed)

    def lower_central_2_elements(self) -> tuple[int, ...]:
        gens = self.generators or tuple(range(self.order))
        der = self.derived_elements()
        seeds = {self.commutator(a, b) for a in gens for b in der}
        seeds.discard(self.identity)
        closed = set(seeds)
        frontier = list(seeds)
        while frontier:
            new = []
            for s in frontier:
                for g in gens:
                    c = self.conjugate(g, s)
                    if c not in closed:
                        closed.add(c)
                        new.append(c)
            frontier = new
        return self.subgroup_closure(closed)

    def left_cosets(self, subgroup_elems) -> list[tuple[int, ...]]:
        """Left cosets gH, each sorted, listed by minimal representative."""
        h = sorted(set(subgroup_elems))
        seen = set()
        cosets = []
        for g in range(self.order):
            if g in seen:
                continue
            coset = sorted(self.mul(g, x) for x in h)
            seen.update(coset)
            cosets.append(tuple(coset))
        return cosets

    def conjugacy_class(self, a: int) -> tuple[int, ...]:
        seen = {a}
        frontier = [a]
        gens = self.generators or tuple(range(self.order))
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    c = self.conjugate(g, x)
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
            frontier = new
        return tuple(sorted(seen))

    def conjugacy_class_reps(self) -> list[int]:
        seen = set()
        reps = []
        for a in range(self.order):
            if a in seen:
                continue
            cls = self.conjugacy_class(a)
            seen.update(cls)
            reps.append(a)
        return reps

    def is_abelian(self) -> bool:
        gens = self.generators or tuple(range(self.order))
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def exponent(self) -> int:
        e = 1
        for a in range(self.order):
            o = self.element_order(a)
            g = e
            while g % o:
                g += e
            e = g
        return e

    def __repr__(self):
        return f"{type(self).__name__}({self.name or 'order %d' % self.order})"


class TableGroup(ConcreteGroup):
    def __init__(self, table, generators=(), name="", pc_gens=None, pc_mods=None,
                 pc_coord_list=None, check=True):
        tbl = np.asarray(table, dtype=np.uint32)
        n = tbl.shape[0]
        if tbl.shape != (n, n):
            raise ValueError("Cayley table must be square")
        self.order = n
        self._table = tbl
        self.generators = tuple(int(g) for g in generators)
        self.name = name
        self.pc_gens = tuple(pc_gens) if pc_gens is not None else None
        self.pc_mods = tuple(pc_mods) if pc_mods is not None else None
        self._pc_coord_list = pc_coord_list
        if check:
            self._validate()

    def _validate(self):
        n = self.order
        t = self._table
        if not (t < n).all():
            raise ValueError("table entries out of range")
        if not (t[0] == np.arange(n)).all() or not (t[:, 0] == np.arange(n)).all():
            raise ValueError("element 0 must be the identity")
        # every row/column a permutation (Latin square)
        if not ((np.sort(t, axis=1) == np.arange(n)).all()
                and (np.sort(t, axis=0) == np.arange(n)[:, None]).all()):
            raise ValueError("table is not a Latin square")
        # exhaustive associativity, vectorized one z-slice at a time
        for z in range(n):
            left = t[t, z]            # (a b) z
            right = t[:, t[:, z]]     # a (b z)
            if not (left == right).all():
                raise ValueError(f"associativity fails through element {z}")

    def mul(self, a, b):
        return int(self._table[a, b])

    def inv(self, a):
        return int(np.nonzero(self._table[a] == 0)[0][0])

    def _build_np_table(self):
        return self._table

    def pc_coords(self, a):
        if self._pc_coord_list is None:
            raise NotImplementedError("no pc data for this table group")
        return self._pc_coord_list[a]


class SemidirectGroup(ConcreteGroup):
    """Z_p^m ⋊_rho K: elements are (vector, complement) pairs.

    index = vec_index * |K| + k, with vec_index little-endian base p.
    Multiplication: (v, h)(w, g) = (v + rho[h] w, h g).
    """

    def __init__(self, p, m, complement: TableGroup, rho, name=""):
        self.p = int(p)
        self.m = int(m)
        self.comp = complement
        self.rho = tuple(matfp.mat(r, p) for r in rho)
        self.order = p**m * complement.order
        self.name = name
        if len(self.rho) != complement.order:
            raise ValueError("need one action matrix per complement element")
        for r in self.rho:
            if matfp.det(r, p) == 0:
                raise ValueError("action matrices must be invertible")
        for a in range(complement.order):
            for b in range(complement.order):
                lhs = matfp.mat_mul(self.rho[a], self.rho[b], p)
                if lhs != self.rho[complement.mul(a, b)]:
                    raise ValueError("rho is not a homomorphism into GL_m(p)")
        # designated generators: basis vectors then complement generators
        self.generators = tuple(self.index((tuple(1 if i == j else 0 for i in range(m))), 0)
                                for j in range(m)) + tuple(
            self.index((0,) * m, g) for g in complement.generators
        )
        if complement.pc_gens is not None:
            self.pc_gens = tuple(self.index(tuple(1 if i == j else 0 for i in range(m)), 0)
                                 for j in range(m)) + tuple(
                self.index((0,) * m, g) for g in complement.pc_gens
            )
            self.pc_mods = (p,) * m + complement.pc_mods

    # -- element packing ---------------------------------------------------

    def vec_index(self, v) -> int:
        idx = 0
        for x in reversed(v):
            idx = idx * self.p + (int(x) % self.p)
        return idx

    def index_vec(self, idx: int):
        v = []
        for _ in range(self.m):
            v.append(idx % self.p)
            idx //= self.p
        return tuple(v)

    def index(self, v, k: int) -> int:
        return self.vec_index(v) * self.comp.order + int(k)

    def split(self, a: int):
        return self.index_vec(a // self.comp.order), a % self.comp.order

    def vector_element(self, v) -> int:
        return self.index(v, 0)

    def complement_element(self, k: int) -> int:
        return self.index((0,) * self.m, k)

    def mul(self, a, b):
        va, ka = self.split(a)
        vb, kb = self.split(b)
        w = matfp.mat_vec(self.rho[ka], vb, self.p)
        v = tuple((x + y) % self.p for x, y in zip(va, w))
        return self.index(v, self.comp.mul(ka, kb))

    def inv(self, a):
        va, ka = self.split(a)
        ki = self.comp.inv(ka)
        w = matfp.mat_vec(self.rho[ki], va, self.p)
        return self.index(tuple((-x) % self.p for x in w), ki)

    def pc_coords(self, a):
        v, k = self.split(a)
        return v + self.comp.pc_coords(k)

    def _build_np_table(self):
        n = self.order
        p, m, ko = self.p, self.m, self.comp.order
        nv = p**m
        vecs = np.array([list(self.index_vec(i)) for i in range(nv)], dtype=np.int64)
        # vec index helper: little-endian dot with powers of p
        powers = np.array([p**i for i in range(m)], dtype=np.int64)
        t = np.empty((n, n), dtype=np.uint32)
        ctab = self.comp.np_table.astype(np.int64)
        for ka in range(ko):
            r = np.array(self.rho[ka], dtype=np.int64)
            tv = (vecs @ r.T) % p  # rho[ka] w for all w
            for kb in range(ko):
                kc = ctab[ka, kb]
                # result vectors: va + rho[ka] vb, all pairs
                summed = (vecs[:, None, :] + tv[None, :, :]) % p
                block = (summed @ powers) * ko + kc
                t[ka::ko, kb::ko] = block.astype(np.uint32)
        return t

    def vector_subgroup(self) -> tuple[int, ...]:
        return tuple(i * self.comp.order for i in range(self.p**self.m))


# ---------------------------------------------------------------------------
# small complement groups


def cyclic_group(n: int, name=None) -> TableGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    coords = [(i,) for i in range(n)]
    return TableGroup(
        table,
        generators=(1 % n,) if n > 1 else (),
        name=name or f"Z{n}",
        pc_gens=(1 % n,) if n > 1 else (),
        pc_mods=(n,) if n > 1 else (),
        pc_coord_list=coords if n > 1 else [()],
    )


_Q8_TAGS = "1ijk"


def q8_group() -> TableGroup:
    """Quaternion group; index = 2*tag + sign with tags (1, i, j, k)."""

    def mul_pair(a, b):
        sa, ta = a % 2, a // 2
        sb, tb = b % 2, b // 2
        table = {
            (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
            (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
            (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
            (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
        }
        tag, sign = table[(ta, tb)]
        return 2 * tag + ((sa + sb + sign) % 2)

    table = [[mul_pair(a, b) for b in range(8)] for a in range(8)]
    x, y = 2, 4  # i, j
    coords = {}
    for a in range(4):
        xa = 0
        for _ in range(a):
            xa = mul_pair(xa, x)
        for b in range(2):
            e = xa
            for _ in range(b):
                e = mul_pair(e, y)
            coords[e] = (a, b)
    coord_list = [coords[e] for e in range(8)]
    return TableGroup(table, generators=(x, y), name="Q8",
                      pc_gens=(x, y), pc_mods=(4, 2), pc_coord_list=coord_list)


def d8_group() -> TableGroup:
    """Dihedral group of order 8: r^i s^j with index 2*i + j."""

    def mul_pair(a, b):
        ia, ja = a // 2, a % 2
        ib, jb = b // 2, b % 2
        i = (ia + (ib if ja == 0 else -ib)) % 4
        return 2 * i + ((ja + jb) % 2)

    table = [[mul_pair(a, b) for b in range(8)] for a in range(8)]
    r, s = 2, 1
    coords = [(a // 2, a % 2) for a in range(8)]
    return TableGroup(table, generators=(r, s), name="D8",
                      pc_gens=(r, s), pc_mods=(4, 2), pc_coord_list=coords)


def direct_product_table(g: ConcreteGroup, h: ConcreteGroup, name="") -> TableGroup:
    n, m = g.order, h.order
    table = [
        [
            (g.mul(a1, a2)) * m + h.mul(b1, b2)
            for a2 in range(n)
            for b2 in range(m)
        ]
        for a1 in range(n)
        for b1 in range(m)
    ]
    gens = tuple(a * m for a in g.generators) + tuple(h.generators)
    return TableGroup(table, generators=gens, name=name or f"{g.name}x{h.name}")


def quotient_group(g: ConcreteGroup, normal_elems, name="") -> tuple[TableGroup, list[int]]:
    """Quotient by a normal subgroup; returns (group, coset id per element)."""
    n_set = set(normal_elems)
    if not g.is_subgroup(n_set):
        raise NotSubgroup("quotient needs a subgroup")
    if not g.is_normal(n_set):
        raise ValueError("quotient needs a normal subgroup")
    cosets = g.left_cosets(n_set)
    coset_id = [0] * g.order
    for i, coset in enumerate(cosets):
        for e in coset:
            coset_id[e] = i
    table = [
        [coset_id[g.mul(cosets[i][0], cosets[j][0])] for j in range(len(cosets))]
        for i in range(len(cosets))
    ]
    gens = tuple(sorted({coset_id[x] for x in (g.generators or ())} - {0}))
    return TableGroup(table, generators=gens, name=name or f"{g.name}/N"), coset_id


def central_product(g: TableGroup, h: TableGroup, name="") -> TableGroup:
    """Central product identifying the (unique) central involutions."""
    zg = [a for a in g.center_elements() if a != 0 and g.element_order(a) == 2]
    zh = [a for a in h.center_elements() if a != 0 and h.element_order(a) == 2]
    if len(zg) != 1 or len(zh) != 1:
        raise UnsupportedParameters("central product needs unique central involutions")
    prod = direct_product_table(g, h)
    diag = prod.subgroup_closure([zg[0] * h.order + zh[0]])
    q, _ = quotient_group(prod, diag, name=name or f"{g.name}*{h.name}")
    return q


# ---------------------------------------------------------------------------
# automorphisms


class GroupAutomorphism:
    """Automorphism given by images of the group's pc generating sequence.

    ``meta`` carries construction data (restriction matrix, exponent twist,
    translation) when an enumerator has it; ``perm`` materializes the full
    permutation of element indices on demand.
    """

    __slots__ = ("group", "pc_images", "meta", "_perm")

    def __init__(self, group: ConcreteGroup, pc_images, meta=None):
        self.group = group
        self.pc_images = tuple(int(x) for x in pc_images)
        self.meta = meta or {}
        self._perm = None

    def __eq__(self, other):
        return (
            isinstance(other, GroupAutomorphism)
            and self.group is other.group
            and self.pc_images == other.pc_images
        )

    def __hash__(self):
        return hash(self.pc_images)

    def __repr__(self):
        return f"GroupAutomorphism({self.group.name}, {self.pc_images})"

    @property
    def perm(self) -> np.ndarray:
        if self._perm is None:
            self._perm = materialize_automorphism(self.group, self.pc_images)
        return self._perm

    def apply(self, a: int) -> int:
        if self._perm is not None:
            return int(self._perm[a])
        g = self.group
        coords = g.pc_coords(a)
        out = g.identity
        for img, e in zip(self.pc_images, coords):
            out = g.mul(out, g.power(img, e))
        return out

    def compose(self, other: "GroupAutomorphism") -> "GroupAutomorphism":
        """self ∘ other."""
        return GroupAutomorphism(
            self.group, tuple(self.apply(x) for x in other.pc_images)
        )

    def inverse(self) -> "GroupAutomorphism":
        inv_perm = np.argsort(self.perm)
        return GroupAutomorphism(
            self.group, tuple(int(inv_perm[g]) for g in self.group.pc_gens)
        )

    def is_identity(self) -> bool:
        return self.pc_images == tuple(self.group.pc_gens)

    def order(self) -> int:
        k = 1
        f = self
        while not f.is_identity():
            f = self.compose(f)
            k += 1
            if k > 10 * self.group.order:
                raise AssertionError("automorphism order runaway")
        return k

    def fixed_points(self) -> tuple[int, ...]:
        perm = self.perm
        return tuple(int(i) for i in np.nonzero(perm == np.arange(len(perm)))[0])


def materialize_automorphism(group: ConcreteGroup, pc_images) -> np.ndarray:
    """Full permutation of element indices from pc-generator images."""
    if group.pc_gens is not None:
        table = group.np_table
        coords = group.pc_coord_matrix
        acc = None
        for col, (img, mod) in enumerate(zip(pc_images, group.pc_mods)):
            powers = np.empty(mod, dtype=np.uint32)
            e = group.identity
            for k in range(mod):
                powers[k] = e
                e = group.mul(e, img)
            part = powers[coords[:, col]]
            acc = part if acc is None else table[acc, part]
        perm = acc
    else:
        perm = _materialize_by_bfs(group, pc_images)
    if sorted(perm.tolist()) != list(range(group.order)):
        raise NotClosed("generator images do not define a bijection")
    return perm.astype(np.uint32)


def _materialize_by_bfs(group: ConcreteGroup, images) -> np.ndarray:
    gens = group.pc_gens if group.pc_gens is not None else group.generators
    n = group.order
    out = np.full(n, -1, dtype=np.int64)
    out[group.identity] = group.identity
    frontier = [group.identity]
    while frontier:
        new = []
        for e in frontier:
            for g, img in zip(gens, images):
                e2 = group.mul(e, g)
                m2 = group.mul(int(out[e]), img)
                if out[e2] == -1:
                    out[e2] = m2
                    new.append(e2)
                elif out[e2] != m2:
                    raise NotClosed("images are inconsistent with the table")
        frontier = new
    if (out == -1).any():
        raise NotClosed("generators do not generate the group")
    return out


def automorphism_from_generator_images(group: ConcreteGroup, gen_images,
                                        meta=None) -> GroupAutomorphism:
    """Build from images of ``group.generators`` via consistency BFS."""
    perm = _materialize_by_bfs_generic(group, group.generators, gen_images)
    pc_gens = group.pc_gens if group.pc_gens is not None else group.generators
    f = GroupAutomorphism(group, tuple(int(perm[g]) for g in pc_gens), meta)
    f._perm = perm.astype(np.uint32)
    return f


def _materialize_by_bfs_generic(group, gens, images) -> np.ndarray:
    n = group.order
    out = np.full(n, -1, dtype=np.int64)
    out[group.identity] = group.identity
    frontier = [group.identity]
    while frontier:
        new = []
        for e in frontier:
            for g, img in zip(gens, images):
                e2 = group.mul(e, int(g))
                m2 = group.mul(int(out[e]), int(img))
                if out[e2] == -1:
                    out[e2] = m2
                    new.append(e2)
                elif out[e2] != m2:
                    raise NotClosed("images are inconsistent with the table")
        frontier = new
    if (out == -1).any():
        raise NotClosed("generators do not generate the group")
    if sorted(out.tolist()) != list(range(n)):
        raise NotClosed("images do not define a bijection")
    return out


def is_full_homomorphism(group: ConcreteGroup, f: GroupAutomorphism) -> bool:
    """Exhaustive check f(ab) = f(a)f(b); test helper, O(order^2)."""
    perm = f.perm
    t = group.np_table
    return bool((perm[t] == t[np.ix_(perm, perm)]).all())


def fix_subgroup(group: ConcreteGroup, f: GroupAutomorphism) -> tuple[int, ...]:
    """Fix(f) by exhaustive scan."""
    return f.fixed_points()


def twisted_subgroup(group: ConcreteGroup, f: GroupAutomorphism) -> tuple[int, ...]:
    """[G, f] = <g f(g)^-1 : g in G>."""
    perm = f.perm
    seeds = {group.mul(g, group.inv(int(perm[g]))) for g in range(group.order)}
    return group.subgroup_closure(seeds)


def induced_on_quotient(group: ConcreteGroup, f: GroupAutomorphism, normal_elems):
    """Automorphism induced on G/N; N must be f-invariant and normal."""
    n_set = set(int(x) for x in normal_elems)
    perm = f.perm
    if {int(perm[x]) for x in n_set} != n_set:
        raise NotInvariant("subgroup is not invariant under f")
    q, coset_id = quotient_group(group, n_set)
    cosets = group.left_cosets(n_set)
    images = []
    gens = q.generators or tuple(range(q.order))
    rep_of = [c[0] for c in cosets]
    for qg in gens:
        images.append(coset_id[int(perm[rep_of[qg]])])
    return automorphism_from_generator_images(
        TableGroup(q.np_table, generators=gens, name=q.name, check=False), images
    )


def coset_permutation(group: ConcreteGroup, f: GroupAutomorphism, subgroup_elems):
    """The induced map gH -> f(g)H on left cosets (H f-invariant, any H)."""
    h = set(int(x) for x in subgroup_elems)
    perm = f.perm
    if {int(perm[x]) for x in h} != h:
        raise NotInvariant("subgroup is not invariant under f")
    cosets = group.left_cosets(h)
    coset_id = {}
    for i, coset in enumerate(cosets):
        for e in coset:
            coset_id[e] = i
    return tuple(coset_id[int(perm[c[0]])] for c in cosets)


# ---------------------------------------------------------------------------
# the order-p^2*q family ("Gpq" in recipes)


def build_p2q(p: int, q: int) -> SemidirectGroup:
    """The unique Z_p^2 ⋊ Z_q with a determinant-1 order-q action.

    Needs q | p^2 - 1 and q an odd prime; the action matrix is
    diag(k, k^-1) for the smallest order-q k when q | p - 1, else the
    companion matrix of the first x^2 + bx + 1 with an order-q root.
    """
    if not (matfp.is_prime(p) and matfp.is_prime(q)):
        raise UnsupportedParameters("p and q must be prime")
    if q == 2:
        raise UnsupportedParameters("q = 2 has no determinant-1 order-2 action")
    if (p * p - 1) % q:
        raise UnsupportedParameters(f"{q} does not divide {p}^2 - 1")
    if (p - 1) % q == 0:
        k = next(
            k for k in range(2, p) if pow(k, q, p) == 1 and k != 1
        )
        a = matfp.mat([[k, 0], [0, pow(k, p - 2, p)]], p)
    else:
        a = None
        for b in range(p):
            cand = matfp.mat([[0, -1], [1, -b]], p)
            if matfp.mat_order(cand, p) == q:
                a = cand
                break
        if a is None:
            raise UnsupportedParameters("no order-q companion matrix found")
    comp = cyclic_group(q)
    rho = [matfp.mat_pow(a, i, p) for i in range(q)]
    g = SemidirectGroup(p, 2, comp, rho, name=f"Gpq({p},{q})")
    g.family = "p2q"
    g.params = (p, q)
    g.action_matrix = a
    return g


def enumerate_aut_p2q(group: SemidirectGroup) -> list[GroupAutomorphism]:
    """All automorphisms of build_p2q output, as (H, u, d) triples.

    Solves HA = A^u H over Z_p for every u in Z_q^* and raises if any
    u other than +-1 admits an invertible solution.
    """
    p, q = group.params
    a = group.action_matrix
    out = []
    for u in range(1, q):
        mats = _intertwiners(a, matfp.mat_pow(a, u, p), p)
        invertible = [h for h in mats if matfp.det(h, p) != 0]
        if not invertible:
            continue
        if u not in (1, q - 1):
            raise TheoremAssertionError(
                f"unexpected twist exponent u={u} with invertible solutions"
            )
        for h in invertible:
            for d0 in range(p):
                for d1 in range(p):
                    out.append(_p2q_automorphism(group, h, u, (d0, d1)))
    return out


def _p2q_automorphism(group: SemidirectGroup, h, u, d) -> GroupAutomorphism:
    p, q = group.params
    a = group.action_matrix
    au = matfp.mat_pow(a, u % q, p)
    c_img = group.index(matfp.mat_vec(au, d, p), u % q)
    e1 = group.vector_element((h[0][0], h[1][0]))
    e2 = group.vector_element((h[0][1], h[1][1]))
    f = GroupAutomorphism(group, (e1, e2, c_img), meta={"F": h, "u": u, "d": tuple(d)})
    # relation check: f(c)^q = 1 and conjugation matches HA = A^u H
    if group.power(c_img, q) != group.identity:
        raise TheoremAssertionError("image of c does not have order dividing q")
    return f


def _intertwiners(a, b, p):
    """All 2x2 H with H a = b H, as a list spanning the solution space."""
    rows = []
    for i in range(2):
        for j in range(2):
            coeff = [0] * 4
            for k in range(2):
                coeff[i * 2 + k] = (coeff[i * 2 + k] + a[k][j]) % p
            for k in range(2):
                coeff[k * 2 + j] = (coeff[k * 2 + j] - b[i][k]) % p
            rows.append(tuple(coeff))
    basis = matfp.kernel_basis(tuple(rows), p)
    sols = matfp.span(basis, p, dim=4)
    return [matfp.mat([[s[0], s[1]], [s[2], s[3]]], p) for s in sorted(sols)]


def aut_count_p2q(p: int, q: int) -> int:
    """|Aut| computed from solution-space counting (no materialization)."""
    g = build_p2q(p, q)
    a = g.action_matrix
    total = 0
    for u in range(1, q):
        mats = _intertwiners(a, matfp.mat_pow(a, u, p), p)
        invertible = [h for h in mats if matfp.det(h, p) != 0]
        if invertible and u not in (1, q - 1):
            raise TheoremAssertionError(f"unexpected twist exponent u={u}")
        total += len(invertible) * p * p
    return total


def quandle_candidate_automorphisms_p2q(group: SemidirectGroup) -> list[GroupAutomorphism]:
    """Automorphisms with u = -1, Tr F = 0, det F = -1 (the coset-quandle set)."""
    p, q = group.params
    out = [
        f
        for f in enumerate_aut_p2q(group)
        if f.meta["u"] == q - 1
        and (f.meta["F"][0][0] + f.meta["F"][1][1]) % p == 0
        and matfp.det(f.meta["F"], p) == (p - 1) % p
    ]
    return out


def standard_swap_automorphism(group: SemidirectGroup, d) -> GroupAutomorphism:
    """The representative with F = [[0,1],[1,0]], c -> c^-1 d."""
    p, q = group.params
    f_mat = matfp.mat([[0, 1], [1, 0]], p)
    a = group.action_matrix
    lhs = matfp.mat_mul(f_mat, a, p)
    rhs = matfp.mat_mul(matfp.mat_pow(a, q - 1, p), f_mat, p)
    if lhs != rhs:
        raise TheoremAssertionError("swap matrix does not invert the action")
    return _p2q_automorphism(group, f_mat, q - 1, tuple(d))


# ---------------------------------------------------------------------------
# the order-8p^2 family ("Gk" in recipes)


def order3_scalars(p: int) -> list[int]:
    return sorted(k for k in range(2, p) if pow(k, 3, p) == 1)


def build_p2_q8(p: int, k: int | None = None) -> SemidirectGroup:
    """Z_p^2 ⋊ Q8 with the fixed-point-free irreducible Q8 action."""
    if not matfp.is_prime(p) or p % 3 != 1:
        raise UnsupportedParameters("need a prime p = 1 mod 3")
    ks = order3_scalars(p)
    if k is None:
        k = ks[0]
    if k not in ks:
        raise UnsupportedParameters(f"k={k} is not an order-3 element mod {p}")
    comp = q8_group()
    rho_x = matfp.mat([[0, -1], [1, 0]], p)
    rho_y = matfp.mat([[k * k, k], [k, -k * k]], p)
    # extend to all of Q8 through the pc normal form x^a y^b
    rho = []
    for e in range(8):
        a_exp, b_exp = comp.pc_coords(e)
        m = matfp.identity(2)
        for _ in range(a_exp):
            m = matfp.mat_mul(m, rho_x, p)
        for _ in range(b_exp):
            m = matfp.mat_mul(m, rho_y, p)
        rho.append(m)
    g = SemidirectGroup(p, 2, comp, rho, name=f"Gk({p},k={k})")
    for h in range(1, 8):
        one_minus = matfp.mat_sub(matfp.identity(2), g.rho[h], p)
        if matfp.det(one_minus, p) == 0:
            raise TheoremAssertionError("action is not fixed-point-free")
    g.family = "p2q8"
    g.params = (p, k)
    return g


def q8_automorphisms() -> list[tuple[int, int]]:
    """Aut(Q8) as (image of x, image of y) pairs over the q8_group encoding."""
    q8 = q8_group()
    out = []
    for ix in range(8):
        if q8.element_order(ix) != 4:
            continue
        for iy in range(8):
            if q8.element_order(iy) != 4:
                continue
            try:
                _materialize_by_bfs_generic(q8, q8.generators, (ix, iy))
            except NotClosed:
                continue
            out.append((ix, iy))
    return out


def enumerate_aut_p2_q8(group: SemidirectGroup) -> list[GroupAutomorphism]:
    """All automorphisms of build_p2_q8 output; count 24 p^2 (p-1)."""
    p, _ = group.params
    comp = group.comp
    inv2 = pow(2, p - 2, p)
    out = []
    for ix, iy in q8_automorphisms():
        mats = _intertwiners_pair(group.rho[2], group.rho[ix],
                                  group.rho[4], group.rho[iy], p)
        invertible = [f for f in mats if matfp.det(f, p) != 0]
        if len(invertible) != p - 1:
            raise TheoremAssertionError("intertwiner space is not a line")
        for f_mat in invertible:
            for w0 in range(p):
                for w1 in range(p):
                    w = (w0, w1)
                    out.append(_p2q8_automorphism(group, ix, iy, f_mat, w, inv2))
    return out


def _p2q8_automorphism(group, ix, iy, f_mat, w, inv2) -> GroupAutomorphism:
    p = group.p
    v1 = _half_one_plus(group.rho[ix], w, p, inv2)
    v2 = _half_one_plus(group.rho[iy], w, p, inv2)
    img_x = group.index(matfp.mat_vec(group.rho[ix], v1, p), ix)
    img_y = group.index(matfp.mat_vec(group.rho[iy], v2, p), iy)
    e1 = group.vector_element((f_mat[0][0], f_mat[1][0]))
    e2 = group.vector_element((f_mat[0][1], f_mat[1][1]))
    f = GroupAutomorphism(group, (e1, e2, img_x, img_y),
                          meta={"F": f_mat, "qx": ix, "qy": iy, "w": tuple(w)})
    _verify_q8_relations(group, img_x, img_y, w)
    return f


def _half_one_plus(rho_h, w, p, inv2):
    m = matfp.scalar_mul(inv2, matfp.mat_add(matfp.identity(2), rho_h, p), p)
    return matfp.mat_vec(m, w, p)


def _verify_q8_relations(group, img_x, img_y, w):
    """x^2 = y^2 = [x,y] = z and z^2 = 1 must be preserved."""
    z_img = group.index(tuple((-x) % group.p for x in w), 1)
    xx = group.mul(img_x, img_x)
    yy = group.mul(img_y, img_y)
    comm = group.commutator(img_x, img_y)
    if not (xx == yy == comm == z_img):
        raise TheoremAssertionError("quaternion relations are not preserved")
    if group.mul(z_img, z_img) != group.identity:
        raise TheoremAssertionError("central involution image has wrong order")


def _intertwiners_pair(a1, b1, a2, b2, p):
    """All 2x2 F with F a1 = b1 F and F a2 = b2 F."""
    rows = []
    for (a, b) in ((a1, b1), (a2, b2)):
        for i in range(2):
            for j in range(2):
                coeff = [0] * 4
                for k in range(2):
                    coeff[i * 2 + k] = (coeff[i * 2 + k] + a[k][j]) % p
                for k in range(2):
                    coeff[k * 2 + j] = (coeff[k * 2 + j] - b[i][k]) % p
                rows.append(tuple(coeff))
    basis = matfp.kernel_basis(tuple(rows), p)
    sols = matfp.span(basis, p, dim=4)
    return [matfp.mat([[s[0], s[1]], [s[2], s[3]]], p) for s in sorted(sols)]


def order3_coset_automorphism(group: SemidirectGroup, lam: int) -> GroupAutomorphism:
    """The order-3 representative with x -> y, y -> xyz, z -> z and
    restriction (1+lam) * [[1, -k], [k^2, 0]] on the vector part."""
    p, k = group.params
    if pow(lam, 3, p) != 1 or lam == 1:
        raise UnsupportedParameters("lam must be a nontrivial cube root of 1")
    q8 = group.comp
    x, y = 2, 4
    z = q8.mul(x, x)
    img_qx = y
    img_qy = q8.mul(q8.mul(x, y), z)
    s = (1 + lam) % p
    f_mat = matfp.mat([[s, -k * s], [k * k * s, 0]], p)
    return _p2q8_automorphism(group, img_qx, img_qy, f_mat, (0, 0), pow(2, p - 2, p))


# ---------------------------------------------------------------------------
# extraspecial groups


def build_extraspecial2(variant) -> TableGroup:
    """Central product of the listed order-8 factors ('D8' / 'Q8')."""
    if not variant:
        raise UnsupportedParameters("need at least one factor")
    factories = {"D8": d8_group, "Q8": q8_group}
    groups = []
    for v in variant:
        if v not in factories:
            raise UnsupportedParameters(f"unknown factor {v!r}")
        groups.append(factories[v]())
    if 2 ** (2 * len(groups) + 1) > 2000:
        raise SizeExceeded("central product exceeds the 2000-element guard")
    out = groups[0]
    for nxt in groups[1:]:
        out = central_product(out, nxt)
    out.name = "*".join(variant)
    center = out.center_elements()
    if len(center) != 2:
        raise TheoremAssertionError("extraspecial center must have order 2")
    q, _ = quotient_group(out, out.subgroup_closure(center))
    if q.exponent() > 2:
        raise TheoremAssertionError("central quotient must be elementary abelian")
    return out


def build_extraspecial_p_exp_p(p: int) -> SemidirectGroup:
    """Heisenberg group of order p^3 and exponent p (p odd)."""
    if p == 2 or not matfp.is_prime(p):
        raise UnsupportedParameters("p must be an odd prime (use build_extraspecial2)")
    comp = cyclic_group(p)
    rho = [matfp.mat([[1, 0], [i, 1]], p) for i in range(p)]
    g = SemidirectGroup(p, 2, comp, rho, name=f"Heis({p})")
    g.family = "heisenberg"
    g.params = (p,)
    return g


def enumerate_aut_heisenberg(group: SemidirectGroup) -> list[GroupAutomorphism]:
    """Automorphisms via noncommuting generator-image pairs.

    For the exponent-p Heisenberg group every pair (a, b) with [a, b] != 1
    extends to an automorphism x -> a, y -> b; the count p^3 (p^2-1)(p-1)
    matches the full automorphism group.
    """
    (p,) = group.params
    x = group.complement_element(1)
    y = group.vector_element((1, 0))
    noncentral = [g for g in range(group.order)
                  if g not in set(_heis_center(group))]
    out = []
    for a in noncentral:
        for b in noncentral:
            comm = group.commutator(a, b)
            if comm == group.identity:
                continue
            # pc gens are (y, z, x); z image is the commutator [a, b]
            out.append(GroupAutomorphism(group, (b, comm, a),
                                         meta={"img_x": a, "img_y": b}))
    return out


def _heis_center(group):
    return group.subgroup_closure([group.vector_element((0, 1))])


# ---------------------------------------------------------------------------
# Z_2^m ⋊ Z_p


def build_elemabelian_cyclic(m: int, p: int, action) -> SemidirectGroup:
    """Z_2^m ⋊ Z_p with a given order-p action matrix over F_2."""
    a = matfp.mat(action, 2)
    if matfp.mat_order(a, 2) != p:
        raise UnsupportedParameters("action matrix must have order p")
    comp = cyclic_group(p)
    rho = [matfp.mat_pow(a, i, 2) for i in range(p)]
    g = SemidirectGroup(2, m, comp, rho, name=f"Z2^{m}:Z{p}")
    g.family = "elemabelian_cyclic"
    g.params = (m, p)
    g.action_matrix = a
    return g


def order_p_class_reps_gl2(m: int, p: int) -> list[matfp.Mat]:
    """One representative per conjugacy class of order-p elements of GL_m(2).

    x^p - 1 is squarefree over F_2, so classes correspond to multisets of
    nontrivial irreducible factors (degree d = ord_p(2)) padded with trivial
    summands; representatives are block-diagonal companion sums.
    """
    d = 1
    while (2**d - 1) % p:
        d += 1
        if d > m:
            return []
    factors = matfp.irreducible_factors_of_xn_minus_1(p, d, 2)
    reps = []
    max_blocks = m // d
    for t in range(1, max_blocks + 1):
        for combo in _multisets(len(factors), t):
            blocks = [matfp.companion(factors[i], 2) for i in combo]
            reps.append(_block_diag(blocks, m))
    return reps


def _multisets(n, t):
    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, n):
            for rest in rec(i, left - 1):
                yield (i,) + rest

    return rec(0, t)


def _block_diag(blocks, m):
    out = [[0] * m for _ in range(m)]
    pos = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[pos + i][pos + j] = b[i][j]
        pos += k
    for i in range(pos, m):
        out[i][i] = 1
    return matfp.mat(out, 2)


def elemabelian_intertwiners(a, u, m, p_prime):
    """All F in GL_m(2) with F a = a^u F (may be empty)."""
    target = matfp.mat_pow(a, u, 2)
    rows = []
    for i in range(m):
        for j in range(m):
            coeff = [0] * (m * m)
            for k in range(m):
                coeff[i * m + k] ^= a[k][j]
            for k in range(m):
                coeff[k * m + j] ^= target[i][k]
            rows.append(tuple(coeff))
    basis = matfp.kernel_basis(tuple(rows), 2)
    if len(basis) > 14:
        raise SizeExceeded("intertwiner space too large to enumerate")
    out = []
    for sol in sorted(matfp.span(basis, 2, dim=m * m)):
        f = matfp.mat([sol[i * m : (i + 1) * m] for i in range(m)], 2)
        if matfp.det(f, 2) != 0:
            out.append(f)
    return out


def elemabelian_d_space(group: SemidirectGroup, u: int) -> list[tuple[int, ...]]:
    """Valid translation parts d for c -> c^u d: kernel of sum of rho^(u j)."""
    m, p = group.params
    s = matfp.zeros(m, m)
    acc = matfp.identity(m)
    au = matfp.mat_pow(group.action_matrix, u, 2)
    for _ in range(p):
        s = matfp.mat_add(s, acc, 2)
        acc = matfp.mat_mul(acc, au, 2)
    basis = matfp.kernel_basis(s, 2)
    return sorted(matfp.span(basis, 2, dim=m))


def enumerate_aut_elemabelian_cyclic(group: SemidirectGroup, guard: int = 500_000):
    """All automorphisms (F, u, d); list-materialized under a guard."""
    out = []
    for f, u, d in iter_aut_elemabelian_cyclic(group):
        out.append(elemabelian_automorphism(group, f, u, d))
        if len(out) > guard:
            raise SizeExceeded("automorphism count exceeds guard")
    return out


def iter_aut_elemabelian_cyclic(group: SemidirectGroup):
    m, p = group.params
    a = group.action_matrix
    for u in range(1, p):
        mats = elemabelian_intertwiners(a, u, m, p)
        if not mats:
            continue
        d_space = elemabelian_d_space(group, u)
        for f in mats:
            for d in d_space:
                yield f, u, d


def elemabelian_automorphism(group: SemidirectGroup, f, u, d) -> GroupAutomorphism:
    m, p = group.params
    au = matfp.mat_pow(group.action_matrix, u, 2)
    c_img = group.index(matfp.mat_vec(au, d, 2), u)
    images = tuple(
        group.vector_element(tuple(f[i][j] for i in range(m))) for j in range(m)
    ) + (c_img,)
    g = GroupAutomorphism(group, images, meta={"F": f, "u": u, "d": tuple(d)})
    if group.power(c_img, p) != group.identity:
        raise TheoremAssertionError("cyclic generator image has wrong order")
    return g


def elemabelian_fix_order(group: SemidirectGroup, f, u, d) -> int:
    """|Fix| for an (F, u, d) automorphism, by linear algebra."""
    m, p = group.params
    one_minus_f = matfp.mat_sub(matfp.identity(m), f, 2)
    base = len(matfp.kernel_basis(one_minus_f, 2))
    total = 2**base if _consistent(one_minus_f, (0,) * m, 2) else 0
    if u == 1:
        acc = matfp.identity(m)
        s = matfp.zeros(m, m)
        for i in range(1, p):
            s = matfp.mat_add(s, acc, 2)
            acc = matfp.mat_mul(acc, group.action_matrix, 2)
            rhs = matfp.mat_vec(s, d, 2)
            if _consistent(one_minus_f, rhs, 2):
                total += 2**base
    return total


def _consistent(a, b, p):
    return matfp.solve(a, b, p) is not None


# ---------------------------------------------------------------------------
# generic table-group automorphism search and isomorphism testing


def enumerate_aut_table(group: ConcreteGroup) -> list[GroupAutomorphism]:
    """All automorphisms of a small group by backtracking on generator images."""
    gens = list(group.generators)
    if not gens:
        gens = _greedy_generators(group)
    orders = [group.element_order(g) for g in gens]
    candidates = [
        [e for e in range(group.order) if group.element_order(e) == o] for o in orders
    ]
    out = []

    def extend(level, images):
        if level == len(gens):
            try:
                f = automorphism_from_generator_images_seq(group, gens, images)
            except NotClosed:
                return
            out.append(f)
            return
        for c in candidates[level]:
            if _partial_consistent(group, gens[: level + 1], images + [c]):
                extend(level + 1, images + [c])

    extend(0, [])
    return out


def automorphism_from_generator_images_seq(group, gens, images) -> GroupAutomorphism:
    perm = _materialize_by_bfs_generic(group, gens, images)
    pc_gens = group.pc_gens if group.pc_gens is not None else group.generators
    if not pc_gens:
        pc_gens = tuple(gens)
    f = GroupAutomorphism(group, tuple(int(perm[g]) for g in pc_gens))
    f._perm = perm.astype(np.uint32)
    return f


def _partial_consistent(group, gens, images) -> bool:
    try:
        _partial_hom(group, gens, images)
    except NotClosed:
        return False
    return True


def _partial_hom(group, gens, images):
    """Extend gens -> images over <gens>; raises NotClosed on conflict."""
    n = group.order
    out = {group.identity: group.identity}
    frontier = [group.identity]
    while frontier:
        new = []
        for e in frontier:
            for g, img in zip(gens, images):
                e2 = group.mul(e, int(g))
                m2 = group.mul(out[e], int(img))
                if e2 not in out:
                    out[e2] = m2
                    new.append(e2)
                elif out[e2] != m2:
                    raise NotClosed("conflict")
        frontier = new
    if len(set(out.values())) != len(out):
        raise NotClosed("not injective on the generated subgroup")
    return out


def _greedy_generators(group) -> list[int]:
    gens: list[int] = []
    closed = {group.identity}
    order = sorted(range(group.order), key=lambda e: -group.element_order(e))
    for e in order:
        if e not in closed:
            gens.append(e)
            closed = set(group.subgroup_closure(gens))
            if len(closed) == group.order:
                break
    return gens


def group_isomorphism(g1: ConcreteGroup, g2: ConcreteGroup,
                      twist1: GroupAutomorphism | None = None,
                      twist2: GroupAutomorphism | None = None):
    """An isomorphism g1 -> g2 as an index map, or None.

    With twists given, only isomorphisms psi with psi . twist1 = twist2 . psi
    are accepted (used for conjugacy of coset-quandle data).
    """
    if g1.order != g2.order:
        return None
    if g1.order_profile != g2.order_profile:
        return None
    gens = _greedy_generators(g1) if not g1.generators else list(g1.generators)
    # make sure the designated generators actually generate
    if len(g1.subgroup_closure(gens)) != g1.order:
        gens = _greedy_generators(g1)
    t1 = twist1.perm if twist1 is not None else None
    t2 = twist2.perm if twist2 is not None else None
    orders = [g1.element_order(g) for g in gens]
    first_candidates = [
        r for r in g2.conjugacy_class_reps() if g2.element_order(r) == orders[0]
    ] if t1 is None else [
        e for e in range(g2.order) if g2.element_order(e) == orders[0]
    ]
    rest_candidates = [
        [e for e in range(g2.order) if g2.element_order(e) == o] for o in orders[1:]
    ]

    def attempt(images):
        try:
            mapping = _constrained_hom(g1, gens, images, g2, t1, t2)
        except NotClosed:
            return None
        return mapping

    def backtrack(level, images):
        if level == len(gens):
            return attempt(images)
        pool = first_candidates if level == 0 else rest_candidates[level - 1]
        for c in pool:
            if not _partial_consistent_pair(g1, g2, gens[: level + 1], images + [c], t1, t2):
                continue
            result = backtrack(level + 1, images + [c])
            if result is not None:
                return result
        return None

    return backtrack(0, [])


def _constrained_hom(g1, gens, images, g2, t1, t2):
    mapping = _partial_hom_pair(g1, g2, gens, images, t1, t2)
    if len(mapping) != g1.order:
        raise NotClosed("generators do not generate")
    if len(set(mapping.values())) != g1.order:
        raise NotClosed("not bijective")
    return mapping


def _partial_hom_pair(g1, g2, gens, images, t1, t2):
    out = {g1.identity: g2.identity}
    frontier = [g1.identity]
    while frontier:
        new = []
        for e in frontier:
            targets = [(g1.mul(e, int(g)), g2.mul(out[e], int(i)))
                       for g, i in zip(gens, images)]
            if t1 is not None:
                targets.append((int(t1[e]), int(t2[out[e]])))
            for e2, m2 in targets:
                if e2 not in out:
                    out[e2] = m2
                    new.append(e2)
                elif out[e2] != m2:
                    raise NotClosed("conflict")
        frontier = new
    return out


def _partial_consistent_pair(g1, g2, gens, images, t1, t2) -> bool:
    try:
        _partial_hom_pair(g1, g2, gens, images, t1, t2)
    except NotClosed:
        return False
    return True


def perm_group_to_table(pg) -> tuple[TableGroup, dict]:
    """Convert a PermGroup into a TableGroup (sorted element indexing)."""
    from .permgroup import compose

    elems = list(pg.sorted_elements)
    index = {e: i for i, e in enumerate(elems)}
    ident = pg.identity
    # put identity at index 0 by swapping
    zero = index[ident]
    if zero != 0:
        elems[0], elems[zero] = elems[zero], elems[0]
        index = {e: i for i, e in enumerate(elems)}
    table = [[index[compose(a, b)] for b in elems] for a in elems]
    gens = tuple(sorted(index[g] for g in pg.generators if g != ident))
    return TableGroup(table, generators=gens, name="perm", check=False), index


# ---------------------------------------------------------------------------
# bulk automorphism machinery (vectorized over materialized permutations)


def materialize_matrix(autos, chunk=None) -> np.ndarray:
    """(N, |G|) array of automorphism permutations."""
    return np.stack([f.perm for f in autos])


def conjugate_perm(psi: np.ndarray, psi_inv: np.ndarray, f: np.ndarray) -> np.ndarray:
    return psi[f[psi_inv]]


def conjugacy_orbit(group, f: GroupAutomorphism, autos, chunk_size=4096):
    """{psi f psi^-1 : psi in autos} as a set of pc-image tuples."""
    pc_gens = np.array(group.pc_gens if group.pc_gens is not None else group.generators)
    fperm = f.perm
    orbit = set()
    for start in range(0, len(autos), chunk_size):
        block = autos[start : start + chunk_size]
        mat = np.stack([a.perm for a in block])
        inv = np.argsort(mat, axis=1)
        conj = np.take_along_axis(mat, fperm[inv], axis=1)
        keys = conj[:, pc_gens]
        for row in keys:
            orbit.add(tuple(int(x) for x in row))
    return orbit


def centralizer_order(group, f: GroupAutomorphism, autos, chunk_size=4096) -> int:
    fperm = f.perm
    count = 0
    for start in range(0, len(autos), chunk_size):
        block = autos[start : start + chunk_size]
        mat = np.stack([a.perm for a in block])
        left = mat[:, fperm]
        right = fperm[mat]
        count += int((left == right).all(axis=1).sum())
    return count
