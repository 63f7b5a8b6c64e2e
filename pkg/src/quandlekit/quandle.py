"""Finite quandles: validated operation tables, constructors and predicates.

A quandle is stored as its full n x n table, table[a][b] = a * b.  Rows are
the left translations; validation checks idempotence, that every row is a
permutation, and left distributivity, reporting a witness on failure.
Everything downstream (congruences, classification) works purely on tables.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import groups as concrete
from . import matfp, permgroup
from .errors import (
    NotAutomorphism,
    NotClosed,
    NotFixed,
    NotIdempotent,
    NotLeftDistributive,
    NotLeftQuasigroup,
    NotSubgroup,
    ReduciblePolynomial,
    SizeExceeded,
    TNotInvertible,
    UnsupportedPair,
    UnsupportedParameters,
)


class FiniteQuandle:
    """Immutable finite quandle on {0..n-1}.

    ``labels`` optionally records what each index meant in the construction
    (coset representatives, vectors); algorithms never look at it.
    """

    def __init__(self, table, labels=None, name="", validate=True):
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("quandle table must be square")
        self.n = int(arr.shape[0])
        self._np = arr
        self.table = tuple(tuple(int(x) for x in row) for row in arr)
        self.labels = labels
        self.name = name
        if validate:
            self._validate()

    # -- axioms ------------------------------------------------------------

    def _validate(self):
        n, t = self.n, self._np
        if n == 0:
            raise ValueError("empty quandle")
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries out of range")
        for a in range(n):
            if len(set(self.table[a])) != n:
                raise NotLeftQuasigroup(
                    f"row {a} is not a permutation", witness=a
                )
        diag = t[np.arange(n), np.arange(n)]
        bad = np.nonzero(diag != np.arange(n))[0]
        if len(bad):
            a = int(bad[0])
            raise NotIdempotent(f"{a} * {a} = {diag[a]} != {a}", witness=a)
        for a in range(n):
            row = t[a]
            left = row[t]                      # a * (b * c)
            right = t[np.ix_(row, row)]        # (a * b) * (a * c)
            if not (left == right).all():
                b, c = map(int, np.argwhere(left != right)[0])
                raise NotLeftDistributive(
                    f"a*(b*c) != (a*b)*(a*c) at (a,b,c)=({a},{b},{c})",
                    witness=(a, b, c),
                )

    # -- basic operations ---------------------------------------------------

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def _ldiv(self):
        n = self.n
        out = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            out[a][self._np[a]] = np.arange(n)
        return out

    def ldiv(self, a: int, b: int) -> int:
        """a \\ b: the unique x with a * x = b."""
        return int(self._ldiv[a][b])

    def left_translation(self, a: int) -> tuple[int, ...]:
        return self.table[a]

    def rdiv(self, a: int, b: int) -> int:
        """a / b for latin quandles: the unique x with x * b = a."""
        col = self._np[:, b]
        hits = np.nonzero(col == a)[0]
        if len(hits) != 1:
            raise UnsupportedParameters("right division needs a latin quandle")
        return int(hits[0])

    def __eq__(self, other):
        return isinstance(other, FiniteQuandle) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteQuandle(n={self.n}{', ' + self.name if self.name else ''})"

    # -- derived structure ---------------------------------------------------

    @cached_property
    def lmlt(self) -> permgroup.PermGroup:
        """Left multiplication group <L_a>."""
        return permgroup.closure(set(self.table), self.n)

    @cached_property
    def dis(self) -> permgroup.PermGroup:
        """Displacement group <L_a L_0^{-1}> (fixed base point)."""
        l0_inv = permgroup.inverse(self.table[0])
        gens = {permgroup.compose(row, l0_inv) for row in self.table}
        return permgroup.closure(gens, self.n)

    def dis_generators(self) -> list[tuple[int, ...]]:
        l0_inv = permgroup.inverse(self.table[0])
        return sorted({permgroup.compose(row, l0_inv) for row in self.table})

    def is_connected(self) -> bool:
        """Dis(Q) acts transitively (computed from generator orbits)."""
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        gens = self.dis_generators()
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def is_latin(self) -> bool:
        t = self._np
        return bool((np.sort(t, axis=0) == np.arange(self.n)[:, None]).all())

    def is_faithful(self) -> bool:
        return len(set(self.table)) == self.n

    def is_projection(self) -> bool:
        return all(row == tuple(range(self.n)) for row in self.table)

    def lambda_partition(self) -> list[tuple[int, ...]]:
        """Kernel of a -> L_a as a partition (blocks sorted by minimum)."""
        by_row: dict[tuple, list[int]] = {}
        for a, row in enumerate(self.table):
            by_row.setdefault(row, []).append(a)
        return sorted((tuple(v) for v in by_row.values()), key=lambda b: b[0])

    # -- subquandles ----------------------------------------------------------

    def sg(self, elements) -> frozenset:
        """Subquandle generated by the given elements (closure under * and \\)."""
        current = set(int(x) for x in elements)
        frontier = list(current)
        while frontier:
            new = []
            base = list(current)
            for x in frontier:
                for y in base:
                    for z in (
                        self.table[x][y],
                        self.table[y][x],
                        self.ldiv(x, y),
                        self.ldiv(y, x),
                    ):
                        if z not in current:
                            current.add(z)
                            new.append(z)
            frontier = new
        return frozenset(current)

    def subquandle(self, elements) -> "FiniteQuandle":
        elems = sorted(set(int(x) for x in elements))
        index = {e: i for i, e in enumerate(elems)}
        for a in elems:
            for b in elems:
                if self.table[a][b] not in index:
                    raise NotClosed(f"{a}*{b} leaves the subset")
        table = [[index[self.table[a][b]] for b in elems] for a in elems]
        return FiniteQuandle(table, labels=elems, validate=False)

    def report_fingerprint(self, a: int):
        """Cheap isomorphism invariant of a point."""
        row_ct = permgroup.cycle_type(self.table[a])
        col = tuple(self.table[b][a] for b in range(self.n))
        col_profile = tuple(sorted(np.bincount(np.array(col), minlength=self.n)))
        return (row_ct, col_profile)


# ---------------------------------------------------------------------------
# constructors


def from_table(table) -> FiniteQuandle:
    return FiniteQuandle(table)


def projection_quandle(n: int) -> FiniteQuandle:
    return FiniteQuandle([[b for b in range(n)] for _ in range(n)],
                         name=f"P{n}", validate=False)


class AbelianGroupSpec:
    """Direct sum of cyclic groups; elements are mixed-radix tuples."""

    def __init__(self, moduli):
        self.moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in self.moduli):
            raise ValueError("moduli must be positive")
        self.order = 1
        for m in self.moduli:
            self.order *= m

    def index(self, v) -> int:
        idx = 0
        for x, m in zip(reversed(v), reversed(self.moduli)):
            idx = idx * m + (int(x) % m)
        return idx

    def element(self, idx: int):
        v = []
        for m in self.moduli:
            v.append(idx % m)
            idx //= m
        return tuple(v)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def apply_matrix(self, f, v):
        return tuple(
            sum(f[i][j] * v[j] for j in range(len(v))) % m
            for i, m in enumerate(self.moduli)
        )


def affine(moduli, f_matrix, name="") -> FiniteQuandle:
    """Affine quandle a * b = f(b) + (1-f)(a) over a product of cyclic groups.

    ``f_matrix`` is an integer matrix (or a bare integer for one generator);
    it must define an automorphism, which is checked by building the map.
    """
    spec = AbelianGroupSpec(moduli if hasattr(moduli, "__iter__") else [moduli])
    k = len(spec.moduli)
    if isinstance(f_matrix, int):
        f_matrix = [[f_matrix if i == j else 0 for j in range(k)] for i in range(k)]
    f_matrix = [list(map(int, row)) for row in f_matrix]
    elements = [spec.element(i) for i in range(spec.order)]
    images = [spec.apply_matrix(f_matrix, v) for v in elements]
    index_of = {v: i for i, v in enumerate(elements)}
    img_idx = [index_of[w] for w in images]
    if len(set(img_idx)) != spec.order:
        raise NotAutomorphism("matrix does not act bijectively")
    # additivity is automatic for a matrix action on mixed moduli only if the
    # matrix respects the component orders; verify honestly.
    for a in elements[: min(len(elements), 64)]:
        for b in elements[: min(len(elements), 64)]:
            if spec.apply_matrix(f_matrix, spec.add(a, b)) != spec.add(
                spec.apply_matrix(f_matrix, a), spec.apply_matrix(f_matrix, b)
            ):
                raise NotAutomorphism("matrix is not additive on the group")
    table = [
        [
            index_of[spec.add(images[b], spec.add(elements[a], spec.neg(spec.apply_matrix(f_matrix, elements[a]))))]
            for b in range(spec.order)
        ]
        for a in range(spec.order)
    ]
    q = FiniteQuandle(table, labels=elements, name=name or f"Aff{spec.moduli}")
    q.affine_data = (spec, f_matrix)
    return q


def affine_connected_order3_f():
    """The order-3 automorphism of Z_2^2 (companion of x^2+x+1)."""
    return [[0, 1], [1, 1]]


def affine_from_polynomial(p: int, g_coeffs, power: int = 1) -> FiniteQuandle:
    """Affine quandle over Z_p^(deg*power) with f = companion of g^power.

    g must be irreducible with g(0) != 0 (so multiplication by t is
    invertible).  power 1 gives a strictly simple quandle; power 2 the
    subdirectly irreducible two-step module construction.
    """
    if power not in (1, 2):
        raise UnsupportedParameters("power must be 1 or 2")
    g = [int(c) % p for c in g_coeffs]
    while g and g[-1] == 0:
        g.pop()
    if len(g) - 1 < 1 or len(g) - 1 > 4:
        raise UnsupportedParameters("need 1 <= deg g <= 4")
    if g[-1] != 1:
        raise UnsupportedParameters("g must be monic")
    matfp.check_irreducible_or_raise(g, p)
    if g[0] == 0:
        raise TNotInvertible("g(0) = 0 makes multiplication by t singular")
    poly = list(g)
    if power == 2:
        poly = matfp.poly_mul(g, g, p)
    comp = matfp.companion(poly, p)
    n = len(poly) - 1
    return affine([p] * n, [list(row) for row in comp],
                  name=f"Poly({p},{g},{power})")


def coset_quandle(group: concrete.ConcreteGroup, subgroup_elems,
                  f: concrete.GroupAutomorphism, name="") -> FiniteQuandle:
    """Q(G, H, f): left cosets of H <= Fix(f) with aH * bH = a f(a^-1 b) H."""
    h = sorted(set(int(x) for x in subgroup_elems))
    if not group.is_subgroup(h):
        raise NotSubgroup("H is not a subgroup")
    perm = f.perm
    fixed = set(f.fixed_points())
    if not set(h) <= fixed:
        raise NotFixed("H is not contained in Fix(f)")
    cosets = group.left_cosets(h)
    coset_id = np.empty(group.order, dtype=np.int64)
    for i, coset in enumerate(cosets):
        for e in coset:
            coset_id[e] = i
    reps = np.array([c[0] for c in cosets], dtype=np.int64)
    t = group.np_table.astype(np.int64)
    inv = group.np_inv.astype(np.int64)
    fp = perm.astype(np.int64)
    table = np.empty((len(reps), len(reps)), dtype=np.int64)
    for i, r in enumerate(reps):
        # a f(a^-1 b) H for all b-representatives at once
        table[i] = coset_id[t[r, fp[t[inv[r], reps]]]]
    q = FiniteQuandle(table, labels=[c[0] for c in cosets], name=name)
    q.coset_data = (group, tuple(h), f)
    return q


def principal_quandle(group: concrete.ConcreteGroup,
                      f: concrete.GroupAutomorphism, name="") -> FiniteQuandle:
    return coset_quandle(group, [group.identity], f, name=name)


def conj_quandle(group: concrete.ConcreteGroup, elements) -> FiniteQuandle:
    """Conjugation quandle g * h = g^-1 h g on a conjugation-closed subset."""
    elems = sorted(set(int(x) for x in elements))
    index = {e: i for i, e in enumerate(elems)}
    for g in elems:
        for h in elems:
            c = group.mul(group.mul(group.inv(g), h), g)
            if c not in index:
                raise NotClosed(f"conjugate {c} of {h} by {g} leaves the set")
    table = [
        [index[group.mul(group.mul(group.inv(g), h), g)] for h in elems]
        for g in elems
    ]
    return FiniteQuandle(table, labels=elems, name=f"Conj({group.name})")


def direct_product(q1: FiniteQuandle, q2: FiniteQuandle) -> FiniteQuandle:
    n1, n2 = q1.n, q2.n
    table = [
        [
            (q1.table[a1][b1]) * n2 + q2.table[a2][b2]
            for b1 in range(n1)
            for b2 in range(n2)
        ]
        for a1 in range(n1)
        for a2 in range(n2)
    ]
    return FiniteQuandle(
        table,
        labels=[(a1, a2) for a1 in range(n1) for a2 in range(n2)],
        name=f"({q1.name})x({q2.name})" if q1.name or q2.name else "",
        validate=False,
    )


# ---------------------------------------------------------------------------
# isomorphism testing


def _generating_set(q: FiniteQuandle) -> list[int]:
    gens = [0]
    closed = q.sg(gens)
    while len(closed) < q.n:
        nxt = min(set(range(q.n)) - closed)
        gens.append(nxt)
        closed = q.sg(gens)
    return gens


def _extend_map(q1: FiniteQuandle, q2: FiniteQuandle, gens, images):
    """Propagate a generator assignment to the full map; None on conflict."""
    mapping = {}
    for g, im in zip(gens, images):
        if mapping.get(g, im) != im:
            return None
        mapping[g] = im
    frontier = list(mapping)
    known = list(mapping)
    while frontier:
        new = []
        for x in list(mapping):
            for y in list(mapping):
                pairs = (
                    (q1.table[x][y], q2.table[mapping[x]][mapping[y]]),
                    (q1.ldiv(x, y), q2.ldiv(mapping[x], mapping[y])),
                )
                for src, dst in pairs:
                    if src in mapping:
                        if mapping[src] != dst:
                            return None
                    else:
                        mapping[src] = dst
                        new.append(src)
        if not new:
            break
        frontier = new
    if len(mapping) != q1.n:
        return None
    values = set(mapping.values())
    if len(values) != q1.n:
        return None
    # full verification
    for x in range(q1.n):
        for y in range(q1.n):
            if mapping[q1.table[x][y]] != q2.table[mapping[x]][mapping[y]]:
                return None
    return [mapping[i] for i in range(q1.n)]


def iso(q1: FiniteQuandle, q2: FiniteQuandle):
    """A quandle isomorphism as an image list, or None."""
    if q1.n != q2.n:
        return None
    fp1 = [q1.report_fingerprint(a) for a in range(q1.n)]
    fp2 = [q2.report_fingerprint(a) for a in range(q2.n)]
    if sorted(fp1) != sorted(fp2):
        return None
    gens = _generating_set(q1)
    pools = [[b for b in range(q2.n) if fp2[b] == fp1[g]] for g in gens]

    def backtrack(level, images):
        if level == len(gens):
            return _extend_map(q1, q2, gens, images)
        for c in pools[level]:
            if c in images:
                continue
            result = backtrack(level + 1, images + [c])
            if result is not None:
                return result
        return None

    return backtrack(0, [])


def aut_group(q: FiniteQuandle, guard: int = 64) -> permgroup.PermGroup:
    """Full automorphism group by backtracking (n <= guard)."""
    if q.n > guard:
        raise SizeExceeded(f"aut_group guard {guard} exceeded")
    fp = [q.report_fingerprint(a) for a in range(q.n)]
    gens = _generating_set(q)
    pools = [[b for b in range(q.n) if fp[b] == fp[g]] for g in gens]
    autos = []

    def backtrack(level, images):
        if level == len(gens):
            result = _extend_map(q, q, gens, images)
            if result is not None:
                autos.append(tuple(result))
            return
        for c in pools[level]:
            if c in images:
                continue
            backtrack(level + 1, images + [c])

    backtrack(0, [])
    return permgroup.PermGroup(q.n, autos, autos)


def iso_by_group_data(g1, f1, g2, f2) -> bool:
    """Isomorphism test for connected coset quandles via group data.

    True iff there is a group isomorphism psi: g1 -> g2 with
    f2 = psi f1 psi^-1 (valid when H_i = Fix(f_i) or H_i = 1).
    """
    if g1.order != g2.order:
        return False
    if g1 is g2:
        # orbit membership under Aut(G); enumerate family-specific Aut
        auts = _all_automorphisms(g1)
        target = f2.pc_images
        fperm = f1.perm
        for psi in auts:
            p = psi.perm
            pinv = np.argsort(p)
            conj = p[fperm[pinv]]
            pc = g1.pc_gens if g1.pc_gens is not None else g1.generators
            if tuple(int(conj[x]) for x in pc) == target:
                return True
        return False
    if g1.order > 2600 or g2.order > 2600:
        raise UnsupportedPair("groups too large for table isomorphism search")
    return concrete.group_isomorphism(g1, g2, twist1=f1, twist2=f2) is not None


def _all_automorphisms(group):
    fam = getattr(group, "family", None)
    if fam == "p2q":
        return concrete.enumerate_aut_p2q(group)
    if fam == "p2q8":
        return concrete.enumerate_aut_p2_q8(group)
    if fam == "elemabelian_cyclic":
        return concrete.enumerate_aut_elemabelian_cyclic(group)
    if fam == "heisenberg":
        return concrete.enumerate_aut_heisenberg(group)
    return concrete.enumerate_aut_table(group)


def rebuild_over_displacement(q: FiniteQuandle, base: int = 0) -> FiniteQuandle:
    """Connected Q represented as Q(Dis(Q), Dis(Q)_a, conj by L_a)."""
    if not q.is_connected():
        raise UnsupportedParameters("representation needs a connected quandle")
    dis = q.dis
    table_group, index = concrete.perm_group_to_table(dis)
    perms = [None] * dis.order()
    for perm, i in index.items():
        perms[i] = perm
    la = q.table[base]
    la_inv = permgroup.inverse(la)
    gens = table_group.generators or tuple(range(table_group.order))
    if not gens or len(table_group.subgroup_closure(gens)) != table_group.order:
        gens = tuple(range(table_group.order))
    images = [
        index[permgroup.compose(permgroup.compose(la, perms[g]), la_inv)]
        for g in gens
    ]
    f = concrete.automorphism_from_generator_images_seq(table_group, gens, images)
    stab = [i for i, perm in enumerate(perms) if perm[base] == base]
    return coset_quandle(table_group, stab, f, name=f"overdis({q.name})")


def left_translation_order_matches_conjugation(q: FiniteQuandle, a: int = 0) -> bool:
    """|L_a| equals the order of conjugation by L_a on Dis(Q) (connected Q)."""
    la = q.table[a]
    la_order = permgroup.perm_order(la)
    dis_elems = q.dis.elements
    la_inv = permgroup.inverse(la)
    k = 1
    current = {e: permgroup.compose(permgroup.compose(la, e), la_inv) for e in dis_elems}
    mapping = current
    while any(mapping[e] != e for e in dis_elems):
        mapping = {e: current[mapping[e]] for e in dis_elems}
        k += 1
    return k == la_order
