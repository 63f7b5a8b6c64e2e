"""Dense linear algebra over prime fields Z_p.

Matrices are tuples of tuples of ints reduced mod p; this keeps them hashable
so they can key dictionaries during automorphism enumeration.  numpy is used
only transiently inside Gaussian elimination.  Scale is tiny (m <= 6), so
clarity wins over throughput everywhere in this module.
"""

from __future__ import annotations

from itertools import product

from .errors import ReduciblePolynomial, Singular

Mat = tuple[tuple[int, ...], ...]
Vec = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def mat(rows, p: int) -> Mat:
    return tuple(tuple(int(x) % p for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Mat:
    return tuple((0,) * cols for _ in range(rows))


def mat_add(a: Mat, b: Mat, p: int) -> Mat:
    return tuple(tuple((x + y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat, p: int) -> Mat:
    return tuple(tuple((x - y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat, p: int) -> Mat:
    return tuple(tuple((-x) % p for x in row) for row in a)


def mat_mul(a: Mat, b: Mat, p: int) -> Mat:
    cols = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a
    )


def mat_vec(a: Mat, v: Vec, p: int) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def scalar_mul(c: int, a: Mat, p: int) -> Mat:
    return tuple(tuple((c * x) % p for x in row) for row in a)


def mat_pow(a: Mat, k: int, p: int) -> Mat:
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base, p)
        base = mat_mul(base, base, p)
        k >>= 1
    return result


def det(a: Mat, p: int) -> int:
    n = len(a)
    if n == 1:
        return a[0][0] % p
    if n == 2:
        return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % p
    m = [list(row) for row in a]
    d = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            d = -d
        inv = pow(m[col][col], p - 2, p)
        d = d * m[col][col] % p
        for r in range(col + 1, n):
            f = m[r][col] * inv % p
            if f:
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[col])]
    return d % p


def inverse(a: Mat, p: int) -> Mat:
    n = len(a)
    m = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] % p), None)
        if pivot is None:
            raise Singular("matrix is singular mod %d" % p)
        m[col], m[pivot] = m[pivot], m[col]
        inv = pow(m[col][col], p - 2, p)
        m[col] = [x * inv % p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def gl_order(n: int, p: int) -> int:
    q = p**n
    result = 1
    for i in range(n):
        result *= q - p**i
    return result


def mat_order(a: Mat, p: int) -> int:
    """Least k >= 1 with a^k = I; raises Singular on det 0."""
    if det(a, p) == 0:
        raise Singular("singular matrix has no multiplicative order")
    bound = gl_order(len(a), p)
    ident = identity(len(a))
    power = a
    for k in range(1, bound + 1):
        if power == ident:
            return k
        power = mat_mul(power, a, p)
    raise AssertionError("order exceeded |GL|; arithmetic bug")


def rref(rows, p: int):
    """Row-reduce over Z_p; returns (reduced rows, pivot column list)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def kernel_basis(a: Mat, p: int) -> list[Vec]:
    """Basis of the right kernel {v : a v = 0}."""
    ncols = len(a[0]) if a else 0
    reduced, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(reduced, pivots):
            v[c] = (-row[f]) % p
        basis.append(tuple(v))
    return basis


def solve(a: Mat, b: Vec, p: int) -> Vec | None:
    """One solution of a x = b, or None if inconsistent."""
    aug = [list(row) + [bi % p] for row, bi in zip(a, b)]
    reduced, pivots = rref(aug, p)
    ncols = len(a[0]) if a else 0
    for row in reduced:
        if all(x == 0 for x in row[:ncols]) and row[ncols] % p:
            return None
    x = [0] * ncols
    for row, c in zip(reduced, pivots):
        if c < ncols:
            x[c] = row[ncols] % p
    if any(c == ncols for c in pivots):
        return None
    return tuple(x)


def span(vectors, p: int, dim: int | None = None) -> set[Vec]:
    """All Z_p-linear combinations of the given vectors."""
    if not vectors:
        return {(0,) * dim} if dim else {()}
    n = len(vectors[0])
    basis, _ = rref(vectors, p)
    basis = [tuple(row) for row in basis if any(row)]
    out = set()
    for coeffs in product(range(p), repeat=len(basis)):
        v = [0] * n
        for c, vec in zip(coeffs, basis):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, vec)]
        out.add(tuple(v))
    return out


def rank(a: Mat, p: int) -> int:
    return len(rref(a, p)[1])


# ---------------------------------------------------------------------------
# 2x2 eigenstructure

EIGEN_SCALAR = "scalar"
EIGEN_DIAGONALIZABLE = "diagonalizable"
EIGEN_IRREDUCIBLE = "irreducible"
EIGEN_DEFECTIVE = "defective"


def sqrt_mod(a: int, p: int) -> int | None:
    a %= p
    for x in range((p + 1) // 2 + 1):
        if x * x % p == a:
            return x
    return None


def eigen_analysis(a: Mat, p: int):
    """Classify an invertible 2x2 matrix by its characteristic roots.

    Returns (kind, eigenvalues); kinds: scalar, diagonalizable (two distinct
    roots), irreducible (no roots in Z_p), defective (repeated root,
    non-scalar).
    """
    if len(a) != 2 or len(a[0]) != 2:
        raise ValueError("eigen_analysis is 2x2 only")
    if det(a, p) == 0:
        raise Singular("singular matrix")
    if a[0][1] == 0 and a[1][0] == 0 and a[0][0] == a[1][1]:
        return EIGEN_SCALAR, (a[0][0], a[0][0])
    tr = (a[0][0] + a[1][1]) % p
    dt = det(a, p)
    disc = (tr * tr - 4 * dt) % p
    root = sqrt_mod(disc, p)
    if root is None:
        return EIGEN_IRREDUCIBLE, ()
    if disc == 0:
        lam = tr * pow(2, p - 2, p) % p
        return EIGEN_DEFECTIVE, (lam, lam)
    inv2 = pow(2, p - 2, p)
    l1 = (tr + root) * inv2 % p
    l2 = (tr - root) * inv2 % p
    return EIGEN_DIAGONALIZABLE, (l1, l2)


# ---------------------------------------------------------------------------
# Polynomials over Z_p: coefficient lists, lowest degree first.


def poly_mod(f, g, p):
    """Remainder of f divided by g (g monic-ish: leading coeff invertible)."""
    f = [c % p for c in f]
    g = [c % p for c in g]
    while g and g[-1] == 0:
        g.pop()
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    while len(f) - 1 >= dg and any(f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) - 1 < dg:
            break
        coef = f[-1] * inv_lead % p
        shift = len(f) - 1 - dg
        for i, c in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * c) % p
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def monic_irreducibles(degree: int, p: int):
    """All monic irreducible polynomials of the given degree over Z_p."""
    return list(_monic_irreducibles_raw(degree, p))


def _monic_irreducibles_raw(degree, p):
    if degree == 1:
        for c in range(p):
            yield [c, 1]
        return
    cache = {d: list(_monic_irreducibles_raw(d, p)) for d in range(1, degree)}
    for tail in product(range(p), repeat=degree):
        f = list(tail) + [1]
        if _is_irreducible_with_cache(f, p, cache):
            yield f


def _is_irreducible_with_cache(f, p, cache):
    degree = len(f) - 1
    if degree == 1:
        return True
    for d in range(1, degree // 2 + 1):
        for g in cache[d]:
            if not poly_mod(list(f), g, p):
                return False
    return True


def is_irreducible(f, p: int) -> bool:
    """Irreducibility by trial division; intended for degree <= 4ish."""
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    degree = len(f) - 1
    if degree < 1:
        return False
    cache = {d: list(_monic_irreducibles_raw(d, p)) for d in range(1, degree // 2 + 1)}
    for d in range(1, degree // 2 + 1):
        for g in cache[d]:
            if not poly_mod(list(f), g, p):
                return False
    return True


def companion(f, p: int) -> Mat:
    """Companion matrix of a monic polynomial (lowest-degree-first coeffs)."""
    f = [c % p for c in f]
    if f[-1] != 1:
        raise ValueError("companion matrix needs a monic polynomial")
    n = len(f) - 1
    cols = []
    for j in range(n):
        if j < n - 1:
            col = [1 if i == j + 1 else 0 for i in range(n)]
        else:
            col = [(-f[i]) % p for i in range(n)]
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def irreducible_factors_of_xn_minus_1(n: int, degree: int, p: int):
    """Monic degree-`degree` irreducible factors of x^n - 1 over Z_p."""
    xn_minus_1 = [(-1) % p] + [0] * (n - 1) + [1]
    out = []
    for f in monic_irreducibles(degree, p):
        if not poly_mod(list(xn_minus_1), f, p):
            out.append(f)
    return out


def check_irreducible_or_raise(f, p):
    if not is_irreducible(f, p):
        raise ReduciblePolynomial(f"polynomial {f} is reducible over Z_{p}")
