"""Exact arithmetic on integral lattices presented by Gram matrices.

Everything here runs on arbitrary-precision Python integers; no floating
point is used anywhere.  All values are immutable and all functions are
pure, so the module is safe to use from concurrent callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Base class for lattice arithmetic errors."""


class DegenerateLatticeError(LatticeError):
    """The operation needs a nondegenerate lattice (det != 0)."""


class NotDivisibleError(LatticeError):
    """An entrywise exact division failed."""


class NotEvenError(LatticeError):
    """The operation needs an even lattice (all diagonal entries even)."""


class NotPositiveDefiniteError(LatticeError):
    """The operation needs a positive-definite form."""


class NotPerfectSquareRatioError(LatticeError):
    """A discriminant ratio is not the square of a positive integer."""


class PreconditionViolatedError(LatticeError):
    """Input has a rank or signature the operation does not support."""


def _check_int(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"matrix entries must be integers, got {type(x).__name__}")
    return int(x)


class GramLattice:
    """An integral lattice in a fixed basis, held as its Gram matrix.

    Rank 0 (the empty lattice) is allowed: it is the identity for
    direct_sum and has determinant 1 by the empty-product convention.
    """

    __slots__ = ("gram",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        gram = tuple(tuple(_check_int(x) for x in row) for row in rows)
        n = len(gram)
        for row in gram:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram = gram

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> int:
        return _det_bareiss([list(row) for row in self.gram])

    def disc(self) -> int:
        """Absolute value of the determinant; the lattice must be nondegenerate."""
        det = self.det()
        if det == 0:
            raise DegenerateLatticeError("lattice has determinant zero")
        return abs(det)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def is_positive_definite(self) -> bool:
        # Sylvester: all leading principal minors positive.
        for k in range(1, self.rank + 1):
            minor = _det_bareiss([list(row[:k]) for row in self.gram[:k]])
            if minor <= 0:
                return False
        return True

    def rescale(self, n: int) -> "GramLattice":
        """Multiply the bilinear form by a positive integer n."""
        if not isinstance(n, int) or n < 1:
            raise ValueError("rescale factor must be a positive integer")
        return GramLattice([[n * x for x in row] for row in self.gram])

    def unscale(self, n: int) -> "GramLattice":
        """Divide the form by n exactly; every entry must be divisible."""
        if not isinstance(n, int) or n < 1:
            raise ValueError("unscale factor must be a positive integer")
        for row in self.gram:
            for x in row:
                if x % n != 0:
                    raise NotDivisibleError(f"entry {x} is not divisible by {n}")
        return GramLattice([[x // n for x in row] for row in self.gram])

    def negate(self) -> "GramLattice":
        return GramLattice([[-x for x in row] for row in self.gram])

    def direct_sum(self, other: "GramLattice") -> "GramLattice":
        n, m = self.rank, other.rank
        rows = []
        for i in range(n):
            rows.append(list(self.gram[i]) + [0] * m)
        for j in range(m):
            rows.append([0] * n + list(other.gram[j]))
        return GramLattice(rows)

    def discriminant_group(self) -> tuple[int, ...]:
        """Invariant factors (> 1, in a divisibility chain) of the dual quotient."""
        if self.rank == 0:
            return ()
        if self.det() == 0:
            raise DegenerateLatticeError("discriminant group needs det != 0")
        d, _, _ = smith_normal_form(self.gram)
        return tuple(d[i][i] for i in range(self.rank) if d[i][i] > 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GramLattice) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"GramLattice({[list(row) for row in self.gram]})"


def _det_bareiss(m: list[list[int]]) -> int:
    # Fraction-free Gaussian elimination; exact over the integers.
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # Returns (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g.
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(
    matrix: Sequence[Sequence[int]],
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Smith normal form over Z.

    Returns (D, U, V) with U * matrix * V = D, U and V unimodular, D
    diagonal with nonnegative entries satisfying d1 | d2 | ... (zeros,
    if any, at the end).
    """
    d = [[_check_int(x) for x in row] for row in matrix]
    r = len(d)
    c = len(d[0]) if r else 0
    for row in d:
        if len(row) != c:
            raise ValueError("matrix rows must have equal length")
    u = _identity(r)
    v = _identity(c)

    def row_combine(i: int, j: int, a: int, b: int, a2: int, b2: int) -> None:
        # rows i, j <- (a*row_i + b*row_j, a2*row_i + b2*row_j) in d and u
        for mat in (d, u):
            ri, rj = mat[i], mat[j]
            for k in range(len(ri)):
                ri[k], rj[k] = a * ri[k] + b * rj[k], a2 * ri[k] + b2 * rj[k]

    def col_combine(i: int, j: int, a: int, b: int, a2: int, b2: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[i], row[j] = a * row[i] + b * row[j], a2 * row[i] + b2 * row[j]

    t = 0
    while t < min(r, c):
        piv = None
        for i in range(t, r):
            for j in range(t, c):
                if d[i][j] != 0 and (piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            d[t], d[piv[0]] = d[piv[0]], d[t]
            u[t], u[piv[0]] = u[piv[0]], u[t]
        if piv[1] != t:
            for mat in (d, v):
                for row in mat:
                    row[t], row[piv[1]] = row[piv[1]], row[t]
        while True:
            for i in range(t + 1, r):
                if d[i][t] == 0:
                    continue
                a, b = d[t][t], d[i][t]
                if b % a == 0:
                    q = b // a
                    row_combine(t, i, 1, 0, -q, 1)
                else:
                    g, x, y = _xgcd(a, b)
                    row_combine(t, i, x, y, -(b // g), a // g)
            for j in range(t + 1, c):
                if d[t][j] == 0:
                    continue
                a, b = d[t][t], d[t][j]
                if b % a == 0:
                    q = b // a
                    col_combine(t, j, 1, 0, -q, 1)
                else:
                    g, x, y = _xgcd(a, b)
                    col_combine(t, j, x, y, -(b // g), a // g)
            if any(d[i][t] for i in range(t + 1, r)):
                continue  # column ops disturbed the cleared column
            off = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if d[i][j] % d[t][t] != 0:
                        off = i
                        break
                if off is not None:
                    break
            if off is None:
                break
            # Absorb the offending row so the pivot divides the whole block.
            row_combine(t, off, 1, 1, 0, 1)
        t += 1
    for i in range(min(r, c)):
        if d[i][i] < 0:
            for k in range(c):
                d[i][k] = -d[i][k]
            for k in range(r):
                u[i][k] = -u[i][k]
    freeze = lambda m: tuple(tuple(row) for row in m)  # noqa: E731
    return freeze(d), freeze(u), freeze(v)


@dataclass(frozen=True, order=True)
class BinaryEvenForm:
    """Even binary form with Gram matrix [[2a, b], [b, 2c]]."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        for x in (self.a, self.b, self.c):
            _check_int(x)

    @property
    def disc(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    def gram(self) -> GramLattice:
        return GramLattice([[2 * self.a, self.b], [self.b, 2 * self.c]])

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc > 0

    @classmethod
    def from_gram(cls, lattice: GramLattice) -> "BinaryEvenForm":
        if lattice.rank != 2:
            raise PreconditionViolatedError("binary form needs a rank-2 lattice")
        if not lattice.is_even():
            raise NotEvenError("binary form needs even diagonal entries")
        g = lattice.gram
        return cls(g[0][0] // 2, g[0][1], g[1][1] // 2)


def reduce_binary(form: BinaryEvenForm) -> BinaryEvenForm:
    """Gauss-reduced representative with 0 <= b <= a <= c.

    Equivalence is taken up to lattice isometry, so the sign of b is
    normalized away; ties a = c or b = a keep b >= 0.
    """
    if not form.is_positive_definite():
        raise NotPositiveDefiniteError(f"form {form} is not positive definite")
    a, b, c = form.a, form.b, form.c
    while True:
        if b > a or b <= -a:
            k = (a - b) // (2 * a)  # unique shift with -a < b + 2ak <= a
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if b < 0:
        b = -b
    return BinaryEvenForm(a, b, c)


def is_isometric_binary(left: GramLattice, right: GramLattice) -> bool:
    """Isometry test for even positive-definite rank-2 lattices."""
    forms = []
    for lat in (left, right):
        if lat.rank != 2:
            raise PreconditionViolatedError("isometry test supports rank 2 only")
        if not lat.is_even():
            raise NotEvenError("isometry test needs even lattices")
        if not lat.is_positive_definite():
            raise NotPositiveDefiniteError("isometry test needs positive-definite lattices")
        forms.append(reduce_binary(BinaryEvenForm.from_gram(lat)))
    return forms[0] == forms[1]


def enumerate_even_posdef_binary(disc: int) -> list[BinaryEvenForm]:
    """All reduced even positive-definite binary forms of discriminant disc.

    Sorted lexicographically by (a, b, c); empty when none exist.
    """
    if not isinstance(disc, int) or disc < 1:
        raise ValueError("discriminant must be a positive integer")
    out = []
    a = 1
    while 3 * a * a <= disc:  # reduced forms satisfy 3a^2 <= 4ac - b^2
        for b in range(a + 1):
            num = disc + b * b
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a:
                    out.append(BinaryEvenForm(a, b, c))
        a += 1
    out.sort()
    return out


def sublattice_index_from_discs(d_sub: int, d_sup: int) -> int:
    """Index of a finite-index sublattice from the two discriminants.

    d_sub = index^2 * d_sup, so the ratio must be the square of a
    positive integer.
    """
    if d_sub < 1 or d_sup < 1:
        raise ValueError("discriminants must be positive")
    if d_sub % d_sup != 0:
        raise NotPerfectSquareRatioError(f"{d_sup} does not divide {d_sub}")
    ratio = d_sub // d_sup
    root = math.isqrt(ratio)
    if root * root != ratio:
        raise NotPerfectSquareRatioError(f"ratio {ratio} is not a perfect square")
    return root


def _hnf_upper(rows: list[list[int]], ncols: int) -> list[list[int]]:
    # Row-style Hermite form: pivots positive, entries above a pivot
    # reduced into [0, pivot).  Input rows span the lattice.
    pivots: dict[int, list[int]] = {}
    for vec in rows:
        vec = list(vec)
        for j in range(ncols):
            if vec[j] == 0:
                continue
            if j not in pivots:
                if vec[j] < 0:
                    vec = [-x for x in vec]
                pivots[j] = vec
                break
            piv = pivots[j]
            a, b = piv[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = [x - q * p for x, p in zip(vec, piv)]
            else:
                g, x, y = _xgcd(a, b)
                new_piv = [x * p + y * w for p, w in zip(piv, vec)]
                vec = [-(b // g) * p + (a // g) * w for p, w in zip(piv, vec)]
                pivots[j] = new_piv
        # fully reduced vectors vanish
    cols = sorted(pivots)
    basis = [pivots[j] for j in cols]
    # Back-reduce entries above each pivot.
    for idx, j in enumerate(cols):
        for prev in range(idx):
            q = basis[prev][j] // basis[idx][j]
            if q:
                basis[prev] = [x - q * y for x, y in zip(basis[prev], basis[idx])]
    return basis


def _hnf_lower(rows: list[list[int]], ncols: int) -> list[list[int]]:
    # Lower-triangular variant via the column-reversal mirror.
    rev = [list(reversed(r)) for r in rows]
    upper = _hnf_upper(rev, ncols)
    return [list(reversed(r)) for r in reversed(upper)]


def _subgroup_closure(gens: frozenset, add, zero) -> frozenset:
    closed = set(gens) | {zero}
    while True:
        new = {add(x, y) for x in closed for y in closed} - closed
        if not new:
            return frozenset(closed)
        closed |= new


def _subgroups_of_order(elements: list, add, zero, m: int) -> list[frozenset]:
    seen = {frozenset({zero})}
    stack = [frozenset({zero})]
    out = set()
    while stack:
        sub = stack.pop()
        if len(sub) == m:
            out.add(sub)
            continue
        if m % len(sub) != 0:
            continue  # cannot sit inside an order-m subgroup
        for g in elements:
            if g in sub:
                continue
            grown = _subgroup_closure(sub | {g}, add, zero)
            if len(grown) <= m and grown not in seen:
                seen.add(grown)
                stack.append(grown)
    return sorted(out, key=lambda s: tuple(sorted(s)))


def enumerate_even_overlattices(lattice: GramLattice, m: int) -> list[GramLattice]:
    """Even integral overlattices of index m, up to the ambient embedding.

    Each result is returned in a canonical basis: the generator matrix
    over (1/m) times the input basis is in lower-triangular Hermite form
    with positive pivots.  det(result) = det(input) / m^2, so there are
    none unless m^2 divides |det|.
    """
    if not isinstance(m, int) or m < 2:
        raise ValueError("overlattice index must be an integer >= 2")
    if not lattice.is_even():
        raise NotEvenError("overlattice enumeration needs an even lattice")
    det = lattice.det()
    if det == 0:
        raise DegenerateLatticeError("overlattice enumeration needs det != 0")
    n = lattice.rank
    if n == 0 or abs(det) % (m * m) != 0:
        return []
    d, _, v = smith_normal_form(lattice.gram)
    ds = [d[i][i] for i in range(n)]
    # Coordinates of the m-torsion of the discriminant group: k_i runs over
    # multiples of d_i / gcd(d_i, m).
    axes = []
    for di in ds:
        g = math.gcd(di, m)
        axes.append([t * (di // g) for t in range(g)])
    elements = sorted(product(*axes))
    zero = (0,) * n

    def add(x: tuple, y: tuple) -> tuple:
        return tuple((p + q) % di for p, q, di in zip(x, y, ds))

    gram = lattice.gram
    results = []
    for sub in _subgroups_of_order(elements, add, zero, m):
        rows = [[m if i == j else 0 for j in range(n)] for i in range(n)]
        for k in sorted(sub):
            if k == zero:
                continue
            # m * (dual-generator combination); integral because ord(k) | m.
            z = [m * ki // di for ki, di in zip(k, ds)]
            rows.append([sum(v[r][i] * z[i] for i in range(n)) for r in range(n)])
        basis = _hnf_lower(rows, n)
        if len(basis) != n:
            raise AssertionError("overlattice basis lost rank")
        num = [
            [
                sum(basis[i][p] * gram[p][q] * basis[j][q] for p in range(n) for q in range(n))
                for j in range(n)
            ]
            for i in range(n)
        ]
        if any(num[i][j] % (m * m) != 0 for i in range(n) for j in range(n)):
            continue  # not integral over the original pairing
        scaled = [[num[i][j] // (m * m) for j in range(n)] for i in range(n)]
        if any(scaled[i][i] % 2 != 0 for i in range(n)):
            continue  # integral but odd
        results.append(GramLattice(scaled))
    results.sort(key=lambda lat: lat.gram)
    return results


def root_gram(kind: str, rank: int) -> GramLattice:
    """Positive-definite root lattice Gram matrix of Dynkin type A, D or E.

    Determinants come out of the matrix itself: A_n has n + 1, D_n has 4,
    E6/E7/E8 have 3/2/1.
    """
    if kind == "A":
        if rank < 1:
            raise ValueError("A_n needs n >= 1")
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif kind == "D":
        if rank < 4:
            raise ValueError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(rank - 3)]
        edges += [(rank - 3, rank - 2), (rank - 3, rank - 1)]
    elif kind == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")
        edges = [(i, i + 1) for i in range(rank - 2)]
        edges.append((2, rank - 1))
    else:
        raise ValueError(f"unknown root lattice kind {kind!r}")
    rows = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        rows[i][i] = 2
    for i, j in edges:
        rows[i][j] = -1
        rows[j][i] = -1
    return GramLattice(rows)
