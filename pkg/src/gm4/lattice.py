"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding Python ints (or ``Fraction`` for the
rational helpers), so every computation is arbitrary precision. A
:class:`Lattice` is a subgroup of ``Z^n`` stored by the row-style Hermite
normal form of its generators, which makes lattice equality a plain
comparison of bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import NotASubgroup, NotUnimodular

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]

INFINITE = math.inf


# ---------------------------------------------------------------------------
# plain integer matrices


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    if not m:
        return ()
    return tuple(zip(*m))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rat_inverse(m: Sequence[Sequence]) -> RatMatrix:
    """Inverse over the rationals; raises ``ZeroDivisionError`` when singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def unimodular_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +1 or -1."""
    d = det(m)
    if abs(d) != 1:
        raise NotUnimodular(f"determinant {d} is not a unit")
    return tuple(tuple(int(x) for x in row) for row in rat_inverse(m))


def is_signed_permutation(m: Sequence[Sequence[int]]) -> bool:
    """Exactly one entry of absolute value 1 in every row and column, zeros elsewhere."""
    n = len(m)
    for row in m:
        if sorted(abs(x) for x in row) != [0] * (n - 1) + [1]:
            return False
    for col in transpose(m):
        if sorted(abs(x) for x in col) != [0] * (n - 1) + [1]:
            return False
    return True


def content(v: Iterable[int]) -> int:
    """gcd of the absolute values of the entries; 0 only for the zero vector."""
    return reduce(math.gcd, (abs(int(x)) for x in v), 0)


def primitive_completion(p: Sequence[int]) -> IntVector:
    """An integer vector ``x`` with ``p[0]*x[1] - p[1]*x[0] == 1`` for primitive ``p`` in Z^2."""
    g, s, t = _xgcd(p[0], p[1])
    if g != 1:
        raise ValueError(f"{tuple(p)} is not primitive")
    # s*p0 + t*p1 = 1  =>  det([p, (-t, s)]) = 1
    return (-t, s)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# echelon machinery


def _row_echelon(rows: Sequence[Sequence[int]], limit: int) -> tuple[list[list[int]], list[int]]:
    """Integer row echelon form using unimodular row operations only.

    Pivoting is restricted to the first ``limit`` columns. Returns the
    transformed rows and the pivot column of each leading row; rows after
    the pivot rows vanish on the first ``limit`` columns.
    """
    a = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r >= len(a):
            break
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(a[k][c]))
            a[r], a[i] = a[i], a[r]
            clean = True
            for k in range(r + 1, len(a)):
                if a[k][c]:
                    q = a[k][c] // a[r][c]
                    a[k] = [x - q * y for x, y in zip(a[k], a[r])]
                    if a[k][c]:
                        clean = False
            if clean:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            pivots.append(c)
            r += 1
    return a, pivots


def _hnf_rows(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    a, pivots = _row_echelon(rows, n)
    a = a[: len(pivots)]
    for r, c in enumerate(pivots):
        for k in range(r):
            q = a[k][c] // a[r][c]
            if q:
                a[k] = [x - q * y for x, y in zip(a[k], a[r])]
    return tuple(tuple(row) for row in a)


def integer_kernel(m: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Basis (in HNF) of ``{x in Z^n : m x = 0}``."""
    rows_m = len(m)
    aug = [tuple(m[i][j] for i in range(rows_m)) + tuple(int(j == k) for k in range(n))
           for j in range(n)]
    a, pivots = _row_echelon(aug, rows_m)
    kernel = [row[rows_m:] for row in a[len(pivots):]]
    return _hnf_rows(kernel, n)


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Subgroup of ``Z^ambient_rank`` held in canonical row Hermite normal form.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``,
    so two instances are equal exactly when they describe the same subgroup.
    Build instances with :func:`hnf` rather than directly.
    """

    ambient_rank: int
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.basis)

    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def coordinates(self, v: Sequence[int]) -> IntVector | None:
        """Integer coordinates of ``v`` in the basis, or ``None`` if ``v`` is not a member."""
        if len(v) != self.ambient_rank:
            raise ValueError("dimension mismatch")
        rest = list(v)
        coords = []
        for row, c in zip(self.basis, self.pivots()):
            q, rem = divmod(rest[c], row[c])
            if rem:
                return None
            coords.append(q)
            if q:
                rest = [x - q * y for x, y in zip(rest, row)]
        if any(rest):
            return None
        return tuple(coords)

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def generator(self) -> IntVector:
        """The canonical generator of a rank-1 lattice."""
        if self.rank != 1:
            raise ValueError(f"lattice has rank {self.rank}, not 1")
        return self.basis[0]

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.basis]


def hnf(generators: Iterable[Sequence[int]], ambient_rank: int | None = None) -> Lattice:
    """Lattice generated by the rows of ``generators``."""
    rows = [tuple(int(x) for x in g) for g in generators]
    if ambient_rank is None:
        if not rows:
            raise ValueError("ambient_rank is required for an empty generator list")
        ambient_rank = len(rows[0])
    if any(len(r) != ambient_rank for r in rows):
        raise ValueError("generator length differs from ambient_rank")
    return Lattice(ambient_rank, _hnf_rows(rows, ambient_rank))


def full_lattice(n: int) -> Lattice:
    return Lattice(n, identity(n))


def zero_lattice(n: int) -> Lattice:
    return Lattice(n, ())


def saturate(l: Lattice) -> Lattice:
    """Largest subgroup of the same rank containing ``l`` (its rational span meets Z^n)."""
    n = l.ambient_rank
    normals = integer_kernel(l.basis, n)
    return Lattice(n, integer_kernel(normals, n)) if normals else full_lattice(n)


def is_saturated(l: Lattice) -> bool:
    return saturate(l) == l


def join(a: Lattice, b: Lattice) -> Lattice:
    """Smallest subgroup containing both."""
    _same_ambient(a, b)
    return hnf(a.basis + b.basis, a.ambient_rank)


def intersect(a: Lattice, b: Lattice) -> Lattice:
    """Exact intersection of two subgroups."""
    _same_ambient(a, b)
    n = a.ambient_rank
    if a.rank == 0 or b.rank == 0:
        return zero_lattice(n)
    stacked = a.basis + b.basis
    # relations s*A + t*B = 0 are the left kernel of the stacked basis
    relations = integer_kernel(transpose(stacked), len(stacked))
    points = [tuple(sum(s * x for s, x in zip(rel[: a.rank], col)) for col in transpose(a.basis))
              for rel in relations]
    out = hnf(points, n)
    if is_saturated(a) and is_saturated(b):
        assert is_saturated(out), "intersection of saturated lattices must be saturated"
    return out


def index(sub: Lattice, sup: Lattice) -> int | float:
    """Subgroup index ``(sup : sub)``; ``INFINITE`` when the ranks differ."""
    _same_ambient(sub, sup)
    coords = []
    for v in sub.basis:
        c = sup.coordinates(v)
        if c is None:
            raise NotASubgroup(f"{v} is not in the larger lattice")
        coords.append(c)
    if sub.rank != sup.rank:
        return INFINITE
    return abs(det(coords))


def _same_ambient(a: Lattice, b: Lattice) -> None:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError(f"ambient ranks differ: {a.ambient_rank} vs {b.ambient_rank}")


# ---------------------------------------------------------------------------
# rational linear algebra


def as_rational(rows: Iterable[Iterable]) -> RatMatrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _rref(m: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in m]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rat_rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(_rref(m, len(m[0]))[1])


def rat_kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the rational null space ``{v : m v = 0}``; empty iff ``m`` is injective."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    a, pivots = _rref(m, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(tuple(v))
    return basis
