"""Exact integer-matrix algorithms: Smith and Hermite normal forms, kernels
modulo n, and dual lattices.

Everything here works over Python ints and :class:`fractions.Fraction`;
there is no floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

Matrix = list[list[int]]


def _as_matrix(m: Iterable[Iterable[int]]) -> Matrix:
    rows = [[int(x) for x in row] for row in m]
    if not rows or not rows[0]:
        raise ValueError("matrix must be non-empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("matrix is not rectangular")
    return rows


def identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    k = len(a)
    if any(len(row) != k for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(k):
        p = next((r for r in range(c, k) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        result *= a[c][c]
        for r in range(c + 1, k):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * result


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse over Q; raises ValueError for singular input."""
    k = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
         for i, row in enumerate(m)]
    for c in range(k):
        p = next((r for r in range(c, k) if a[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(k):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[k:] for row in a]


def rank(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    r = 0
    for c in range(len(a[0])):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, len(a)):
            f = a[i][c] / a[r][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def solve_rows(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum(c[k] * basis[k]) == v`` over Q.

    ``basis`` must be linearly independent.  Returns None when ``v`` is not in
    the rational span.
    """
    return solve_rows_many(basis, [v])[0]


def solve_rows_many(basis: Sequence[Sequence], vs: Sequence[Sequence]) -> list[list[Fraction] | None]:
    """:func:`solve_rows` for several right-hand sides with one elimination."""
    k = len(basis)
    dim = len(basis[0]) if k else (len(vs[0]) if vs else 0)
    m = len(vs)
    # augmented system: columns are basis vectors, then one column per target
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i]) for v in vs] for i in range(dim)]
    r = 0
    for c in range(k):
        p = next((i for i in range(r, dim) if a[i][c] != 0), None)
        if p is None:
            raise ValueError("basis vectors are linearly dependent")
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [x / pv for x in a[r]]
        for i in range(dim):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    out = []
    for t in range(k, k + m):
        if any(a[i][t] != 0 for i in range(r, dim)):
            out.append(None)
        else:
            out.append([a[i][t] for i in range(k)])
    return out


# --------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Iterable[Iterable[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...``.  The pivot at each stage is the entry of
    smallest nonzero absolute value in the remaining block, ties broken by
    row-major position, so the output is deterministic.
    """
    a = _as_matrix(m)
    nr, nc = len(a), len(a[0])
    u = identity(nr)
    v = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return u, a, v
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def smith_invariants(m: Iterable[Iterable[int]]) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0])))]


# --------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(rows: Iterable[Iterable[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    The result is upper triangular in echelon form with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``; zero rows are
    dropped.  Two integer bases span the same lattice iff their HNFs agree.
    """
    a = [list(r) for r in _as_matrix(rows)]
    nr, nc = len(a), len(a[0])
    r = 0
    for c in range(nc):
        if r == nr:
            break
        # gcd-combine column c of rows r.. into row r
        for i in range(r + 1, nr):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = _xgcd(x, y)
            row_r = [s * p + t * q for p, q in zip(a[r], a[i])]
            row_i = [(x // g) * q - (y // g) * p for p, q in zip(a[r], a[i])]
            a[r], a[i] = row_r, row_i
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return [row for row in a[:r]]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, rem = divmod(a, b)
        a, b = b, rem
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


# --------------------------------------------------------------------------
# Lattices with rational bases


@dataclass(frozen=True)
class LatticeBasis:
    """A lattice given by a basis of rational row vectors in Q^ambient_rank."""

    ambient_rank: int
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        vecs = tuple(tuple(Fraction(x) for x in v) for v in self.basis)
        if any(len(v) != self.ambient_rank for v in vecs):
            raise ValueError("basis vectors have the wrong length")
        if vecs and rank(vecs) != len(vecs):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", vecs)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], scale: Fraction | int = 1) -> LatticeBasis:
        vecs = [tuple(Fraction(x) * scale for x in r) for r in rows]
        return cls(len(vecs[0]), tuple(vecs))

    @classmethod
    def standard(cls, r: int) -> LatticeBasis:
        return cls.from_rows(identity(r))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    @cached_property
    def denominator(self) -> int:
        return lcm(1, *(x.denominator for v in self.basis for x in v))

    @cached_property
    def canonical(self) -> LatticeBasis:
        """Basis in Hermite normal form (after clearing the denominator)."""
        d = self.denominator
        h = hermite_normal_form([[int(x * d) for x in v] for v in self.basis])
        return LatticeBasis(self.ambient_rank, tuple(tuple(Fraction(x, d) for x in row) for row in h))

    def same_lattice(self, other: LatticeBasis) -> bool:
        return (self.ambient_rank == other.ambient_rank
                and self.canonical.basis == other.canonical.basis)

    def scaled(self, f: Fraction | int) -> LatticeBasis:
        return LatticeBasis(self.ambient_rank, tuple(tuple(x * f for x in v) for v in self.basis))

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Rational coordinates of ``v`` in this basis (None if outside the span)."""
        return solve_rows(self.basis, v)

    def contains(self, v: Sequence) -> bool:
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def contains_lattice(self, other: LatticeBasis) -> bool:
        return all(self.contains(v) for v in other.basis)

    def covolume(self) -> Fraction:
        """|det| of a full-rank basis: the index [Z^r : L] when L is integral."""
        if not self.is_full_rank:
            raise ValueError("covolume needs a full-rank lattice")
        return abs(det(self.basis))

    def to_json(self) -> list[list]:
        return [[_frac_json(x) for x in v] for v in self.basis]


def _frac_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def kernel_mod(m: Iterable[Iterable[int]], n: int) -> LatticeBasis:
    """Basis of ``{y in Z^r : m @ y == 0 (mod n)}`` in Hermite normal form.

    With ``U m V = D`` the condition reads ``D z == 0 (mod n)`` for
    ``z = V^-1 y``, so ``z_i`` ranges over ``(n / gcd(d_i, n)) Z``.
    """
    if n <= 0:
        raise ValueError("modulus n must be a positive integer")
    a = _as_matrix(m)
    r = len(a)
    if len(a[0]) != r:
        raise ValueError("kernel_mod expects a square matrix")
    _, d, v = smith_normal_form(a)
    steps = [n // gcd(d[i][i], n) for i in range(r)]
    cols = [[v[row][i] * steps[i] for row in range(r)] for i in range(r)]
    return LatticeBasis.from_rows(hermite_normal_form(cols))


def integer_kernel(m: Iterable[Iterable[int]]) -> list[list[int]]:
    """Basis (HNF rows) of ``{y in Z^c : m @ y == 0}``; empty when trivial."""
    a = _as_matrix(m)
    _, d, v = smith_normal_form(a)
    c = len(a[0])
    nonzero = sum(1 for i in range(min(len(a), c)) if d[i][i])
    cols = [[v[row][i] for row in range(c)] for i in range(nonzero, c)]
    return hermite_normal_form(cols) if cols else []


def dual_lattice(b: LatticeBasis) -> LatticeBasis:
    """``{x : <x, y> in Z for all y in b}`` under the standard dot pairing."""
    if not b.is_full_rank:
        raise ValueError("dual_lattice needs a full-rank lattice")
    inv = inverse(b.basis)
    return LatticeBasis.from_rows(transpose(inv)).canonical


def index_mod(invariants: Iterable[int], n: int) -> int:
    """Predicted index of ``kernel_mod`` from the Smith invariants."""
    out = 1
    for d in invariants:
        out *= n // gcd(d, n)
    return out
