"""Root data of split reductive groups, Weyl group actions and the invariant
symmetric form on the cocharacter lattice.

Conventions: roots are integer vectors in a basis of the character lattice X,
coroots integer vectors in the dual basis of the cocharacter lattice Y, so
the pairing <x, y> is the dot product.  For simply-connected data X has the
basis of fundamental weights and Y the basis of simple coroots; adjoint data
swap the roles (simple roots / fundamental coweights).

Cartan matrices use ``A[i][j] = <alpha_i, alpha_j^vee>`` and Bourbaki
labelling of the nodes.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import intlattice as il

Vec = tuple[int, ...]

SIMPLY_CONNECTED = "simply-connected"
ADJOINT = "adjoint"
ISOGENIES = (SIMPLY_CONNECTED, ADJOINT)

ROOT_COUNTS = {
    "A": lambda r: r * (r + 1),
    "B": lambda r: 2 * r * r,
    "C": lambda r: 2 * r * r,
    "D": lambda r: 2 * r * (r - 1),
    "E": lambda r: {6: 72, 7: 126, 8: 240}[r],
    "F": lambda r: 48,
    "G": lambda r: 12,
}


class OrbitOverflow(RuntimeError):
    """Raised when a Weyl orbit exceeds the enumeration cap."""


def check_cartan_type(family: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }.get(family)
    if ok is None:
        raise ValueError(f"unknown Cartan family {family!r}; expected one of A-G")
    if not ok:
        raise ValueError(f"invalid Cartan type {family}{rank}")


def dynkin_edges(family: str, rank: int) -> list[tuple[int, int]]:
    """Edges of the Dynkin diagram on 0-based node indices."""
    check_cartan_type(family, rank)
    if family in "ABCF" or family == "G":
        return [(i, i + 1) for i in range(rank - 1)]
    if family == "D":
        return [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    # E: 1-3-4-5-6-7-8 with 2 attached to 4
    return [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, rank - 1)]


def cartan_matrix(family: str, rank: int) -> list[list[int]]:
    a = [[2 * int(i == j) for j in range(rank)] for i in range(rank)]
    for i, j in dynkin_edges(family, rank):
        a[i][j] = a[j][i] = -1
    r = rank - 1
    if family == "B":  # alpha_n short
        a[r - 1][r] = -2
    elif family == "C":  # alpha_n long
        a[r][r - 1] = -2
    elif family == "F":  # alpha_1, alpha_2 long
        a[1][2] = -2
    elif family == "G":  # alpha_1 short, alpha_2 long
        a[1][0] = -3
    return a


def _positive_roots(cartan: Sequence[Sequence[int]]) -> list[tuple[Vec, Vec]]:
    """Positive (root, coroot) pairs in simple-root / simple-coroot coordinates."""
    r = len(cartan)
    start = [(tuple(int(i == k) for i in range(r)),) * 2 for k in range(r)]
    seen = set(start)
    queue = deque(start)
    while queue:
        root, coroot = queue.popleft()
        for i in range(r):
            # s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
            b = sum(root[j] * cartan[j][i] for j in range(r))
            c = sum(cartan[i][j] * coroot[j] for j in range(r))
            new_root = tuple(x - b * int(j == i) for j, x in enumerate(root))
            new_co = tuple(x - c * int(j == i) for j, x in enumerate(coroot))
            if min(new_root) < 0:
                continue
            pair = (new_root, new_co)
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return sorted(seen, key=lambda p: (sum(p[0]), [-x for x in p[0]]))


@dataclass(frozen=True)
class RootDatum:
    """The quadruple (X, Phi, Y, Phi^vee) with chosen bases of X and Y.

    ``roots[k]`` and ``coroots[k]`` correspond; ``simple`` lists the indices
    of the simple roots.  ``family`` is a Cartan label (or ``"custom"``) and
    ``rank`` is the rank of the lattices.  Construction validates the datum.
    """

    family: str
    rank: int
    isogeny: str
    roots: tuple[Vec, ...]
    coroots: tuple[Vec, ...]
    simple: tuple[int, ...]
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(int(x) for x in v) for v in self.roots))
        object.__setattr__(self, "coroots", tuple(tuple(int(x) for x in v) for v in self.coroots))
        object.__setattr__(self, "simple", tuple(int(i) for i in self.simple))
        if self.validate:
            self.check()

    # -- basic structure -------------------------------------------------

    @staticmethod
    def pair(x: Sequence[int], y: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(x, y))

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple)

    @property
    def is_semisimple(self) -> bool:
        return self.semisimple_rank == self.rank

    @cached_property
    def root_index(self) -> dict[Vec, int]:
        return {v: k for k, v in enumerate(self.roots)}

    @cached_property
    def coroot_index(self) -> dict[Vec, int]:
        return {v: k for k, v in enumerate(self.coroots)}

    @cached_property
    def simple_roots(self) -> list[Vec]:
        return [self.roots[i] for i in self.simple]

    @cached_property
    def simple_coroots(self) -> list[Vec]:
        return [self.coroots[i] for i in self.simple]

    @cached_property
    def cartan(self) -> list[list[int]]:
        return [[self.pair(a, c) for c in self.simple_coroots] for a in self.simple_roots]

    @cached_property
    def root_coefficients(self) -> list[list[int]]:
        """Coordinates of every root in the basis of simple roots."""
        out = []
        for v, c in zip(self.roots, il.solve_rows_many(self.simple_roots, self.roots)):
            if c is None or any(x.denominator != 1 for x in c):
                raise ValueError(f"root {v} is not an integer combination of simple roots")
            out.append([int(x) for x in c])
        return out

    @cached_property
    def coroot_coefficients(self) -> list[list[int]]:
        out = []
        for v, c in zip(self.coroots, il.solve_rows_many(self.simple_coroots, self.coroots)):
            if c is None or any(x.denominator != 1 for x in c):
                raise ValueError(f"coroot {v} is not an integer combination of simple coroots")
            out.append([int(x) for x in c])
        return out

    @cached_property
    def positive(self) -> list[int]:
        return [k for k, c in enumerate(self.root_coefficients) if sum(c) > 0]

    @cached_property
    def components(self) -> list[list[int]]:
        """Connected components of the Dynkin diagram (positions in ``simple``)."""
        r = self.semisimple_rank
        adj = {i: [j for j in range(r) if j != i and self.cartan[i][j]] for i in range(r)}
        seen, comps = set(), []
        for s in range(r):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in adj[i]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    @cached_property
    def coroot_half_norms(self) -> list[Fraction]:
        """``(alpha_i^vee, alpha_i^vee) / 2`` for the simple coroots, normalised so
        the long roots of each component have value 1."""
        r = self.semisimple_rank
        a = self.cartan
        e: list[Fraction | None] = [None] * r
        for comp in self.components:
            e[comp[0]] = Fraction(1)
            stack = [comp[0]]
            while stack:
                i = stack.pop()
                for j in comp:
                    if e[j] is None and a[i][j]:
                        # (a_i^v, a_j^v) = A[j][i] e_j = A[i][j] e_i
                        e[j] = Fraction(a[i][j]) * e[i] / a[j][i]
                        stack.append(j)
            low = min(e[j] for j in comp)
            for j in comp:
                e[j] /= low
        return e

    @cached_property
    def coroot_gram(self) -> list[list[Fraction]]:
        """Invariant form on the simple coroots: ``A[j][i] * e_j``."""
        r = self.semisimple_rank
        e = self.coroot_half_norms
        return [[self.cartan[j][i] * e[j] for j in range(r)] for i in range(r)]

    @cached_property
    def lengths(self) -> tuple[str, ...]:
        """``"long"`` or ``"short"`` per root (every root of a simply-laced
        component counts as long)."""
        g = self.coroot_gram
        out = []
        for c in self.coroot_coefficients:
            norm = sum(c[i] * g[i][j] * c[j] for i in range(len(c)) for j in range(len(c)))
            out.append("long" if norm == 2 else "short")
        return tuple(out)

    @property
    def is_simply_laced(self) -> bool:
        return all(x == "long" for x in self.lengths)

    # -- reflections -----------------------------------------------------

    def reflect_root(self, k: int, x: Sequence[int]) -> Vec:
        """s_alpha(x) = x - <x, alpha^vee> alpha on X."""
        a, c = self.roots[k], self.coroots[k]
        p = self.pair(x, c)
        return tuple(xi - p * ai for xi, ai in zip(x, a))

    def reflect_coweight(self, k: int, y: Sequence[int]) -> Vec:
        """s_alpha(y) = y - <alpha, y> alpha^vee on Y."""
        a, c = self.roots[k], self.coroots[k]
        p = self.pair(a, y)
        return tuple(yi - p * ci for yi, ci in zip(y, c))

    def simple_reflection_matrix(self, i: int) -> list[list[int]]:
        """Matrix of the i-th simple reflection on Y, acting on column vectors."""
        k = self.simple[i]
        cols = [self.reflect_coweight(k, tuple(int(r == j) for r in range(self.rank)))
                for j in range(self.rank)]
        return il.transpose(cols)

    # -- validation ------------------------------------------------------

    def check(self) -> None:
        """Raise ValueError unless every root-datum axiom holds."""
        if self.rank <= 0:
            raise ValueError("rank must be positive")
        if len(self.roots) != len(self.coroots):
            raise ValueError("roots and coroots are not in bijection")
        if any(len(v) != self.rank for v in self.roots + self.coroots):
            raise ValueError("vector length differs from the rank")
        if len(set(self.roots)) != len(self.roots) or len(set(self.coroots)) != len(self.coroots):
            raise ValueError("duplicate roots or coroots")
        for a, c in zip(self.roots, self.coroots):
            if self.pair(a, c) != 2:
                raise ValueError(f"<alpha, alpha^vee> != 2 for alpha = {a}")
        ri, ci = self.root_index, self.coroot_index
        for k in range(len(self.roots)):
            for j, (b, bc) in enumerate(zip(self.roots, self.coroots)):
                sb = self.reflect_root(k, b)
                sbc = self.reflect_coweight(k, bc)
                if ri.get(sb) is None or ci.get(sbc) != ri[sb]:
                    raise ValueError(f"reflection in root {k} does not permute the root datum")
        if il.rank(self.simple_roots) != len(self.simple):
            raise ValueError("simple roots are linearly dependent")
        for c in self.root_coefficients:
            if not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
                raise ValueError("a root is not a positive or negative combination of simple roots")
        self.coroot_coefficients  # integrality of coroots over the simple coroots
        if self.family != "custom":
            check_cartan_type(self.family, self.semisimple_rank)
            if self.cartan != cartan_matrix(self.family, self.semisimple_rank):
                raise ValueError(f"Cartan matrix does not match type {self.family}{self.semisimple_rank}")

    # -- lattices --------------------------------------------------------

    def coroot_lattice(self) -> il.LatticeBasis:
        return il.LatticeBasis.from_rows(self.simple_coroots)

    def root_lattice(self) -> il.LatticeBasis:
        return il.LatticeBasis.from_rows(self.simple_roots)

    def classify_isogeny(self) -> str:
        if not self.is_semisimple:
            return "reductive"
        if self.coroot_lattice().covolume() == 1:
            return SIMPLY_CONNECTED
        if self.root_lattice().covolume() == 1:
            return ADJOINT
        return "intermediate"

    # -- serialisation ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "isogeny": self.isogeny,
            "roots": [list(v) for v in self.roots],
            "coroots": [list(v) for v in self.coroots],
            "simple": list(self.simple),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> RootDatum:
        return cls(d["family"], d["rank"], d["isogeny"], d["roots"], d["coroots"], d["simple"])

    @classmethod
    def from_json(cls, s: str) -> RootDatum:
        return cls.from_dict(json.loads(s))


def build_root_datum(family: str, rank: int, isogeny: str = SIMPLY_CONNECTED) -> RootDatum:
    """Root datum of the split simply-connected or adjoint group of the given type."""
    family = family.upper()
    check_cartan_type(family, rank)
    if isogeny not in ISOGENIES:
        raise ValueError(f"isogeny must be one of {ISOGENIES}, got {isogeny!r}")
    a = cartan_matrix(family, rank)
    pos = _positive_roots(a)
    if len(pos) * 2 != ROOT_COUNTS[family](rank):
        raise AssertionError("root closure produced the wrong number of roots")
    pairs = pos + [(tuple(-x for x in r), tuple(-x for x in c)) for r, c in pos]
    roots, coroots = [], []
    for r, c in pairs:
        if isogeny == SIMPLY_CONNECTED:
            # X: fundamental weights, alpha_j = sum_k A[j][k] w_k; Y: simple coroots
            roots.append(tuple(sum(r[j] * a[j][k] for j in range(rank)) for k in range(rank)))
            coroots.append(c)
        else:
            # X: simple roots; Y: fundamental coweights, alpha_j^v = sum_k A[k][j] w_k^v
            roots.append(r)
            coroots.append(tuple(sum(a[k][j] * c[j] for j in range(rank)) for k in range(rank)))
    return RootDatum(family, rank, isogeny, tuple(roots), tuple(coroots), tuple(range(rank)))


# --------------------------------------------------------------------------
# The invariant form on Y


@dataclass(frozen=True)
class SymmetricForm:
    """Integer Gram matrix of a Weyl-invariant form on the Y-basis."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if any(len(row) != len(g) for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(len(g))):
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(len(g))):
            raise ValueError("(y, y) must be even for every y")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def __call__(self, y1: Sequence[int], y2: Sequence[int]) -> int:
        g = self.gram
        return sum(y1[i] * g[i][j] * y2[j] for i in range(len(g)) for j in range(len(g)) if y1[i] and y2[j])

    def half_norm(self, y: Sequence[int]) -> int:
        return self(y, y) // 2

    def is_invariant(self, datum: RootDatum) -> bool:
        g = [list(r) for r in self.gram]
        for i in range(datum.semisimple_rank):
            w = datum.simple_reflection_matrix(i)
            if il.matmul(il.matmul(il.transpose(w), g), w) != g:
                return False
        return True


def standard_form(datum: RootDatum, central_block: int | None = 2) -> SymmetricForm:
    """The Weyl-invariant form with ``(alpha^vee, alpha^vee) = 2`` for long roots.

    On the central directions ``{y : <alpha, y> = 0 for all alpha}`` the form
    is ``central_block`` times the identity in an HNF basis of that sublattice;
    ``None`` picks the smallest positive even block that works.  Raises
    ValueError when the result is not integral and even on Y (as for most
    adjoint data, where Y is larger than the coroot lattice).
    """
    if central_block is None:
        if datum.is_semisimple:
            return standard_form(datum)
        last = None
        for block in range(2, 2 * 4 * datum.rank**2 * 64 + 1, 2):
            try:
                return standard_form(datum, block)
            except ValueError as exc:
                last = exc
        raise ValueError(f"no even central block makes the form integral: {last}")
    if central_block % 2 or central_block <= 0:
        raise ValueError("central_block must be a positive even integer")
    r = datum.rank
    cg = datum.coroot_gram
    central = il.integer_kernel(datum.simple_roots) if not datum.is_semisimple else []
    basis = [list(v) for v in datum.simple_coroots] + central
    nss = datum.semisimple_rank
    coords = []
    for k in range(r):
        e = [int(i == k) for i in range(r)]
        c = il.solve_rows(basis, e)
        if c is None:
            raise ValueError("coroots and central directions do not span Y over Q")
        coords.append(c)
    gram = []
    for a in coords:
        row = []
        for b in coords:
            val = sum(a[i] * cg[i][j] * b[j] for i in range(nss) for j in range(nss))
            val += central_block * sum(a[i] * b[i] for i in range(nss, r))
            row.append(val)
        gram.append(row)
    if any(x.denominator != 1 for row in gram for x in row):
        raise ValueError("the normalised invariant form is not integer valued on Y")
    if any(gram[i][i] % 2 for i in range(r)):
        raise ValueError("the normalised invariant form is not even on Y")
    form = SymmetricForm(tuple(tuple(int(x) for x in row) for row in gram))
    if not form.is_invariant(datum):
        raise AssertionError("standard form failed Weyl invariance")
    return form


# --------------------------------------------------------------------------
# Weyl orbits

DEFAULT_ORBIT_CAP = 10**7


def weyl_orbit(datum: RootDatum, v: Iterable[int], cap: int = DEFAULT_ORBIT_CAP) -> list[Vec]:
    """Orbit of ``v`` in Y under the simple coreflections, sorted."""
    start = tuple(int(x) for x in v)
    if len(start) != datum.rank:
        raise ValueError("vector has the wrong length")
    seen = {start}
    queue = deque([start])
    while queue:
        y = queue.popleft()
        for k in datum.simple:
            z = datum.reflect_coweight(k, y)
            if z not in seen:
                seen.add(z)
                if len(seen) > cap:
                    raise OrbitOverflow(f"Weyl orbit exceeds the cap of {cap} elements")
                queue.append(z)
    return sorted(seen)


def all_cartan_types(max_rank: int) -> list[tuple[str, int]]:
    out = []
    for fam in "ABCDEFG":
        for r in range(1, max_rank + 1):
            try:
                check_cartan_type(fam, r)
            except ValueError:
                continue
            out.append((fam, r))
    return out
