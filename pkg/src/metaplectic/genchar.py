"""Weyl-invariant genuine characters of the center of a double-cover torus.

Pieces: the Dynkin-subset solver over F_2, the gamma-star characters built
from a subset, the Weyl-invariance check in the n = 2 torus model, the
auxiliary group T_sharp presenting the rank-one center, and the pullback to
the GL torus.  Values in mu_4 are exponents of i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .covertorus import CoverTorusElement, CoverTorusModel, torus_center, verify_steinberg
from .reports import VerificationReport
from .rootdatum import build_root_datum, dynkin_edges, standard_form
from .symbols import (SQUARE_CLASSES, ClassPair, GammaFunction, LocalFieldModel,
                      gamma_solutions, hilbert2_exponent4, quadratic_model, symbol_exponent)

MAX_NODES = 24


# --------------------------------------------------------------------------
# Dynkin subsets


@dataclass(frozen=True)
class DynkinDiagram:
    """Undirected diagram on nodes ``0..size-1`` (bond multiplicities ignored)."""

    size: int
    edges: frozenset[tuple[int, int]]
    label: str = "custom"

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if not (0 <= a < self.size and 0 <= b < self.size) or a == b:
                raise ValueError(f"bad edge {(a, b)}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def of_type(cls, family: str, rank: int) -> DynkinDiagram:
        return cls(rank, frozenset(dynkin_edges(family, rank)), f"{family}{rank}")

    def neighbours(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


@dataclass(frozen=True)
class DynkinSubset:
    diagram: DynkinDiagram
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not is_admissible(self.diagram, self.members):
            raise ValueError(f"{sorted(self.labels)} is not an admissible subset of {self.diagram.label}")

    @property
    def labels(self) -> list[int]:
        """Members as 1-based node labels."""
        return sorted(i + 1 for i in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {"diagram": self.diagram.label, "members": self.labels}


def is_admissible(diagram: DynkinDiagram, members) -> bool:
    """No two members adjacent; every non-member adjacent to an even number of members."""
    s = set(members)
    for i in range(diagram.size):
        k = sum(1 for j in diagram.neighbours(i) if j in s)
        if i in s and k:
            return False
        if i not in s and k % 2:
            return False
    return True


def admissible_subsets(diagram: DynkinDiagram) -> list[DynkinSubset]:
    """All admissible subsets including the empty one.

    Exhaustive: every independent set is enumerated by backtracking and the
    parity condition checked on each.
    """
    if diagram.size > MAX_NODES:
        raise ValueError(f"diagram has {diagram.size} nodes; the solver is capped at {MAX_NODES}")
    nbrs = [set(diagram.neighbours(i)) for i in range(diagram.size)]
    out: list[frozenset[int]] = []

    def walk(i: int, chosen: list[int], blocked: set[int]) -> None:
        if i == diagram.size:
            if is_admissible(diagram, chosen):
                out.append(frozenset(chosen))
            return
        walk(i + 1, chosen, blocked)
        if i not in blocked:
            walk(i + 1, chosen + [i], blocked | nbrs[i])

    walk(0, [], set())
    out.sort(key=lambda s: (len(s), sorted(s)))
    return [DynkinSubset(diagram, s) for s in out]


def _f2_kernel(rows: list[int], size: int) -> list[int]:
    """Basis (as bitmasks) of the kernel of a 0/1 matrix over F_2; rows are bitmasks."""
    pivots: dict[int, int] = {}
    for r in rows:
        for col, prow in pivots.items():
            if r >> col & 1:
                r ^= prow
        if r:
            col = r.bit_length() - 1
            for c2 in list(pivots):
                if pivots[c2] >> col & 1:
                    pivots[c2] ^= r
            pivots[col] = r
    free = [c for c in range(size) if c not in pivots]
    basis = []
    for f in free:
        v = 1 << f
        for col, prow in pivots.items():
            if prow >> f & 1:
                v |= 1 << col
        basis.append(v)
    return basis


def admissible_subsets_f2(diagram: DynkinDiagram) -> list[frozenset[int]]:
    """Same solution set via linear algebra: kernel of the adjacency matrix mod 2,
    filtered by independence.  (For an independent set the parity condition
    holds at members too, so it is linear over F_2.)"""
    rows = [sum(1 << j for j in diagram.neighbours(i)) for i in range(diagram.size)]
    basis = _f2_kernel(rows, diagram.size)
    sols = []
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        v = 0
        for c, b in zip(coeffs, basis):
            if c:
                v ^= b
        s = frozenset(i for i in range(diagram.size) if v >> i & 1)
        if all(not (a in s and b in s) for a, b in diagram.edges):
            sols.append(s)
    return sorted(sols, key=lambda s: (len(s), sorted(s)))


# --------------------------------------------------------------------------
# gamma-star


@dataclass(frozen=True)
class GenuineCharacter:
    """Genuine character of ``Z_T/T^2`` (n = 2), mu_2 acting by the identity.

    With a subset S it is ``eps * h_S(t) -> eps * gamma(t)**|S|``; without
    one it is the character ``eps -> eps`` of ``Z_T/T^2 = mu_2``.  The global
    conditions (trivial on rational points, unramified almost everywhere) are
    recorded as flags, not verified.
    """

    subset: DynkinSubset | None
    gamma: GammaFunction | None
    q: int
    trivial_on_rational_points: bool | None = None
    unramified_almost_everywhere: bool | None = None
    notes: tuple[str, ...] = ()

    @property
    def genuine(self) -> bool:
        return True

    @property
    def size(self) -> int:
        return len(self.subset) if self.subset is not None else 0

    def __call__(self, eps: int, t: ClassPair = (0, 0)) -> int:
        """Value at ``eps * h_S(t)`` as an exponent of i."""
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        base = 0 if eps == 1 else 2
        t = (t[0] % 2, t[1] % 2)
        if self.size == 0:
            if t != (0, 0):
                raise ValueError("this character is defined on mu_2 only")
            return base
        return (base + self.size * self.gamma(t)) % 4

    def table(self) -> dict[str, int]:
        tab = {"eps=-1": self(-1)}
        if self.size:
            tab["h_S(uniformizer)"] = self(1, (1, 0))
            tab["h_S(unit generator)"] = self(1, (0, 1))
        return tab

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "subset": self.subset.to_dict() if self.subset is not None else None,
            "gamma": ({f"{v},{u}": e for (v, u), e in self.gamma.values}
                      if self.gamma is not None else None),
            "table": self.table(),
            "genuine": True,
            "trivial_on_rational_points": self.trivial_on_rational_points,
            "unramified_almost_everywhere": self.unramified_almost_everywhere,
            "notes": list(self.notes),
        }


def gamma_star(subset: DynkinSubset, gamma: GammaFunction, eps: int, t: ClassPair) -> int:
    """``eps * gamma(t)**|S|`` as an exponent of i."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return ((0 if eps == 1 else 2) + len(subset) * gamma(t)) % 4


def check_gamma_star_relation(subset: DynkinSubset, gamma: GammaFunction, q: int) -> VerificationReport:
    """``g*(h_S(t)) g*(h_S(u)) = (t,u)_2^|S| g*(h_S(tu))`` for all square classes."""
    m2 = quadratic_model(q)
    rep = VerificationReport(f"gamma-star relation on {subset.diagram.label} S={subset.labels}")
    cl = rep.clause("product_relation")
    k = len(subset)
    for t in SQUARE_CLASSES:
        for u in SQUARE_CLASSES:
            lhs = (gamma_star(subset, gamma, 1, t) + gamma_star(subset, gamma, 1, u)) % 4
            rhs = (k * hilbert2_exponent4(t, u, m2)
                   + gamma_star(subset, gamma, 1, m2.mul_classes(t, u))) % 4
            cl.record(lhs == rhs, lambda: f"t={t}, u={u}")
    return rep


# --------------------------------------------------------------------------
# Weyl invariance in the n = 2 model


def _sign_class(m: CoverTorusModel, c: int) -> ClassPair:
    return (0, 0) if c == 1 else m.field.minus_one_class


def _add_roots(m: CoverTorusModel, i: int, j: int) -> int:
    d = m.datum
    a, b = d.roots[d.simple[i]], d.roots[d.simple[j]]
    return d.root_index[tuple(x + y for x, y in zip(a, b))]


def reflect_h(m: CoverTorusModel, i: int, j: int, t: ClassPair,
              signs: dict[tuple[int, int], int]) -> CoverTorusElement:
    """``w_i h_j(t) w_i^-1`` for simple positions i, j in a simply-laced datum."""
    d = m.datum
    fld = m.field
    if i == j:
        return m.h_simple(i, fld.pow_class(t, -1))
    if d.cartan[j][i] == 0:
        return m.h_simple(j, t)
    c = signs[(i, j)]
    sc = _sign_class(m, c)
    # h_{a+b}(t) rewritten through the coroot-sum relation
    hab = m.mul(m.central(m.symbol(fld.mul_classes(sc, fld.pow_class(t, -1)), t)),
                m.mul(m.h_simple(i, t), m.h_simple(j, t)))
    if hab != m.h(_add_roots(m, i, j), t):
        raise AssertionError(f"coroot-sum relation fails for ({i + 1}, {j + 1}) with sign {c}")
    return m.mul(m.central(m.symbol(t, sc)), hab)


def h_subset(m: CoverTorusModel, subset: DynkinSubset, t: ClassPair) -> CoverTorusElement:
    out = m.identity
    for k in sorted(subset.members):
        out = m.mul(out, m.h_simple(k, t))
    return out


def center_generators(m: CoverTorusModel, subsets: list[DynkinSubset]) -> list[tuple[str, CoverTorusElement, list]]:
    """Generators of ``Z_T/T^2`` in the n = 2 model: mu_2 and each ``h_S(t)``.

    Each entry is (name, element, factors) where factors lists the
    (simple position, class) pairs whose product gives the element.
    """
    gens = [("-1", m.central(1), []), ("1", m.identity, [])]
    for s in subsets:
        if not len(s):
            continue
        for t in m.field.classes():
            gens.append((f"h_{s.labels}({t})", h_subset(m, s, t), [(k, t) for k in sorted(s.members)]))
    return gens


def weyl_invariance_check(character: GenuineCharacter | None, model: CoverTorusModel,
                          signs: dict[tuple[int, int], int] | None) -> VerificationReport:
    """Every simple reflection fixes every generator class of ``Z_T/T^2``.

    ``signs`` maps ordered adjacent simple pairs (0-based) to c(a, b) = +-1
    with c(a, b) c(b, a) = -1.  With n = 2, ``T^2`` is trivial in the model so
    class equality is element equality.
    """
    if model.n != 2:
        raise ValueError("Weyl invariance is checked in the n = 2 model")
    if not model.datum.is_simply_laced:
        raise ValueError("simply-laced data only")
    if signs is None:
        raise ValueError("structure signs are required")
    d = model.datum
    r = d.semisimple_rank
    for i in range(r):
        for j in range(r):
            if i != j and d.cartan[j][i] == -1:
                if (i, j) not in signs or (j, i) not in signs:
                    raise ValueError(f"missing structure sign for pair ({i + 1}, {j + 1})")
                if signs[(i, j)] * signs[(j, i)] != -1:
                    raise ValueError(f"structure signs on ({i + 1}, {j + 1}) must multiply to -1")
    diagram = DynkinDiagram.of_type(d.family, r) if d.family != "custom" else None
    if character is not None and character.subset is not None:
        subsets = [character.subset]
    else:
        subsets = admissible_subsets(diagram)
    rep = VerificationReport(f"Weyl invariance on {d.family}{r}, q={model.field.q}")
    central = rep.clause("generators_central")
    fixed = rep.clause("reflections_fix_generators")
    gens = center_generators(model, subsets)
    torus_gens = model.generators()
    for name, z, factors in gens:
        central.record(all(model.commutes(z, g) for g in torus_gens), lambda: f"{name} is not central")
        for i in range(r):
            img = model.central(z.zeta) if not factors else model.identity
            for k, t in factors:
                img = model.mul(img, reflect_h(model, i, k, t, signs))
            fixed.record(img == z, lambda: f"w_{i + 1} moves {name} to {img}")
    rep.data["generators"] = len(gens)
    rep.data["subsets"] = [s.labels for s in subsets]
    return rep


def structure_signs(model: CoverTorusModel) -> dict[tuple[int, int], int]:
    """A sign assignment satisfying the coroot-sum relation, found by search."""
    rep = verify_steinberg(model)
    if not rep.clause("coroot_sum").ok:
        raise AssertionError(rep.first_counterexample())
    raw = rep.data.get("structure_signs", {})
    return {tuple(int(x) - 1 for x in k.split(",")): v for k, v in raw.items()}


def character_homomorphism_check(character: GenuineCharacter, model: CoverTorusModel) -> VerificationReport:
    """The character is well defined and multiplicative on the subgroup ``{eps h_S(t)}``."""
    rep = VerificationReport("character on mu_2 x h_S")
    cl = rep.clause("multiplicative")
    wd = rep.clause("well_defined")
    table: dict[CoverTorusElement, int] = {}
    classes = [t for t in model.field.classes()] if character.size else [(0, 0)]
    for eps in (1, -1):
        for t in classes:
            z = model.mul(model.central(0 if eps == 1 else 1), h_subset(model, character.subset, t)
                          if character.size else model.identity)
            val = character(eps, t)
            if z in table:
                wd.record(table[z] == val, lambda: f"two values at {z}")
            table[z] = val
    for a, va in table.items():
        for b, vb in table.items():
            ab = model.mul(a, b)
            cl.record(ab in table and table[ab] == (va + vb) % 4, lambda: f"{a} * {b}")
    return rep


# --------------------------------------------------------------------------
# T_sharp


@dataclass(frozen=True)
class TSharpElement:
    t: ClassPair  # square class
    zeta: int     # exponent in mu_n


class TSharpGroup:
    """``F^x/(F^x)^2 x mu_n``, twisted by ``(t, t')_2`` when n = 2 mod 4."""

    def __init__(self, n: int, field: LocalFieldModel):
        if field.q % 2 == 0:
            raise ValueError("T_sharp needs q odd")
        if n <= 0 or (field.q - 1) % n:
            raise ValueError(f"n = {n} does not divide q - 1 = {field.q - 1}")
        self.n = n
        self.q = field.q
        self.field = field if field.n == n else field.with_degree(n)
        self.twisted = n % 4 == 2
        self.m = n if n % 2 else n // 2

    @property
    def order(self) -> int:
        return 4 * self.n

    def elements(self) -> list[TSharpElement]:
        return [TSharpElement(t, z) for t in SQUARE_CLASSES for z in range(self.n)]

    def mul(self, a: TSharpElement, b: TSharpElement) -> TSharpElement:
        t = ((a.t[0] + b.t[0]) % 2, (a.t[1] + b.t[1]) % 2)
        z = a.zeta + b.zeta
        if self.twisted:
            z += (self.n // 2) * symbol_exponent(a.t, b.t, self.q, 2)
        return TSharpElement(t, z % self.n)


def tsharp_map(g: TSharpGroup, model: CoverTorusModel, x: TSharpElement) -> CoverTorusElement:
    """``(t, zeta) -> zeta * h(t**m)`` into the rank-one model."""
    v, u = x.t
    return model.mul(model.central(x.zeta), model.h_simple(0, (g.m * v, g.m * u)))


def rank_one_model(q: int, n: int) -> CoverTorusModel:
    d = build_root_datum("A", 1)
    return CoverTorusModel(d, standard_form(d), LocalFieldModel(q, n))


def tsharp_embed(n: int, field: LocalFieldModel) -> tuple[TSharpGroup, CoverTorusModel, VerificationReport]:
    """Build T_sharp, map it into the rank-one model and verify the map.

    Checks (exhaustive): homomorphism on all pairs; image equals the brute
    force center; the kernel is ``{(t, 1) : t**m trivial mod n-th powers}``;
    and the character ``(t, zeta) -> zeta`` (times ``gamma(t)`` when twisted)
    is multiplicative.
    """
    g = TSharpGroup(n, field)
    model = rank_one_model(field.q, n)
    rep = VerificationReport(f"T_sharp for n={n}, q={field.q}")
    els = g.elements()
    image = {x: tsharp_map(g, model, x) for x in els}
    hom = rep.clause("homomorphism")
    for a in els:
        for b in els:
            hom.record(image[g.mul(a, b)] == model.mul(image[a], image[b]), lambda: f"{a}, {b}")
    center = set(torus_center(model))
    rep.clause("image_equals_center").record(
        set(image.values()) == center,
        lambda: f"image has {len(set(image.values()))} elements, center {len(center)}")
    ker = {x for x, y in image.items() if y == model.identity}
    expected = {TSharpElement(t, 0) for t in SQUARE_CLASSES
                if (g.m * t[0]) % n == 0 and (g.m * t[1]) % n == 0}
    rep.clause("kernel").record(ker == expected, lambda: f"kernel {sorted(ker, key=str)}")
    rep.clause("injective_on_quotient").record(len(set(image.values())) * len(ker) == g.order,
                                               "image size times kernel size differs from |T_sharp|")
    chi = rep.clause("genuine_character")
    gam = gamma_solutions(field.q)[0] if g.twisted else None

    def value(x: TSharpElement) -> Fraction:
        v = Fraction(x.zeta, n)
        if gam is not None:
            v += Fraction(gam(x.t), 4)
        return v % 1

    for a in els:
        for b in els:
            chi.record(value(g.mul(a, b)) == (value(a) + value(b)) % 1, lambda: f"{a}, {b}")
    rep.data.update(order=g.order, m=g.m, twisted=g.twisted, center_order=len(center),
                    kernel_order=len(ker))
    return g, model, rep


def _element_order(m: CoverTorusModel, x: CoverTorusElement) -> int:
    k, y = 1, x
    while y != m.identity:
        y, k = m.mul(y, x), k + 1
    return k


def _characters(m: CoverTorusModel, group: list[CoverTorusElement]) -> list[dict]:
    """Every character of a finite abelian subgroup, as maps into Q/Z."""
    members = set(group)
    gens, span = [], {m.identity}
    for x in sorted(group, key=lambda e: (e.coords, e.zeta)):
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = m.mul(y, g)
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
    if span != members:
        raise ValueError("subset is not a subgroup")
    orders = [_element_order(m, g) for g in gens]
    out = []
    for ks in itertools.product(*(range(o) for o in orders)):
        chi = {m.identity: Fraction(0)}
        frontier, ok = [m.identity], True
        while frontier and ok:
            nxt = []
            for y in frontier:
                for g, k, o in zip(gens, ks, orders):
                    z, v = m.mul(y, g), (chi[y] + Fraction(k, o)) % 1
                    if z not in chi:
                        chi[z] = v
                        nxt.append(z)
                    elif chi[z] != v:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok:
            out.append(chi)
    return out


def invariant_genuine_characters(q: int, n: int) -> tuple[list[dict], VerificationReport]:
    """Weyl-invariant genuine characters of the center of the rank-one model.

    The simple reflection acts by ``zeta h(t) -> zeta h(t**-1)``.  Genuine
    means ``zeta -> zeta`` on mu_n.  The report checks that the action
    preserves the center and that any two such characters differ by a
    character of order at most 2.
    """
    m = rank_one_model(q, n)
    fld = m.field
    center = torus_center(m)

    def act(z: CoverTorusElement) -> CoverTorusElement:
        return m.mul(m.central(z.zeta), m.h_simple(0, fld.pow_class(z.coords[0], -1)))

    rep = VerificationReport(f"invariant genuine characters, rank one, n={n}, q={q}")
    cset = set(center)
    rep.clause("action_preserves_center").record(all(act(z) in cset for z in center),
                                                 "reflection moves a central element out")
    zeta = m.central(1)
    found = [chi for chi in _characters(m, center)
             if chi[zeta] == Fraction(1, n) % 1 and all(chi[act(z)] == chi[z] for z in center)]
    rep.clause("exists").record(bool(found), "no invariant genuine character")
    quad = rep.clause("ratios_quadratic")
    for a, b in itertools.combinations(found, 2):
        quad.record(all((2 * (a[z] - b[z])) % 1 == 0 for z in center), "ratio of order > 2")
    rep.data.update(center_order=len(center), count=len(found))
    return found, rep


# --------------------------------------------------------------------------
# GL pullback


def gl_torus_coordinates(entries: list[ClassPair], n: int) -> list[ClassPair]:
    """Classes ``t_k = a_1...a_k`` with ``diag(a_1..a_m, det^-1) = prod_k h_k(t_k)``."""
    out, acc = [], (0, 0)
    for a in entries:
        acc = ((acc[0] + a[0]) % n, (acc[1] + a[1]) % n)
        out.append(acc)
    return out


def gl_pullback(n_size: int, q: int, gamma: GammaFunction | None = None
                ) -> tuple[GenuineCharacter, VerificationReport]:
    """The gamma-star character of the double-cover torus of GL_{n_size}.

    The GL torus is identified with the torus of SL_{n_size+1}, type
    A_{n_size}.  When that diagram has a nonempty admissible subset
    (n_size odd, S = odd nodes) the character is ``eps * gamma(t)**|S|``
    on ``eps * h_S(t)``; otherwise ``Z_T/T^2 = mu_2`` and the character is
    ``eps -> eps``.  Invariance under the reflections s_1..s_{n_size-1}
    (the GL Weyl group) is checked at class level in the n = 2 model.
    """
    if not isinstance(n_size, int) or n_size < 1:
        raise ValueError("n_size must be a positive integer")
    if q % 2 == 0:
        raise ValueError("q must be odd")
    diagram = DynkinDiagram.of_type("A", n_size)
    nonempty = [s for s in admissible_subsets(diagram) if len(s)]
    gamma = gamma or gamma_solutions(q)[0]
    if nonempty:
        (subset,) = nonempty
        char = GenuineCharacter(subset, gamma, q, notes=(f"exponent |S| = {len(subset)}",))
    else:
        char = GenuineCharacter(None, None, q, notes=("Z_T/T^2 is mu_2",))
    d = build_root_datum("A", n_size)
    model = CoverTorusModel(d, standard_form(d), LocalFieldModel(q, 2))
    signs = structure_signs(model)
    full = weyl_invariance_check(char, model, signs)
    rep = VerificationReport(f"GL_{n_size} pullback, q={q}")
    gl = rep.clause("gl_weyl_invariance")
    gens = center_generators(model, [char.subset] if char.subset is not None else [])
    for name, z, factors in gens:
        for i in range(n_size - 1):
            img = model.central(z.zeta) if not factors else model.identity
            for k, t in factors:
                img = model.mul(img, reflect_h(model, i, k, t, signs))
            gl.record(img == z, lambda: f"s_{i + 1} moves {name}")
    rep.clauses["full_weyl_invariance"] = full.clauses["reflections_fix_generators"]
    rep.clauses["full_weyl_invariance"].name = "full_weyl_invariance"
    if char.size:
        for name, c in check_gamma_star_relation(char.subset, gamma, q).clauses.items():
            rep.clauses[name] = c
    for name, c in character_homomorphism_check(char, model).clauses.items():
        rep.clauses[name] = c
    return char, rep
