import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metaplectic.covertorus import CoverTorusModel, torus_center
from metaplectic.genchar import (DynkinDiagram, DynkinSubset, GenuineCharacter, TSharpElement,
                                 TSharpGroup, admissible_subsets, admissible_subsets_f2,
                                 character_homomorphism_check, check_gamma_star_relation,
                                 gamma_star, gl_pullback, gl_torus_coordinates, h_subset,
                                 invariant_genuine_characters,
                                 is_admissible, rank_one_model, reflect_h, structure_signs,
                                 tsharp_embed, weyl_invariance_check)
from metaplectic.rootdatum import build_root_datum, standard_form
from metaplectic.symbols import SQUARE_CLASSES, LocalFieldModel, gamma_solutions

ADE = ([("A", r) for r in range(2, 10)] + [("D", r) for r in range(4, 9)]
       + [("E", 6), ("E", 7), ("E", 8)])
EXPECTED_NONEMPTY = {("A", r): r % 2 for r in range(2, 10)}
EXPECTED_NONEMPTY.update({("D", r): 3 if r % 2 == 0 else 1 for r in range(4, 9)})
EXPECTED_NONEMPTY.update({("E", 6): 0, ("E", 7): 1, ("E", 8): 0})


def brute_force(diagram):
    out = []
    for bits in range(1 << diagram.size):
        members = {i for i in range(diagram.size) if bits >> i & 1}
        if any(diagram.adjacent(i, j) for i in members for j in members if i < j):
            continue
        if all(sum(diagram.adjacent(i, j) for j in members) % 2 == 0
               for i in range(diagram.size) if i not in members):
            out.append(frozenset(members))
    return set(out)


def model2(family, rank, q=7):
    d = build_root_datum(family, rank)
    return CoverTorusModel(d, standard_form(d), LocalFieldModel(q, 2))


# -- Dynkin subsets ---------------------------------------------------------

@pytest.mark.parametrize("family, rank", ADE)
def test_nonempty_counts(family, rank):
    subs = admissible_subsets(DynkinDiagram.of_type(family, rank))
    assert sum(1 for s in subs if len(s)) == EXPECTED_NONEMPTY[(family, rank)]
    assert any(len(s) == 0 for s in subs)


@pytest.mark.parametrize("family, rank", ADE + [("B", 3), ("C", 4), ("F", 4), ("G", 2)])
def test_solver_agrees_with_brute_force_and_f2(family, rank):
    diagram = DynkinDiagram.of_type(family, rank)
    found = {s.members for s in admissible_subsets(diagram)}
    assert found == brute_force(diagram)
    assert set(admissible_subsets_f2(diagram)) == found


def test_named_witnesses():
    d4 = {tuple(s.labels) for s in admissible_subsets(DynkinDiagram.of_type("D", 4)) if len(s)}
    assert d4 == {(1, 3), (1, 4), (3, 4)}
    a3 = [s.labels for s in admissible_subsets(DynkinDiagram.of_type("A", 3)) if len(s)]
    assert a3 == [[1, 3]]
    a5 = [s.labels for s in admissible_subsets(DynkinDiagram.of_type("A", 5)) if len(s)]
    assert a5 == [[1, 3, 5]]
    e7 = [s.labels for s in admissible_subsets(DynkinDiagram.of_type("E", 7)) if len(s)]
    assert e7 == [[2, 5, 7]]


@st.composite
def graphs(draw):
    size = draw(st.integers(1, 9))
    edges = draw(st.sets(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1))
                         .filter(lambda e: e[0] < e[1])))
    return DynkinDiagram(size, tuple(sorted(edges)), "graph")


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_solver_on_arbitrary_graphs(diagram):
    found = {s.members for s in admissible_subsets(diagram)}
    assert found == brute_force(diagram) == set(admissible_subsets_f2(diagram))
    assert all(is_admissible(diagram, s) for s in found)


def test_solver_cap():
    big = DynkinDiagram(25, tuple((i, i + 1) for i in range(24)), "path")
    with pytest.raises(ValueError):
        admissible_subsets(big)


def test_subset_rejects_bad_members():
    diagram = DynkinDiagram.of_type("A", 3)
    with pytest.raises(ValueError):
        DynkinSubset(diagram, frozenset({0, 1}))
    with pytest.raises(ValueError):
        DynkinSubset(diagram, frozenset({0}))


# -- gamma-star -------------------------------------------------------------

D4_S34 = next(s for s in admissible_subsets(DynkinDiagram.of_type("D", 4)) if s.labels == [3, 4])


@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_gamma_star_values(q):
    for g in gamma_solutions(q):
        assert gamma_star(D4_S34, g, -1, (0, 0)) == 2  # -1
        for t in SQUARE_CLASSES:
            # |S| even: values land in {+eps, -eps}
            assert gamma_star(D4_S34, g, 1, t) % 2 == 0
            assert gamma_star(D4_S34, g, -1, t) == (gamma_star(D4_S34, g, 1, t) + 2) % 4


def test_d4_uniformizer_example():
    for g in gamma_solutions(7):
        assert gamma_star(D4_S34, g, 1, (1, 0)) == 2   # -eps with eps = 1
        assert gamma_star(D4_S34, g, -1, (1, 0)) == 0  # -eps with eps = -1


def test_even_subset_value_independent_of_gamma():
    for q in (5, 7, 13):
        tables = {tuple(gamma_star(D4_S34, g, 1, t) for t in SQUARE_CLASSES) for g in gamma_solutions(q)}
        assert len(tables) == 1


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
@pytest.mark.parametrize("family, rank", [("A", 3), ("A", 5), ("D", 4), ("D", 5), ("E", 7)])
def test_gamma_star_relation(q, family, rank):
    for s in admissible_subsets(DynkinDiagram.of_type(family, rank)):
        if len(s):
            for g in gamma_solutions(q):
                assert check_gamma_star_relation(s, g, q).ok


def test_gamma_star_rejects_bad_sign():
    with pytest.raises(ValueError):
        gamma_star(D4_S34, gamma_solutions(7)[0], 2, (0, 0))


@pytest.mark.parametrize("q", [5, 7])
def test_character_homomorphism_in_model(q):
    m = model2("A", 3, q)
    s = admissible_subsets(DynkinDiagram.of_type("A", 3))[-1]
    for g in gamma_solutions(q):
        rep = character_homomorphism_check(GenuineCharacter(s, g, q), m)
        assert rep.ok, rep.first_counterexample()


def test_character_flags_are_metadata():
    c = GenuineCharacter(None, None, 7, trivial_on_rational_points=True)
    assert c.to_dict()["trivial_on_rational_points"] is True
    assert c(-1) == 2 and c(1) == 0
    with pytest.raises(ValueError):
        c(1, (1, 0))


# -- Weyl invariance --------------------------------------------------------

@pytest.mark.parametrize("family, rank", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5),
                                          ("D", 4), ("D", 5), ("D", 6), ("E", 6)])
@pytest.mark.parametrize("q", [5, 7])
def test_weyl_invariance_rank_le_6(family, rank, q):
    m = model2(family, rank, q)
    rep = weyl_invariance_check(None, m, structure_signs(m))
    assert rep.ok, rep.first_counterexample()
    assert rep.clause("reflections_fix_generators").checked > 0


def test_reflection_inverts_own_h():
    m = model2("A", 3)
    signs = structure_signs(m)
    for t in m.field.classes():
        img = reflect_h(m, 0, 0, t, signs)
        # h(t^-1) and h(t) agree modulo squares; with n = 2 they are equal
        assert img == m.h_simple(0, t)


def test_nonadjacent_reflection_is_trivial():
    m = model2("A", 3)
    signs = structure_signs(m)
    for t in m.field.classes():
        assert reflect_h(m, 0, 2, t, signs) == m.h_simple(2, t)


def test_weyl_check_requires_signs():
    m = model2("A", 3)
    with pytest.raises(ValueError):
        weyl_invariance_check(None, m, None)
    signs = dict(structure_signs(m))
    signs.pop(next(iter(signs)))
    with pytest.raises(ValueError):
        weyl_invariance_check(None, m, signs)
    bad = {k: 1 for k in structure_signs(m)}
    with pytest.raises(ValueError):
        weyl_invariance_check(None, m, bad)


def test_weyl_check_rejects_wrong_degree_and_type():
    d = build_root_datum("A", 2)
    with pytest.raises(ValueError):
        weyl_invariance_check(None, CoverTorusModel(d, standard_form(d), LocalFieldModel(7, 3)), {})
    b = build_root_datum("B", 2)
    with pytest.raises(ValueError):
        weyl_invariance_check(None, CoverTorusModel(b, standard_form(b), LocalFieldModel(7, 2)), {})


def test_h_subset_is_central():
    m = model2("D", 4)
    for s in admissible_subsets(DynkinDiagram.of_type("D", 4)):
        for t in m.field.classes():
            z = h_subset(m, s, t)
            assert all(m.commutes(z, g) for g in m.generators())


# -- T_sharp ----------------------------------------------------------------

VALID_TSHARP = [(7, 1), (7, 2), (7, 3), (7, 6), (13, 2), (13, 3), (13, 4), (13, 6), (13, 12), (5, 4)]


@pytest.mark.parametrize("q, n", VALID_TSHARP)
def test_tsharp_embedding(q, n):
    g, m, rep = tsharp_embed(n, LocalFieldModel(q, n))
    assert rep.ok, rep.first_counterexample()
    assert rep.clause("homomorphism").checked == (4 * n) ** 2
    assert set(rep.data) >= {"order", "m", "kernel_order"}
    assert rep.data["m"] == (n if n % 2 else n // 2)


@pytest.mark.parametrize("q, n", [(7, 6), (13, 6), (13, 2)])
def test_tsharp_twisted_law(q, n):
    g = TSharpGroup(n, LocalFieldModel(q, n))
    assert g.twisted
    pi = TSharpElement((1, 0), 0)
    # (pi, 1)^2 = (1, (pi, pi)_2)
    sq = g.mul(pi, pi)
    expected = 0 if (q - 1) // 2 % 2 == 0 else n // 2
    assert sq == TSharpElement((0, 0), expected)


def test_tsharp_direct_product_law():
    g = TSharpGroup(3, LocalFieldModel(7, 3))
    assert not g.twisted
    for a, b in itertools.product(g.elements(), repeat=2):
        assert g.mul(a, b) == g.mul(b, a)
        assert g.mul(a, b).zeta == (a.zeta + b.zeta) % 3


def test_tsharp_image_is_center():
    g, m, rep = tsharp_embed(3, LocalFieldModel(7, 3))
    assert rep.data["center_order"] == len(torus_center(m))


@pytest.mark.parametrize("n", [4, 5, 0, -2])
def test_tsharp_rejects_n_not_dividing_q_minus_1(n):
    with pytest.raises(ValueError):
        tsharp_embed(n, LocalFieldModel(7, 1))


def test_tsharp_rejects_even_q():
    with pytest.raises(ValueError):
        tsharp_embed(1, LocalFieldModel(8, 1))


def test_rank_one_model_shape():
    m = rank_one_model(13, 4)
    assert m.order == 4 * 4 * 4


# -- GL pullback ------------------------------------------------------------

@pytest.mark.parametrize("n_size", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("q", [5, 7])
def test_gl_pullback(n_size, q):
    char, rep = gl_pullback(n_size, q)
    assert rep.ok, rep.first_counterexample()
    if n_size % 2:
        assert char.size == (n_size + 1) // 2
        assert char.subset.labels == list(range(1, n_size + 1, 2))
    else:
        assert char.subset is None
        assert char.table() == {"eps=-1": 2}


def test_gl_pullback_rejects_bad_input():
    for args in [(0, 7), (2, 8), (-1, 7)]:
        with pytest.raises(ValueError):
            gl_pullback(*args)


def test_gl_torus_coordinates():
    assert gl_torus_coordinates([(1, 0), (0, 1), (1, 1)], 2) == [(1, 0), (1, 1), (0, 0)]


# -- invariant genuine characters in rank one -------------------------------

RANK_ONE = [(q, n) for q in (3, 5, 7, 9, 13) for n in range(1, 7) if (q - 1) % n == 0]


@pytest.mark.parametrize("q, n", RANK_ONE)
def test_invariant_characters_differ_by_quadratic(q, n):
    found, rep = invariant_genuine_characters(q, n)
    assert rep.ok, rep.first_counterexample()
    # the invariant ones form a torsor under characters of order <= 2
    assert rep.data["count"] in (1, 2, 4)


def test_invariant_character_counts():
    assert invariant_genuine_characters(7, 3)[1].data == {"center_order": 3, "count": 1}
    assert invariant_genuine_characters(7, 6)[1].data == {"center_order": 24, "count": 4}
