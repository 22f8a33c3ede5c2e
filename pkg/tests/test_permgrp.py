import pytest
from hypothesis import given, settings, strategies as st

from coxkit.permgrp import (BoundExceeded, NotInGroup, PermGroup, Permutation, are_conjugate_subgroups,
                            center, centralizer_element, closure, cycle_type, derive_presentation,
                            direct_product, eval_word, group_of_presentation, hom_count, homomorphisms,
                            is_isomorphic_small, subgroup_class_words, subgroup_classes, subgroups)
from coxkit.presentation import Presentation, parse_presentation
from coxkit.todd_coxeter import subgroup_index
from oracles import hom_oracle


def P(text, degree=None):
    return Permutation.parse(text, degree)


def sym(n):
    return PermGroup([P("(1 2)", n), Permutation.from_cycles([list(range(1, n + 1))], n)], n)


def alt(n):
    return PermGroup([Permutation.from_cycles([[1, 2, i]], n) for i in range(3, n + 1)], n)


def dihedral(n):
    return PermGroup([Permutation.from_cycles([list(range(1, n + 1))], n),
                      Permutation.from_cycles([[i, n + 1 - i] for i in range(1, n // 2 + 1)], n)], n)


def closure_oracle(gens):
    """Plain set-based closure under right multiplication by generators."""
    ident = Permutation.identity(gens[0].degree)
    seen = {ident}
    todo = [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


perms = st.integers(1, 6).flatmap(lambda d: st.permutations(range(d)).map(lambda p: Permutation(tuple(p))))


# -- permutations ------------------------------------------------------------------

def test_parse_and_compose():
    a, b = P("(1 2)", 3), P("(2 3)", 3)
    # (a b)(i) = a(b(i)), points 1-based
    assert (a * b)(1) == 2 and (a * b)(3) == 1
    assert str(a * b) == "(1 2 3)"
    assert P("()", 4).is_identity()


@given(perms, st.data())
def test_permutation_group_axioms(p, data):
    d = p.degree
    q = data.draw(st.permutations(range(d)).map(lambda x: Permutation(tuple(x))))
    assert (p * q).inverse() == q.inverse() * p.inverse()
    assert (p * p.inverse()).is_identity()
    assert (p ** p.order()).is_identity()
    assert sum(cycle_type(p)) == d
    assert cycle_type(p.conj(q)) == cycle_type(p)


def test_cycle_type_examples():
    assert cycle_type(P("(1 2)(3 4 5)", 6)) == [3, 2, 1]
    assert cycle_type(P("()", 3)) == [1, 1, 1]


# -- closure ---------------------------------------------------------------------

@pytest.mark.parametrize("G,order", [(sym(3), 6), (sym(4), 24), (sym(5), 120), (alt(4), 12),
                                     (alt(5), 60), (dihedral(8), 16)])
def test_orders(G, order):
    assert G.order() == order


@pytest.mark.parametrize("gens", [
    ["(1 2 3)", "(4 5)"], ["(1 2)(3 4)", "(1 3)(2 4)"], ["(1 2 3 4 5 6)", "(1 2)"], ["(1 5 3)(2 4)"]])
def test_closure_matches_oracle(gens):
    gs = [P(g, 6) for g in gens]
    G = closure(gs)
    assert set(G.elements()) == closure_oracle(gs)
    for i in range(G.order()):
        w = [s + 1 for s in G.word_of(i)]
        assert (eval_word(w, G.gens) if w else G.identity()) == G.element(i)


def test_bound_exceeded():
    with pytest.raises(BoundExceeded):
        PermGroup(sym(6).gens, 6, bound=100).order()


def test_center_and_centralizer():
    assert center(sym(4)).order() == 1
    assert center(dihedral(8)).order() == 2
    Q8 = PermGroup([P("(1 2 3 4)(5 6 7 8)"), P("(1 5 3 7)(2 8 4 6)")], 8)
    assert Q8.order() == 8 and center(Q8).order() == 2
    assert centralizer_element(sym(4), P("(1 2)", 4)).order() == 4
    assert centralizer_element(sym(5), P("(1 2 3)", 5)).order() == 6
    with pytest.raises(NotInGroup):
        centralizer_element(alt(4), P("(1 2)", 4))


def test_centralizer_in_direct_product_is_product_of_centralizers():
    G, offs = direct_product(sym(3), dihedral(4))
    g = P("(1 2)", 3).shift(offs[0], G.degree) * P("(1 2 3 4)", 4).shift(offs[1], G.degree)
    assert G.order() == 48
    assert centralizer_element(G, g).order() == 2 * 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 23))
def test_centralizer_matches_oracle(i):
    G = sym(4)
    g = G.element(i)
    expected = sum(1 for h in G.elements() if h * g == g * h)
    assert centralizer_element(G, g).order() == expected


def test_conjugate_subgroups():
    S4 = sym(4)
    deg = 4
    assert are_conjugate_subgroups(S4, PermGroup([P("(1 2)", deg)], deg), PermGroup([P("(3 4)", deg)], deg))
    assert not are_conjugate_subgroups(S4, PermGroup([P("(1 2)", deg)], deg),
                                       PermGroup([P("(1 2)(3 4)", deg)], deg))
    V = PermGroup([P("(1 2)(3 4)", deg), P("(1 3)(2 4)", deg)], deg)
    W = PermGroup([P("(1 2)", deg), P("(3 4)", deg)], deg)
    assert not are_conjugate_subgroups(S4, V, W)


@pytest.mark.parametrize("G,total,classes", [(sym(4), 30, 11), (alt(4), 10, 5), (dihedral(4), 10, 8),
                                             (sym(3), 6, 4)])
def test_subgroup_counts(G, total, classes):
    assert len(subgroups(G)) == total
    assert len(subgroup_classes(G)) == classes


def test_subgroup_class_words_evaluate_to_subgroups():
    G = sym(4)
    for H, words in zip(subgroup_classes(G), subgroup_class_words(G)):
        elems = {eval_word(w, G.gens) or G.identity() for w in words}
        assert elems == {G.element(i) for i in H}


# -- homomorphisms -----------------------------------------------------------------

S3_PRES = parse_presentation("gens s t\nrel s^2\nrel t^2\nrel (s t)^3")


@pytest.mark.parametrize("pres,target,expected", [
    (S3_PRES, sym(3), (10, 6)),
    (parse_presentation("gens a\nrel a^4"), PermGroup([P("(1 2 3 4)")], 4), (4, 2)),
    (parse_presentation("gens a b\nrel a b a^-1 b^-1"), sym(3), (18, 0)),
    (Presentation(0, ()), sym(3), (1, 0)),
])
def test_hom_count_examples(pres, target, expected):
    assert hom_count(pres, target) == expected


@pytest.mark.parametrize("pres", [S3_PRES, parse_presentation("gens a b\nrel a^2\nrel b^3"),
                                  parse_presentation("gens a b\nrel [a, b]"),
                                  parse_presentation("gens a b c\nrel a^2\nrel b^2\nrel c^2\nrel (a b)^2")])
@pytest.mark.parametrize("target", [sym(3), dihedral(4), alt(4), PermGroup([P("(1 2 3 4 5)")], 5)])
def test_hom_count_matches_brute_force(pres, target):
    assert hom_count(pres, target) == hom_oracle(pres, target.table)


def test_homomorphisms_are_relator_respecting():
    T = sym(3).table
    hs = homomorphisms(S3_PRES, T)
    assert len(hs) == 10
    for s, t in hs:
        assert T[s][s] == 0 and T[t][t] == 0
        st_ = T[s][t]
        assert T[T[st_][st_]][st_] == 0


def test_isomorphism():
    C4 = PermGroup([P("(1 2 3 4)")], 4)
    V4 = PermGroup([P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)], 4)
    assert not is_isomorphic_small(C4, V4)
    assert is_isomorphic_small(sym(3), dihedral(3))
    assert is_isomorphic_small(PermGroup([P("(1 2)", 5), P("(3 4 5)", 5)], 5), PermGroup([P("(1 2 3 4 5 6)")], 6))
    assert not is_isomorphic_small(sym(4), PermGroup([P("(1 2)", 5), P("(2 3 4 5)", 5)], 5).subgroup(
        [P("(1 2)", 5), P("(3 4 5)", 5), P("(4 5)", 5)]))


@pytest.mark.parametrize("G", [sym(3), sym(4), alt(4), dihedral(5), alt(5)])
def test_derived_presentation_defines_the_group(G):
    pres = derive_presentation(G)
    assert subgroup_index(pres) == G.order()
    for r in pres.relators:
        assert eval_word(r, G.gens).is_identity()


def test_group_of_presentation_round_trip():
    G = group_of_presentation(S3_PRES)
    assert G.order() == 6 and is_isomorphic_small(G, sym(3))
    assert hom_count(S3_PRES, G) == (10, 6)
