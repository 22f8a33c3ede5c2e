import random

import numpy as np
import pytest

from coxkit.catalog import catalog_entry, load_catalog
from coxkit.crysto import CrystGroup, build_affine_An
from coxkit.permgrp import PermGroup, Permutation, direct_product, tables_isomorphic
from coxkit.presentation import Presentation, invert, parse_presentation
from coxkit.profinite import (BoundMismatch, Equal, FirstDifference, compare, fingerprint,
                              format_fingerprint, parse_fingerprint, presentation_of_cryst)
from oracles import hom_oracle

Z4 = parse_presentation("gens a\nrel a^4")
V4 = parse_presentation("gens a b\nrel a^2\nrel b^2\nrel [a, b]")
D_INF = parse_presentation("gens s t\nrel s^2\nrel t^2")
A2_COXETER = parse_presentation("gens a b c\nrel a^2\nrel b^2\nrel c^2\nrel (a b)^3\nrel (b c)^3\nrel (c a)^3")


def test_z4_against_klein_four():
    f1, f2 = fingerprint(Z4, 4), fingerprint(V4, 4)
    d = compare(f1, f2)
    assert isinstance(d, FirstDifference)
    assert (d.id, d.counts1, d.counts2) == ("2.1", (2, 1), (4, 3))
    assert f1.counts("4.1") == (4, 2) and f2.counts("4.1") == (4, 0)
    assert f1.counts("4.2") == (4, 0) and f2.counts("4.2") == (16, 6)


def test_identical_presentations_are_equal():
    assert compare(fingerprint(A2_COXETER, 12), fingerprint(A2_COXETER, 12)) == Equal(12)
    assert str(Equal(12)) == "Equal up to order 12"


def test_bound_checks():
    with pytest.raises(BoundMismatch):
        compare(fingerprint(Z4, 4), fingerprint(Z4, 6))
    with pytest.raises(ValueError):
        fingerprint(Z4, 0)
    with pytest.raises(ValueError):
        fingerprint(Z4, 32)


def test_small_examples():
    fp = fingerprint(parse_presentation("gens s\nrel s^2"), 6)
    assert [(i, e) for _, i, _, e in fp.entries if e] == [("1.1", 1), ("2.1", 1)]
    triv = fingerprint(Presentation(0, ()), 12)
    assert all(h == 1 for _, _, h, _ in triv.entries)
    assert [i for _, i, _, e in triv.entries if e] == ["1.1"]
    assert fingerprint(D_INF, 8).counts("8.4") == (36, 8)
    assert fingerprint(A2_COXETER, 6).counts("6.2") == (28, 24)


def test_file_round_trip(tmp_path):
    fp = fingerprint(A2_COXETER, 10)
    path = tmp_path / "a2.fp"
    path.write_text(format_fingerprint(fp))
    assert parse_fingerprint(path.read_text()) == fp
    assert format_fingerprint(fp).splitlines()[0] == "bound 10"


@pytest.mark.parametrize("text", ["1 1.1 1 1", "bound 4\n1 1.1 1", "bound 4\nbound 5", ""])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_fingerprint(text)


# -- brute-force oracle ---------------------------------------------------------------

SMALL_TARGETS = [e for e in load_catalog() if e.order <= 12]


@pytest.mark.parametrize("pres", [Z4, V4, D_INF, A2_COXETER,
                                  parse_presentation("gens a b\nrel a^3\nrel b^2\nrel (a b)^2"),
                                  parse_presentation("gens x y\nrel x^2 y^-3")])
def test_counts_match_brute_force(pres):
    fp = fingerprint(pres, 12)
    for e in SMALL_TARGETS:
        assert fp.counts(e.id) == hom_oracle(pres, e.table), e.id


# -- Tietze moves --------------------------------------------------------------------

def tietze(pres, rng, moves=3):
    """Apply random Tietze transformations; the presented group is unchanged."""
    n, rels = pres.ngens, list(pres.relators)
    for _ in range(moves):
        kind = rng.randrange(4)
        if kind == 0 and rels:
            # add a consequence: a conjugate of a product of two relators
            r1, r2 = rng.choice(rels), rng.choice(rels)
            g = rng.choice([1, -1]) * rng.randint(1, n)
            rels.append((g,) + r1 + invert(r2) + (-g,))
        elif kind == 1:
            # new generator equal to a word in the old ones
            word = tuple(rng.choice([1, -1]) * rng.randint(1, n) for _ in range(rng.randint(1, 3)))
            n += 1
            rels.append((n,) + invert(word))
        elif kind == 2 and rels:
            # cyclically rotate and invert a relator
            i = rng.randrange(len(rels))
            r = rels[i]
            k = rng.randrange(len(r)) if r else 0
            rels[i] = invert(r[k:] + r[:k])
        else:
            rng.shuffle(rels)
    return Presentation(n, tuple(rels))


BASES = [Z4, V4, D_INF, A2_COXETER, parse_presentation("gens a b\nrel a^3\nrel b^2\nrel (a b)^2"),
         parse_presentation("gens a b\nrel a^2 b^-2")]


@pytest.mark.parametrize("seed", range(12))
def test_tietze_equivalent_presentations_are_equal(seed):
    rng = random.Random(seed)
    base = BASES[seed % len(BASES)]
    other = tietze(base, rng)
    assert compare(fingerprint(base, 12), fingerprint(other, 12)) == Equal(12)


# -- multiplicativity -----------------------------------------------------------------

def catalog_id_of(T):
    n = len(T)
    for e in load_catalog():
        if e.order == n and tables_isomorphic(e.table, T):
            return e.id
    raise LookupError


PRODUCT_PAIRS = [(a, b) for a in load_catalog() for b in load_catalog()
                 if a.order > 1 and b.order > 1 and a.order * b.order <= 31 and a.id <= b.id]


@pytest.mark.parametrize("pres", [Z4, D_INF, A2_COXETER, parse_presentation("gens a b\nrel [a, b]")])
def test_homs_multiply_over_direct_products(pres):
    fp = fingerprint(pres, 31)
    assert len(PRODUCT_PAIRS) >= 20
    for a, b in PRODUCT_PAIRS:
        G, _ = direct_product(a.group, b.group)
        gid = catalog_id_of(G.table)
        assert fp.counts(gid)[0] == fp.counts(a.id)[0] * fp.counts(b.id)[0], (a.id, b.id)


# -- crystallographic presentations ---------------------------------------------------------

def test_presentation_of_cryst_relators_hold():
    M = build_affine_An(2)
    G = M.group
    P = presentation_of_cryst(G)
    gens = [G.translation(v) for v in np.eye(G.rank, dtype=int)] + [G.point(g) for g in G.G0.gens]
    for r in P.relators:
        val = G.identity()
        for x in r:
            e = gens[abs(x) - 1]
            val = G.mul(val, e if x > 0 else G.inverse(e))
        assert G.is_identity(val)


def test_presentation_of_cryst_matches_known_groups():
    # Z x| C2 acting by -1 is the infinite dihedral group
    zc2 = CrystGroup(PermGroup([Permutation.parse("(1 2)", 2)], 2), [[[-1]]])
    assert compare(fingerprint(presentation_of_cryst(zc2), 12), fingerprint(D_INF, 12)) == Equal(12)
    # Z^2 x| S3 on the root lattice is the affine Weyl group A~2
    a2 = presentation_of_cryst(build_affine_An(2).group)
    assert compare(fingerprint(a2, 16), fingerprint(A2_COXETER, 16)) == Equal(16)
    # trivial point group: free abelian of rank 2
    z2 = CrystGroup(PermGroup([], 1), [], rank=2)
    assert compare(fingerprint(presentation_of_cryst(z2), 16),
                   fingerprint(parse_presentation("gens a b\nrel [a, b]"), 16)) == Equal(16)


def test_distinct_groups_differ():
    d333 = A2_COXETER
    assert isinstance(compare(fingerprint(d333, 12), fingerprint(D_INF, 12)), FirstDifference)
    swap = CrystGroup(PermGroup([Permutation.parse("(1 2)", 2)], 2), [[[0, 1], [1, 0]]])
    neg = CrystGroup(PermGroup([Permutation.parse("(1 2)", 2)], 2), [[[-1, 0], [0, -1]]])
    assert isinstance(compare(fingerprint(presentation_of_cryst(swap), 16),
                              fingerprint(presentation_of_cryst(neg), 16)), FirstDifference)
