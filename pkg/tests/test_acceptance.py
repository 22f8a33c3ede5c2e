"""Acceptance criteria 1-9, each checked with exact equality.

Every test records one ``criterion N: PASS|FAIL`` line, printed in the
terminal summary. Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import itertools
import random

import pytest

from conftest import ACCEPTANCE_LINES
from coxkit.amalgam import verify_section_3_5
from coxkit.crysto import build_affine_An
from coxkit.diagram import (INF, CoxeterMatrix, TypeTag, affine_catalog, affine_family, centralizer_rank,
                            classify, is_even, parse_diagram, triangle_matrix)
from coxkit.exact import adjugate, commutant_dimension, determinant, smith_normal_form
from coxkit.logic import FiniteGroupModel, emit_chi, emit_finite_g, emit_gamma, evaluate, parse_formula, \
    render, satisfying, tag
from coxkit.catalog import catalog_entry, load_catalog
from coxkit.permgrp import center, derive_presentation, direct_product, subgroup_class_words
from coxkit.presentation import parse_presentation
from coxkit.profinite import Equal, FirstDifference, compare, fingerprint
from coxkit.titsrep import Finite, build_rep, element_order, words_equal
from coxkit.verification import verify_wlog
from oracles import hom_oracle
from test_logic import TWO_GEN, finite_g_oracle
from test_profinite import BASES, PRODUCT_PAIRS, catalog_id_of, tietze

D333 = parse_diagram("verts 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 3")


def record(n, checks):
    """checks: list of (description, ok). Records the line, then asserts."""
    failed = [d for d, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks"
    if failed:
        detail += "; failed: " + "; ".join(failed)
    line = f"criterion {n}: {status} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def test_criterion_1_classification():
    checks = [
        ("Delta(3,3,3) -> Affine(A~2)", str(classify(D333)) == "Affine(Ã₂)"),
        ("(2,3,7) -> Other", str(classify(triangle_matrix(2, 3, 7))) == "Other"),
    ]
    for name, cm in affine_catalog(10):
        (comp, t), = classify(cm).components
        checks.append((f"{name} self-classifies", t == TypeTag("Affine", name)))
    record(1, checks)


def test_criterion_2_centralizer_rank():
    r = centralizer_rank(affine_family("A", 2), 0)
    checks = [("A~2 at s1: commuting {s1}, k = 1", r.commuting == (0,) and r.k == 1)]
    for n in range(3, 9):
        checks.append((f"A~{n} at s{n}: k = 1", centralizer_rank(affine_family("A", n), n - 1).k == 1))
    rng = random.Random(2)
    for trial in range(100):
        n = rng.randint(1, 7)
        cm = CoxeterMatrix.from_edges(n, [(i, j, rng.choice([2, 4, 6, 8, 10, INF]))
                                          for i in range(n) for j in range(i + 1, n)])
        assert is_even(cm)
        checks.append((f"even diagram {trial}: k = 0", all(centralizer_rank(cm, s).k == 0 for s in range(n))))
    record(2, checks)


def test_criterion_3_word_problem():
    rep = build_rep(D333)
    g = [2, 0, 1] * 2
    t1w = [0, 1] + [1, 2] * 2
    t2w = [1, 2] + [2, 0] * 2
    model = build_affine_An(2)
    G = model.group
    t1, t2 = model.word(t1w), model.word(t2w)
    det = t1.v[0] * t2.v[1] - t1.v[1] * t2.v[0]
    checks = [
        ("g = (s3 s1 s2)^2 commutes with s1", words_equal(rep, g + [0], [0] + g)),
        ("s1 s2 has order 3", element_order(rep, [0, 1], 10) == Finite(3)),
        ("t1, t2 commute (reflection representation)", words_equal(rep, t1w + t2w, t2w + t1w)),
        ("t1, t2 commute (crystallographic model)", G.mul(t1, t2) == G.mul(t2, t1)),
        ("t1, t2 are translations", t1.g.is_identity() and t2.g.is_identity()),
        ("t1, t2 span a rank-2 lattice", det != 0),
    ]
    record(3, checks)


def test_criterion_4_a2_endomorphism():
    M = build_affine_An(2)
    G = M.group
    s1, s2, s3 = M.gens
    g = M.word([2, 0, 1] * 2)
    images = (s1, s2, G.conj(s3, g))
    phi = lambda w: G.product(*(images[i] for i in w))
    t1, t2 = M.translations
    p1, p2 = phi([0, 1, 1, 2, 1, 2]), phi([1, 2, 2, 0, 2, 0])
    checks = [
        ("phi(s1 s3) has order 3", G.order(phi([0, 2]), 20) == 3),
        ("phi(s2 s3) has order 3", G.order(phi([1, 2]), 20) == 3),
        ("phi(t1) = t1^4", p1 == G.power(t1, 4) and p1.v == tuple(4 * x for x in t1.v)),
        ("phi(t2) = t2^4", p2 == G.power(t2, 4) and p2.v == tuple(4 * x for x in t2.v)),
    ]
    record(4, checks)


def test_criterion_5_amalgam_suite():
    rep = verify_section_3_5(seed=0)
    counted = rep.counted()
    checks = [(f"check {i}: {c.name}", c.status == "pass") for i, c in enumerate(counted, 1)]
    checks.append(("ten counted checks", len(counted) == 10))
    record(5, checks)


def test_criterion_6_complement_swap():
    rep = verify_wlog(seed=0, instances=60)
    checks = [(c.name, c.status == "pass") for c in rep.checks]
    checks.append(("at least 50 instances", rep.checks[0].detail.startswith("60/60")))
    record(6, checks)


def test_criterion_7_fingerprints():
    Z4 = parse_presentation("gens a\nrel a^4")
    V4 = parse_presentation("gens a b\nrel a^2\nrel b^2\nrel [a, b]")
    f1, f2 = fingerprint(Z4, 31), fingerprint(V4, 31)
    checks = [
        ("Z/4 vs Z/2 x Z/2 differ", isinstance(compare(f1, f2), FirstDifference)),
        ("epi counts at Z/4: 2 vs 0", f1.counts("4.1")[1] == 2 and f2.counts("4.1")[1] == 0),
        ("identical presentations give Equal", compare(f1, fingerprint(Z4, 31)) == Equal(31)),
    ]
    for seed in range(12):
        base = BASES[seed % len(BASES)]
        other = tietze(base, random.Random(seed))
        checks.append((f"Tietze pair {seed}", compare(fingerprint(base, 12), fingerprint(other, 12)) == Equal(12)))
    for pres in BASES:
        fp = fingerprint(pres, 31)
        ok = True
        for a, b in PRODUCT_PAIRS:
            gid = catalog_id_of(direct_product(a.group, b.group)[0].table)
            ok &= fp.counts(gid)[0] == fp.counts(a.id)[0] * fp.counts(b.id)[0]
        checks.append((f"multiplicativity for {pres.relators}", ok))
        for e in load_catalog():
            if e.order > 12:
                break
            checks.append((f"oracle {e.id} for {pres.relators}", fp.counts(e.id) == hom_oracle(pres, e.table)))
    record(7, checks)


FORMULA_PARTS: dict = {}


def test_criterion_8_round_trips_and_finite_g():
    S3_PRES = parse_presentation("gens s t\nrel s^2\nrel t^2\nrel (s t)^3")
    subs = [[()], [(), (1,)], [(), (2,)]]
    chi = emit_chi(6)
    fg = emit_finite_g(S3_PRES, subs)
    gamma = emit_gamma(S3_PRES, [(1,)], emit_chi(2), subs, [(1, 2)])
    checks = [
        ("emit_chi round-trips", parse_formula(render(chi)) == chi),
        ("emit_finite_g round-trips", parse_formula(render(fg)) == fg),
        ("emit_gamma round-trips", parse_formula(render(gamma)) == gamma),
        ("gamma is EA", tag(gamma) == "EA"),
    ]
    agree = 0
    for gid, G in TWO_GEN:
        P = derive_presentation(G)
        class_words = subgroup_class_words(G)
        f = emit_finite_g(P, class_words)
        M = FiniteGroupModel(G, {})
        got = [idx for idx in itertools.product(range(G.order()), repeat=P.ngens)
               if evaluate(f, M, dict(zip(("x1", "x2"), idx)))]
        agree += got == finite_g_oracle(G, P, class_words)
    checks.append((f"Finite_G agrees with the oracle on {agree}/{len(TWO_GEN)} groups", agree == len(TWO_GEN)))
    FORMULA_PARTS["checks"] = checks
    failed = [d for d, ok in checks if not ok]
    assert not failed, failed


@pytest.mark.xfail(strict=True, reason="y^6 = 1 for every y in S3, so chi(6) holds at all six elements, "
                                       "not only on the trivial center")
def test_criterion_8_chi_six_on_s3_center():
    S3 = catalog_entry("6.2").group
    holds = satisfying(emit_chi(6), FiniteGroupModel(S3, {}), "x").tolist()
    centre = sorted(S3.index(z) for z in center(S3).elements())
    checks = list(FORMULA_PARTS.get("checks", [("round trips and Finite_G (not run)", False)]))
    checks.append((f"chi(6) over S3 holds exactly on the center: holds at {len(holds)} elements, "
                   f"center has {len(centre)}", holds == centre))
    record(8, checks)


def test_criterion_9_exact_algebra():
    rng = random.Random(9)
    checks = []
    snf_ok = 0
    for _ in range(1000):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        res = smith_normal_form(A)
        UAV = [[sum(res.U[i][k] * A[k][l] * res.V[l][j] for k in range(m) for l in range(n))
                for j in range(n)] for i in range(m)]
        d = res.diagonal
        ok = (UAV == res.S and abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
              and all(x >= 0 for x in d)
              and all((y == 0) if x == 0 else (y % x == 0) for x, y in zip(d, d[1:]))
              and all(res.S[i][j] == 0 for i in range(m) for j in range(n) if i != j))
        snf_ok += ok
    checks.append((f"SNF invariants on {snf_ok}/1000 random matrices", snf_ok == 1000))
    adj_ok = total = 0
    for trial in range(300):
        n = rng.randint(1, 6)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        if trial % 3 == 0 and n > 1:
            A[-1] = [a + b for a, b in zip(A[0], A[1 % n])]  # force a singular matrix
        B, det = adjugate(A)
        prod = [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        adj_ok += prod == [[det * (i == j) for j in range(n)] for i in range(n)]
        total += 1
    checks.append((f"adjugate identity on {adj_ok}/{total} matrices (a third singular)", adj_ok == total))
    checks.append(("commutant of the S3 root representation is 1",
                   commutant_dimension([[[-1, 1], [0, 1]], [[1, 0], [1, -1]]]) == 1))
    checks.append(("commutant of the Z/2 swap is 2", commutant_dimension([[[0, 1], [1, 0]]]) == 2))
    record(9, checks)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
