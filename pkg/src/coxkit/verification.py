"""Report builders for the classification, centralizer-rank and complement-swap
checks (the reflection-model and amalgam reports live in crysto and amalgam)."""
from __future__ import annotations

import random

from .crysto import HNotAbelian, complement_swap, random_split_instance, search_complement, verify_a2_phi
from .amalgam import verify_section_3_5
from .diagram import (INF, CoxeterMatrix, affine_catalog, affine_family, centralizer_rank, classify,
                      classify_triangle, finite_catalog, is_even, parse_diagram,
                      special_spherical_subgroups, triangle_matrix, TypeTag)
from .permgrp import PermGroup, Permutation
from .report import VerificationReport
from .titsrep import ExceedsBound, Finite, build_rep, element_order, words_equal

__all__ = ["verify_classification", "verify_brink", "verify_wlog", "SECTIONS", "run_section"]

DELTA_333 = "verts 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 3\n"


def _self_classify(catalog, kind):
    bad = []
    for name, cm in catalog:
        comps = classify(cm).components
        if len(comps) != 1 or comps[0][1] != TypeTag(kind, name):
            bad.append(name)
    return not bad, f"{len(catalog)} diagrams" + (f"; mismatches: {', '.join(bad)}" if bad else "")


def verify_classification(max_rank: int = 10) -> VerificationReport:
    rep = VerificationReport("classification")
    d333 = parse_diagram(DELTA_333)
    rep.run("Delta(3,3,3) classifies as Affine(A~2)",
            lambda: (str(classify(d333)) == "Affine(Ã₂)", str(classify(d333))))
    rep.run("(2,3,7) triangle classifies as Other",
            lambda: (str(classify(triangle_matrix(2, 3, 7))) == "Other",
                     str(classify(triangle_matrix(2, 3, 7)))))
    rep.run(f"affine families classify as themselves (rank <= {max_rank})",
            lambda: _self_classify(affine_catalog(max_rank), "Affine"))
    rep.run(f"finite families classify as themselves (rank <= {max_rank})",
            lambda: _self_classify(finite_catalog(max_rank), "Spherical"))

    def trichotomy():
        cases = {(2, 3, 5): "Spherical", (3, 3, 3): "Affine", (2, 4, 4): "Affine",
                 (2, 3, 6): "Affine", (2, 3, 7): "Other", (3, 3, 4): "Other"}
        got = {k: classify_triangle(*k) for k in cases}
        same = all(got[k] == v for k, v in cases.items())
        agree = all(str(classify(triangle_matrix(*k)).tag).startswith(v) for k, v in cases.items())
        return same and agree, ", ".join(f"{k}:{v}" for k, v in got.items())
    rep.run("triangle trichotomy agrees with the diagram classifier", trichotomy)

    def special():
        subs = special_spherical_subgroups(d333)
        return len(subs) == 7 and max(len(s) for s in subs) == 2, f"{len(subs)} subsets"
    rep.run("Delta(3,3,3) has 7 special spherical subsets, none of size 3", special)
    return rep


def verify_brink(seed: int = 0, samples: int = 50) -> VerificationReport:
    rep = VerificationReport("brink")
    a2 = affine_family("A", 2)

    def a2_s1():
        r = centralizer_rank(a2, 0)
        return r.commuting == (0,) and r.k == 1, f"commuting {[i + 1 for i in r.commuting]}, k = {r.k}"
    rep.run("A~2 at s1: commuting set {s1}, free rank 1", a2_s1)

    def cycles():
        ks = {n: centralizer_rank(affine_family("A", n), n - 1).k for n in range(3, 9)}
        return all(k == 1 for k in ks.values()), str(ks)
    rep.run("A~n (3 <= n <= 8) at s_n: free rank 1", cycles)

    def even():
        rng = random.Random(seed)
        count = 0
        for _ in range(samples):
            n = rng.randint(2, 7)
            edges = [(i, j, rng.choice([2, 4, 6, 8, INF])) for i in range(n) for j in range(i + 1, n)]
            cm = CoxeterMatrix.from_edges(n, edges)
            assert is_even(cm)
            if any(centralizer_rank(cm, s).k != 0 for s in range(n)):
                return False, f"nonzero rank for {edges}"
            count += 1
        return True, f"{count} random even diagrams"
    rep.run("even diagrams: free rank 0 at every generator", even)

    def trees():
        bad = [nm for nm, cm in finite_catalog(8) if any(centralizer_rank(cm, s).k for s in range(cm.n))]
        return not bad, ", ".join(bad) or "all finite families up to rank 8"
    rep.run("tree-shaped diagrams: free rank 0", trees)

    rho = build_rep(parse_diagram(DELTA_333))
    g = (2, 0, 1) * 2
    h = (2, 1, 0) * 2
    inv = lambda w: tuple(reversed(w))  # generators are involutions

    rep.run("g = (s3 s1 s2)^2 commutes with s1",
            lambda: (words_equal(rho, g + (0,), (0,) + g), ""))
    rep.run("h = (s3 s2 s1)^2 commutes with s2",
            lambda: (words_equal(rho, h + (1,), (1,) + h), ""))
    rep.run("h^-1 g commutes with s3",
            lambda: (words_equal(rho, inv(h) + g + (2,), (2,) + inv(h) + g), ""))
    rep.run("g^-1 h = (s2 s3 s1)^2",
            lambda: (words_equal(rho, inv(g) + h, (1, 2, 0) * 2), ""))

    def orders():
        og, oh = element_order(rho, g, 200), element_order(rho, h, 200)
        o12 = element_order(rho, (0, 1), 200)
        ok = isinstance(og, ExceedsBound) and isinstance(oh, ExceedsBound) and o12 == Finite(3)
        return ok, f"g: {og}, h: {oh}, s1 s2: {o12}"
    rep.run("g and h have infinite order, s1 s2 has order 3", orders)

    rep.run("s1 does not commute with s2 (so s1 is not in Cent(s2))",
            lambda: (not words_equal(rho, (0, 1), (1, 0)), "the stated factor for Cent(s2) needs s2, not s1"))
    return rep


def verify_wlog(seed: int = 0, instances: int = 60) -> VerificationReport:
    rep = VerificationReport("wlog")
    rng = random.Random(seed)

    def random_instances():
        swapped = 0
        for t in range(instances):
            G, H, K = random_split_instance(rng)
            K2 = search_complement(G, H, K, rng)
            sw = complement_swap(G, H, K, K2)
            hidx = G.index_rows(H.elements_array)
            if not (sw.mapping[hidx] == hidx).all():
                return False, f"instance {t} moves H"
            if any(sw(k) not in K2 for k in K.gens):
                return False, f"instance {t} does not send K into K'"
            swapped += any(k not in K2 for k in K.gens)
        return True, f"{instances}/{instances} automorphisms, {swapped} with K' != K"
    rep.run(f"complement swap on {instances} random split instances with abelian H", random_instances)

    def s4():
        deg = 4
        S4 = PermGroup([Permutation.parse("(1 2)", deg), Permutation.parse("(1 2 3 4)", deg)], deg)
        A4 = PermGroup([Permutation.parse("(1 2 3)", deg), Permutation.parse("(2 3 4)", deg)], deg)
        K = PermGroup([Permutation.parse("(1 2)", deg)], deg)
        K2 = PermGroup([Permutation.parse("(3 4)", deg)], deg)
        try:
            complement_swap(S4, A4, K, K2)
        except HNotAbelian as exc:
            return True, str(exc)
        return False, "no error raised"
    rep.run("S4 with H = A4 is rejected as HNotAbelian", s4)
    return rep


SECTIONS = {
    "a2tilde": lambda seed: verify_a2_phi(),
    "amalgam": lambda seed: verify_section_3_5(seed=seed),
    "wlog": lambda seed: verify_wlog(seed=seed),
    "classification": lambda seed: verify_classification(),
    "brink": lambda seed: verify_brink(seed=seed),
}


def run_section(name: str, seed: int = 0) -> VerificationReport:
    if name not in SECTIONS:
        raise KeyError(f"unknown section {name!r}")
    return SECTIONS[name](seed)
