"""Amalgamated products A *_C B of finite permutation groups.

Every element has a unique reduced form c t1 t2 ... tk with c in C and the
t_i non-trivial coset representatives taken alternately from A and B. The
representative of a coset C a is its lexicographically smallest member
(compared as image arrays), so the identity represents C itself.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .permgrp import (PermGroup, Permutation, center, cycle_type, derive_presentation,
                      is_isomorphic_small)
from .presentation import render_word
from .report import VerificationReport

__all__ = [
    "FinAmalgam",
    "AmalgamElement",
    "AmalgamEndo",
    "AmalgamError",
    "NotInjective",
    "NotHomomorphism",
    "RelatorViolated",
    "DisagreeOnC",
    "make_amalgam",
    "normalize",
    "multiply",
    "define_endo",
    "PaperG",
    "build_paper_group",
    "verify_section_3_5",
]


class AmalgamError(ValueError):
    pass


class NotInjective(AmalgamError):
    pass


class NotHomomorphism(AmalgamError):
    pass


class RelatorViolated(AmalgamError):
    def __init__(self, factor, relator, names):
        self.factor, self.relator = factor, relator
        super().__init__(f"relator {render_word(relator, names)} of {factor} is not preserved")


class DisagreeOnC(AmalgamError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"the two images of C generator {index + 1} differ")


@dataclass(frozen=True)
class AmalgamElement:
    c: int  # index into the element list of C
    syllables: tuple  # ((factor "A" | "B", Permutation), ...)

    @property
    def length(self) -> int:
        return len(self.syllables)

    def pattern(self) -> str:
        return "".join(f for f, _ in self.syllables)


def _image_table(C: PermGroup, X: PermGroup, images, label):
    """Images in X of every element of C under the map given on C.gens."""
    images = list(images)
    if len(images) != len(C.gens):
        raise AmalgamError(f"embedding into {label} needs one image per generator of C")
    for g in images:
        if g.degree != X.degree or g not in X:
            raise AmalgamError(f"embedding image {g} is not in {label}")
    E = C.elements_array
    out = np.empty((len(E), X.degree), dtype=np.int64)
    out[0] = np.arange(X.degree)
    for i in range(1, len(E)):
        out[i] = out[C._parent[i]][np.array(images[C._letter[i]].images)]
    # homomorphism: image(c * s) = image(c) * image(s) along every edge
    for s, g in enumerate(C.gens):
        kids = C.index_rows(E[:, np.array(g.images, dtype=np.intp)])
        if not np.array_equal(out[kids], out[:, np.array(images[s].images)]):
            raise NotHomomorphism(f"embedding into {label} is not a homomorphism")
    if len({tuple(r) for r in out.tolist()}) != len(E):
        raise NotInjective(f"embedding into {label} is not injective")
    return out


class FinAmalgam:
    def __init__(self, A: PermGroup, B: PermGroup, C: PermGroup, embedA, embedB):
        self.A, self.B, self.C = A, B, C
        self.factors = {"A": A, "B": B}
        self._cimg = {"A": _image_table(C, A, embedA, "A"),
                      "B": _image_table(C, B, embedB, "B")}
        self._cindex = {f: {tuple(r): i for i, r in enumerate(t.tolist())}
                        for f, t in self._cimg.items()}
        self._cinv = [C.index(C.element(i).inverse()) for i in range(C.order())]
        self.embed_gens = {"A": tuple(embedA), "B": tuple(embedB)}

    def embed(self, factor: str, c: int) -> Permutation:
        return Permutation(tuple(self._cimg[factor][c]))

    def factor(self, f: str, a: Permutation):
        """(c, t) with a = embed(c) * t and t the coset representative."""
        imgs = self._cimg[f]
        rows = imgs[:, np.array(a.images)]  # rows c*a for every c in C
        best = min(range(len(rows)), key=lambda i: tuple(rows[i]))
        t = Permutation(tuple(rows[best]))
        return self._cinv[best], t

    def in_C(self, f: str, a: Permutation):
        """Index of a in C (via factor f) or None."""
        return self._cindex[f].get(a.images)

    def identity(self) -> AmalgamElement:
        return AmalgamElement(0, ())

    def lmul(self, f: str, x: Permutation, e: AmalgamElement) -> AmalgamElement:
        """x * e for a raw element x of factor f."""
        y = x * self.embed(f, e.c)
        rest = e.syllables
        if rest and rest[0][0] == f:
            y = y * rest[0][1]
            rest = rest[1:]
        c, t = self.factor(f, y)
        if t.is_identity():
            return AmalgamElement(c, rest)
        return AmalgamElement(c, ((f, t),) + rest)

    def raw(self, e: AmalgamElement):
        return [("A", self.embed("A", e.c))] + list(e.syllables)

    def element(self, f: str, x: Permutation) -> AmalgamElement:
        return self.lmul(f, x, self.identity())

    def mul(self, e1: AmalgamElement, e2: AmalgamElement) -> AmalgamElement:
        out = e2
        for f, x in reversed(self.raw(e1)):
            out = self.lmul(f, x, out)
        return out

    def inverse(self, e: AmalgamElement) -> AmalgamElement:
        return normalize(self, [(f, x.inverse()) for f, x in reversed(self.raw(e))])

    def product(self, *elems) -> AmalgamElement:
        out = self.identity()
        for e in reversed(elems):
            out = self.mul(e, out)
        return out

    def power(self, e: AmalgamElement, k: int) -> AmalgamElement:
        base = e if k >= 0 else self.inverse(e)
        out = self.identity()
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def conj(self, e: AmalgamElement, by: AmalgamElement) -> AmalgamElement:
        return self.product(by, e, self.inverse(by))

    def format(self, e: AmalgamElement) -> str:
        parts = [f"C:{self.embed('A', e.c)}"] + [f"{f}:{t}" for f, t in e.syllables]
        return " . ".join(parts)


def make_amalgam(A, B, C, embedA, embedB) -> FinAmalgam:
    return FinAmalgam(A, B, C, embedA, embedB)


def normalize(G: FinAmalgam, seq) -> AmalgamElement:
    """Reduced form of the product of (factor, permutation) pairs."""
    out = G.identity()
    for f, x in reversed(list(seq)):
        if f not in ("A", "B"):
            raise AmalgamError(f"unknown factor {f!r}")
        out = G.lmul(f, x, out)
    return out


def multiply(G: FinAmalgam, e1: AmalgamElement, e2: AmalgamElement) -> AmalgamElement:
    return G.mul(e1, e2)


# ---------------------------------------------------------------------------
# endomorphisms


class AmalgamEndo:
    def __init__(self, G: FinAmalgam, imagesA, imagesB, presA, presB):
        self.G = G
        self.images = {"A": tuple(imagesA), "B": tuple(imagesB)}
        self.presentations = {"A": presA, "B": presB}

    def _word_image(self, f, word):
        G = self.G
        out = G.identity()
        for s in reversed(word):
            out = G.mul(self.images[f][s], out)
        return out

    def on_factor(self, f: str, x: Permutation) -> AmalgamElement:
        return self._word_image(f, self.G.factors[f].word_of(x))

    def __call__(self, e: AmalgamElement) -> AmalgamElement:
        G = self.G
        out = G.identity()
        for f, x in reversed(G.raw(e)):
            out = G.mul(self.on_factor(f, x), out)
        return out


def _relator_image(G, images, r):
    out = G.identity()
    for x in reversed(r):
        img = images[abs(x) - 1]
        out = G.mul(img if x > 0 else G.inverse(img), out)
    return out


def define_endo(G: FinAmalgam, imagesA, imagesB, presA=None, presB=None) -> AmalgamEndo:
    """Endomorphism from images of A.gens and B.gens, checked on the relators
    of presentations of A and B and on agreement over C."""
    imagesA, imagesB = list(imagesA), list(imagesB)
    if len(imagesA) != len(G.A.gens) or len(imagesB) != len(G.B.gens):
        raise AmalgamError("one image per generator of A and of B required")
    presA = presA or derive_presentation(G.A)
    presB = presB or derive_presentation(G.B)
    for f, pres, imgs in (("A", presA, imagesA), ("B", presB, imagesB)):
        for r in pres.relators:
            if _relator_image(G, imgs, r) != G.identity():
                raise RelatorViolated(f, r, pres.names)
    endo = AmalgamEndo(G, imagesA, imagesB, presA, presB)
    for j in range(len(G.C.gens)):
        cj = G.C.index(G.C.gens[j])
        via_a = endo.on_factor("A", G.embed("A", cj))
        via_b = endo.on_factor("B", G.embed("B", cj))
        if via_a != via_b:
            raise DisagreeOnC(j)
    return endo


# ---------------------------------------------------------------------------
# the amalgam S6 x S6 *_{(Z/2)^4} S4 x S3 x S5


def _transpositions(points, degree):
    return [Permutation.from_cycles([[a, b]], degree) for a, b in zip(points, points[1:])]


@dataclass
class PaperG:
    G: FinAmalgam
    A1: PermGroup
    A2: PermGroup
    B1: PermGroup
    B2: PermGroup
    B3: PermGroup
    eA: tuple  # e1..e4 as elements of A
    eB: tuple  # e1..e4 as elements of B
    x: Permutation
    y: Permutation
    b: Permutation
    swap: Permutation  # conjugation by it is the factor swap of A
    sigma_bar: AmalgamEndo | None = None

    def sigma(self, a: Permutation) -> Permutation:
        return a.conj(self.swap)

    @property
    def E(self):
        """e1..e4 as amalgam elements."""
        return tuple(self.G.element("A", e) for e in self.eA)

    def elem(self, f: str, p: Permutation) -> AmalgamElement:
        return self.G.element(f, p)

    @property
    def u(self) -> AmalgamElement:
        G = self.G
        return G.product(self.elem("B", self.b), self.elem("A", self.x), self.elem("A", self.y),
                         self.elem("B", self.b))

    def action_on_E(self, w: AmalgamElement):
        """Permutation of {0,1,2,3} with w e_i w^-1 = e_perm[i], or None."""
        Es = self.E
        out = []
        for e in Es:
            img = self.G.conj(e, w)
            if img not in Es:
                return None
            out.append(Es.index(img))
        return tuple(out)


def build_paper_group() -> PaperG:
    P = Permutation.parse
    d = 12
    A1_gens = _transpositions(range(1, 7), d)
    A2_gens = _transpositions(range(7, 13), d)
    A = PermGroup(A1_gens + A2_gens, d, name="A")
    B1_gens = _transpositions(range(1, 5), d)
    B2_gens = _transpositions(range(5, 8), d)
    B3_gens = _transpositions(range(8, 13), d)
    B = PermGroup(B1_gens + B2_gens + B3_gens, d, name="B")
    C = PermGroup([P("(1 2)", 8), P("(3 4)", 8), P("(5 6)", 8), P("(7 8)", 8)], 8, name="C")
    eA = (P("(1 2)", d), P("(3 4)", d), P("(7 8)", d), P("(9 10)", d))
    eB = (P("(5 6)", d), P("(1 2)", d), P("(3 4)", d), P("(8 9)", d))
    G = make_amalgam(A, B, C, eA, eB)
    swap = Permutation(tuple((i + 6) % 12 for i in range(12)))
    return PaperG(
        G=G,
        A1=PermGroup(A1_gens, d, name="A1"), A2=PermGroup(A2_gens, d, name="A2"),
        B1=PermGroup(B1_gens, d, name="B1"), B2=PermGroup(B2_gens, d, name="B2"),
        B3=PermGroup(B3_gens, d, name="B3"),
        eA=eA, eB=eB,
        x=P("(1 3)(2 4)(5 6)", d), y=P("(7 9)(8 10)(11 12)", d), b=P("(1 3)(2 4)", d),
        swap=swap,
    )


def sigma_bar(pg: PaperG) -> AmalgamEndo:
    """sigma on A, conjugation by u on B."""
    G = pg.G
    u = pg.u
    imagesA = [G.element("A", pg.sigma(a)) for a in G.A.gens]
    imagesB = [G.conj(G.element("B", bg), u) for bg in G.B.gens]
    return define_endo(G, imagesA, imagesB)


def _restrict(p: Permutation, lo: int, hi: int) -> Permutation:
    """Action on points lo..hi (1-based, inclusive) renumbered from 1."""
    return Permutation(tuple(p.images[i] - (lo - 1) for i in range(lo - 1, hi)))


def _cycle_on_E(perm):
    names = [f"e{i + 1}" for i in range(4)]
    p = Permutation(perm)
    return "".join("(" + " ".join(names[j - 1] for j in c) + ")" for c in p.cycles()) or "()"


def random_reduced(G: FinAmalgam, rng: random.Random, length: int) -> list:
    """Raw sequence of `length` alternating elements outside C, plus a C prefix."""
    seq = [("A", G.embed("A", rng.randrange(G.C.order())))]
    f = rng.choice("AB")
    for _ in range(length):
        X = G.factors[f]
        while True:
            x = X.element(rng.randrange(X.order()))
            if G.in_C(f, x) is None:
                break
        seq.append((f, x))
        f = "B" if f == "A" else "A"
    return seq


def verify_section_3_5(seed: int = 0, corpus: int = 300) -> VerificationReport:
    rep = VerificationReport("amalgam")
    pg = build_paper_group()
    G = pg.G
    e1, e2, e3, e4 = pg.E
    b = pg.elem("B", pg.b)
    x = pg.elem("A", pg.x)
    y = pg.elem("A", pg.y)

    rep.run("(1) b e2 b^-1 = e3 and b e3 b^-1 = e2",
            lambda: (G.conj(e2, b) == e3 and G.conj(e3, b) == e2,
                     f"b e2 b^-1 = {G.format(G.conj(e2, b))}"))
    rep.run("(2) b commutes with e1 and e4",
            lambda: (G.mul(b, e1) == G.mul(e1, b) and G.mul(b, e4) == G.mul(e4, b), ""))

    def check3():
        ok = G.conj(e1, x) == e2 and G.conj(e2, x) == e1
        ay = pg.action_on_E(y)
        return ok and ay == (0, 1, 3, 2), f"y acts on E as {_cycle_on_E(ay)}"
    rep.run("(3) x e1 x^-1 = e2, x e2 x^-1 = e1, y acts as (e3 e4)", check3)

    def check4():
        imgs = [pg.sigma(e) for e in pg.eA]
        perm = tuple(pg.eA.index(i) if i in pg.eA else None for i in imgs)
        ok = perm == (2, 3, 0, 1) and pg.sigma(pg.x) == pg.y and pg.sigma(pg.y) == pg.x
        return ok, f"sigma on E: {_cycle_on_E(perm) if None not in perm else perm}"
    rep.run("(4) sigma restricted to C is (e1 e3)(e2 e4)", check4)

    u = pg.u

    def check5():
        agree = all(G.conj(e, u) == G.element("A", pg.sigma(a)) for e, a in zip(pg.E, pg.eA))
        pg.sigma_bar = sigma_bar(pg)
        return agree, (f"u = {G.format(u)}; normal form length {u.length} "
                       f"(pattern {u.pattern()}); sigma-bar accepted")
    rep.run("(5) ad(u)|C = sigma|C and sigma-bar is well defined", check5)

    def check6():
        bxy = G.product(b, x, y)
        a1 = pg.action_on_E(bxy)
        a5 = pg.action_on_E(G.power(bxy, 5))
        want = Permutation.from_cycles([[3, 4, 2, 1]], 4).images
        return a1 == want and a5 == a1, f"bxy acts as {_cycle_on_E(a1)}"
    rep.run("(6) bxy acts on E as (e3 e4 e2 e1) and (bxy)^5 acts as bxy", check6)

    def check7():
        sb = pg.sigma_bar or sigma_bar(pg)
        if sb(x) != y or sb(y) != x:
            return False, "sigma-bar does not swap x and y"
        rng = random.Random(seed)
        bad = 0
        for i in range(corpus):
            seq = random_reduced(G, rng, 1 + i % 4)
            w = normalize(G, seq)
            if w == G.identity() or sb(w) == G.identity():
                bad += 1
        return bad == 0, (f"{corpus} reduced elements of lengths 1..4 (seed {seed}) map to "
                          f"non-identity elements; bounded evidence of injectivity")
    rep.run("(7) sigma-bar swaps x, y and keeps non-trivial reduced forms non-trivial", check7)

    def check8():
        yr = _restrict(pg.y, 7, 12)
        ct_y = cycle_type(yr)
        C2 = PermGroup([_restrict(pg.eA[2], 7, 12), _restrict(pg.eA[3], 7, 12)], 6)
        types = sorted({tuple(cycle_type(c)) for c in C2.elements()})
        allowed = {(1,) * 6, (2,) + (1,) * 4, (2, 2, 1, 1)}
        S6 = PermGroup(_transpositions(range(1, 7), 6), 6)
        no_conj = all(yr.conj(g) not in C2 for g in S6.elements())
        return (ct_y == [2, 2, 2] and set(types) <= allowed and no_conj,
                f"cycle type of y: {ct_y}; types in <e3,e4>: {types}")
    rep.run("(8) y is not conjugate in A2 into <e3, e4>", check8)

    def check9():
        Bs = [pg.B1, pg.B2, pg.B3]
        centres = [center(Bi).order() for Bi in Bs]
        pairs = [is_isomorphic_small(Bs[i], Bs[j]) for i in range(3) for j in range(i + 1, 3)]
        return (all(c == 1 for c in centres) and not any(pairs),
                f"orders {[Bi.order() for Bi in Bs]}, centre orders {centres}")
    rep.run("(9) B1, B2, B3 pairwise non-isomorphic with trivial centres", check9)

    def check10():
        bxy = G.product(b, x, y)
        lhs = G.product(u, b, G.inverse(u), y, x, u, b, G.inverse(u))
        rhs = G.mul(G.power(bxy, 5), b)
        a_l, a_r, a_u = pg.action_on_E(lhs), pg.action_on_E(rhs), pg.action_on_E(u)
        return (a_l is not None and a_l == a_r == a_u,
                f"u b u^-1 y x u b u^-1 acts as {_cycle_on_E(a_l)}, same as (bxy)^5 b and u")
    rep.run("(10) u b u^-1 y x u b u^-1 acts on E as (bxy)^5 b", check10)

    rep.skip("B is not contained in the image of sigma-bar",
             "image membership needs machinery beyond normal forms; not checked")
    return rep
